use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ExactError;

/// Minimum number of significant decimal digits accepted for a declared constant.
pub const MIN_DIGITS: usize = 50;

const KNOWN: &[(&str, &str)] = &[
    ("pi", "3.14159265358979323846264338327950288419716939937510582097494"),
    ("e", "2.71828182845904523536028747135266249775724709369995957496697"),
    ("sqrt2", "1.41421356237309504880168872420969807856967187537694807317668"),
    ("sqrt3", "1.73205080756887729352744634150587236694280525381038062805581"),
    ("sqrt5", "2.23606797749978969640917366873127623544061835961152572427090"),
    ("ln2", "0.693147180559945309417232121458176568075500134360255254120680"),
];

/// 60-digit decimal expansion of a built-in constant, if `name` is one.
pub fn known_constant(name: &str) -> Option<&'static str> {
    KNOWN.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
}

/// A finite list of named real constants, asserted linearly independent
/// over ℚ together with the implicit first element `1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantBasis {
    names: Vec<String>,
    decimals: Vec<String>,
    #[serde(skip)]
    approximations: Vec<BigRational>,
    #[serde(skip)]
    digits: Vec<usize>,
    independence_asserted: bool,
}

impl Default for ConstantBasis {
    fn default() -> Self {
        Self::rational()
    }
}

impl ConstantBasis {
    /// The basis `{1}`: every number is rational.
    pub fn rational() -> Self {
        ConstantBasis {
            names: Vec::new(),
            decimals: Vec::new(),
            approximations: Vec::new(),
            digits: Vec::new(),
            independence_asserted: true,
        }
    }

    /// Build a basis from `(name, decimal)` pairs.
    pub fn new<I, S, T>(constants: I, independence_asserted: bool) -> Result<Self, ExactError>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut basis = Self::rational();
        basis.independence_asserted = independence_asserted;
        for (name, decimal) in constants {
            basis.push(name.into(), decimal.into())?;
        }
        Ok(basis)
    }

    /// Basis made of built-in constants (`pi`, `e`, `sqrt2`, `sqrt3`, `sqrt5`, `ln2`).
    pub fn with_known(names: &[&str]) -> Result<Self, ExactError> {
        let pairs = names
            .iter()
            .map(|n| {
                known_constant(n)
                    .map(|v| (n.to_string(), v.to_string()))
                    .ok_or_else(|| ExactError::InvalidBasis(format!("unknown built-in constant `{n}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(pairs, true)
    }

    fn push(&mut self, name: String, decimal: String) -> Result<(), ExactError> {
        if !is_identifier(&name) {
            return Err(ExactError::InvalidBasis(format!("`{name}` is not an identifier")));
        }
        if self.names.contains(&name) {
            return Err(ExactError::InvalidBasis(format!("constant `{name}` declared twice")));
        }
        let (value, digits) = parse_decimal(&decimal)
            .ok_or_else(|| ExactError::InvalidBasis(format!("`{decimal}` is not a decimal literal")))?;
        if value.is_zero() {
            return Err(ExactError::InvalidBasis(format!("constant `{name}` is zero")));
        }
        if digits < MIN_DIGITS {
            return Err(ExactError::InvalidBasis(format!(
                "constant `{name}` has {digits} significant digits, at least {MIN_DIGITS} are required"
            )));
        }
        if value == BigRational::one() || self.approximations.contains(&value) {
            return Err(ExactError::InvalidBasis(format!(
                "constant `{name}` duplicates another basis element"
            )));
        }
        self.names.push(name);
        self.decimals.push(decimal);
        self.approximations.push(value);
        self.digits.push(digits);
        Ok(())
    }

    /// Restore the derived fields after deserialization.
    pub fn rebuild(self) -> Result<Self, ExactError> {
        let pairs: Vec<_> = self.names.into_iter().zip(self.decimals).collect();
        Self::new(pairs, self.independence_asserted)
    }

    /// Number of coordinates of an [`ExtendedRational`](super::ExtendedRational) over this basis.
    pub fn dim(&self) -> usize {
        self.names.len() + 1
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn decimals(&self) -> &[String] {
        &self.decimals
    }

    pub fn independence_asserted(&self) -> bool {
        self.independence_asserted
    }

    /// Position of `name` in the coordinate vector (1-based, 0 is the constant 1).
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name).map(|i| i + 1)
    }

    /// Exact rational value of the decimal approximation of coordinate `i`.
    pub fn approximation(&self, i: usize) -> BigRational {
        if i == 0 {
            BigRational::one()
        } else {
            self.approximations[i - 1].clone()
        }
    }

    /// Smallest number of significant digits among the declared constants.
    pub fn min_digits(&self) -> Option<usize> {
        self.digits.iter().copied().min()
    }

    /// Absolute error bound of the approximation of coordinate `i`.
    pub fn error_bound(&self, i: usize) -> BigRational {
        if i == 0 {
            return BigRational::zero();
        }
        // one unit in the last declared significant digit
        let value = &self.approximations[i - 1];
        let magnitude = decimal_exponent(value);
        let exp = magnitude - self.digits[i - 1] as i64 + 1;
        pow10(exp)
    }

    /// Human-readable echo of the independence assertion.
    pub fn assertion_echo(&self) -> String {
        if self.names.is_empty() {
            "no irrational constants declared; all coordinates are rational".to_string()
        } else {
            let flag = if self.independence_asserted { "asserted" } else { "NOT asserted" };
            format!("{{1, {}}} linearly independent over Q ({flag})", self.names.join(", "))
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parse a plain decimal literal into an exact rational and its significant-digit count.
pub(crate) fn parse_decimal(s: &str) -> Option<(BigRational, usize)> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let significant = all.trim_start_matches('0').len();
    let numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let mut value = BigRational::new(numer, denom);
    if neg {
        value = -value;
    }
    Some((value, significant))
}

fn pow10(exp: i64) -> BigRational {
    let ten = BigInt::from(10);
    if exp >= 0 {
        BigRational::from_integer(num_traits::pow(ten, exp as usize))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(ten, (-exp) as usize))
    }
}

/// Decimal exponent `k` with `10^k <= |x| < 10^(k+1)`.
fn decimal_exponent(x: &BigRational) -> i64 {
    let x = x.abs();
    let mut k: i64 = 0;
    while x >= pow10(k + 1) {
        k += 1;
    }
    while x < pow10(k) {
        k -= 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_constants_parse() {
        let b = ConstantBasis::with_known(&["pi", "sqrt2"]).unwrap();
        assert_eq!(b.dim(), 3);
        assert_eq!(b.index_of("sqrt2"), Some(2));
        assert!(b.min_digits().unwrap() >= MIN_DIGITS);
        let err = b.error_bound(1);
        assert!(err < BigRational::new(1.into(), num_traits::pow(BigInt::from(10), 55)));
    }

    #[test]
    fn rejects_short_and_duplicate() {
        assert!(ConstantBasis::new([("pi", "3.14159")], true).is_err());
        let pi = known_constant("pi").unwrap();
        assert!(ConstantBasis::new([("pi", pi), ("tau", pi)], true).is_err());
        assert!(ConstantBasis::new([("pi", pi), ("pi", pi)], true).is_err());
        assert!(ConstantBasis::new([("1x", pi)], true).is_err());
    }

    #[test]
    fn decimal_parsing() {
        let (v, d) = parse_decimal("-0.00125").unwrap();
        assert_eq!(v, BigRational::new((-1).into(), 800.into()));
        assert_eq!(d, 3);
        assert!(parse_decimal("1e5").is_none());
        assert_eq!(decimal_exponent(&BigRational::new(1.into(), 800.into())), -3);
    }
}
