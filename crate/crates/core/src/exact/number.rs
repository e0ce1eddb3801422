use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ConstantBasis, ExactError};

/// A real number `q_0 + q_1·α_1 + … + q_m·α_m` with rational coordinates
/// over a [`ConstantBasis`].
///
/// Ordering is lexicographic on coordinates and only serves canonical
/// sorting; use [`ExtendedRational::approx`] for numeric comparisons.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtendedRational {
    coords: Vec<BigRational>,
}

impl ExtendedRational {
    pub fn zero(dim: usize) -> Self {
        ExtendedRational { coords: vec![BigRational::zero(); dim.max(1)] }
    }

    pub fn from_rational(r: BigRational, dim: usize) -> Self {
        let mut x = Self::zero(dim);
        x.coords[0] = r;
        x
    }

    pub fn from_integer(n: i64, dim: usize) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()), dim)
    }

    /// The basis constant with coordinate index `i` (0 is the number 1).
    pub fn basis_element(i: usize, dim: usize) -> Self {
        let mut x = Self::zero(dim);
        x.coords[i] = BigRational::one();
        x
    }

    pub fn from_coords(coords: Vec<BigRational>) -> Self {
        assert!(!coords.is_empty(), "an extended rational has at least one coordinate");
        ExtendedRational { coords }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The rational value, if every irrational coordinate vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    fn check(&self, other: &Self) -> Result<(), ExactError> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(ExactError::BasisMismatch(self.dim(), other.dim()))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        ExtendedRational {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        ExtendedRational { coords: self.coords.iter().map(|c| c * r).collect() }
    }

    /// Exact value of the decimal approximation of this number.
    pub fn approx(&self, basis: &ConstantBasis) -> BigRational {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c * basis.approximation(i))
            .fold(BigRational::zero(), |acc, t| acc + t)
    }

    /// Upper bound on `|approx - true value|`.
    pub fn approx_error(&self, basis: &ConstantBasis) -> BigRational {
        self.coords
            .iter()
            .enumerate()
            .map(|(i, c)| c.abs() * basis.error_bound(i))
            .fold(BigRational::zero(), |acc, t| acc + t)
    }

    pub fn to_f64(&self, basis: &ConstantBasis) -> f64 {
        rational_to_f64(&self.approx(basis))
    }

    /// Sign of the number, decided from the declared approximations.
    pub fn signum(&self, basis: &ConstantBasis) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let v = self.approx(basis);
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            // exact cancellation of the approximations; fall back on the leading coordinate
            let lead = self.coords.iter().rev().find(|c| !c.is_zero()).unwrap();
            if lead.is_positive() { 1 } else { -1 }
        }
    }

    pub fn abs(&self, basis: &ConstantBasis) -> Self {
        if self.signum(basis) < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Render with the basis names, e.g. `3/2 + pi`.
    pub fn display<'a>(&'a self, basis: &'a ConstantBasis) -> Display<'a> {
        Display { x: self, basis }
    }
}

impl Add for &ExtendedRational {
    type Output = ExtendedRational;
    fn add(self, rhs: &ExtendedRational) -> ExtendedRational {
        self.checked_add(rhs).expect("basis mismatch in addition")
    }
}

impl Sub for &ExtendedRational {
    type Output = ExtendedRational;
    fn sub(self, rhs: &ExtendedRational) -> ExtendedRational {
        self.checked_sub(rhs).expect("basis mismatch in subtraction")
    }
}

impl Neg for &ExtendedRational {
    type Output = ExtendedRational;
    fn neg(self) -> ExtendedRational {
        ExtendedRational { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Neg for ExtendedRational {
    type Output = ExtendedRational;
    fn neg(self) -> ExtendedRational {
        -&self
    }
}

pub struct Display<'a> {
    x: &'a ExtendedRational,
    basis: &'a ConstantBasis,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.x.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                let name = &self.basis.names()[i - 1];
                if mag.is_one() {
                    write!(f, "{name}")?;
                } else if mag.is_integer() {
                    write!(f, "{mag}*{name}")?;
                } else if mag.numer().is_one() {
                    write!(f, "{name}/{}", mag.denom())?;
                } else {
                    write!(f, "{}*{name}/{}", mag.numer(), mag.denom())?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Outcome of [`rational_ratio`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ratio {
    Rational(BigRational),
    Irrational,
}

/// Decide whether `b / a` is rational; if so return it.
pub fn rational_ratio(a: &ExtendedRational, b: &ExtendedRational) -> Result<Ratio, ExactError> {
    a.check(b)?;
    let pivot = a.coords.iter().position(|c| !c.is_zero()).ok_or(ExactError::ZeroInput)?;
    let r = &b.coords[pivot] / &a.coords[pivot];
    let proportional = a.coords.iter().zip(&b.coords).all(|(x, y)| &(x * &r) == y);
    Ok(if proportional { Ratio::Rational(r) } else { Ratio::Irrational })
}

/// `Q(a, b)`: the reduced denominator of `b / a`, or infinity when the ratio is irrational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QValue {
    /// `b / a = p / q` with `gcd(|p|, q) = 1`, `q >= 1`.
    Finite { p: BigInt, q: BigInt },
    Infinite,
}

impl QValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, QValue::Infinite)
    }

    pub fn q(&self) -> Option<&BigInt> {
        match self {
            QValue::Finite { q, .. } => Some(q),
            QValue::Infinite => None,
        }
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QValue::Finite { p, q } => write!(f, "{q} (ratio {p}/{q})"),
            QValue::Infinite => write!(f, "+inf"),
        }
    }
}

pub fn q_of(a: &ExtendedRational, b: &ExtendedRational) -> Result<QValue, ExactError> {
    if a.is_zero() || b.is_zero() {
        return Err(ExactError::ZeroInput);
    }
    Ok(match rational_ratio(a, b)? {
        // BigRational is kept in lowest terms with a positive denominator
        Ratio::Rational(r) => QValue::Finite { p: r.numer().clone(), q: r.denom().clone() },
        Ratio::Irrational => QValue::Infinite,
    })
}

/// Largest `g > 0` such that `x` and `y` are both integer multiples of `g`.
pub fn rational_gcd(x: &BigRational, y: &BigRational) -> Result<BigRational, ExactError> {
    if x.is_negative() || y.is_negative() {
        return Err(ExactError::Negative);
    }
    match (x.is_zero(), y.is_zero()) {
        (true, true) => Err(ExactError::BothZero),
        (true, false) => Ok(y.clone()),
        (false, true) => Ok(x.clone()),
        (false, false) => {
            let (p1, q1) = (x.numer(), x.denom());
            let (p2, q2) = (y.numer(), y.denom());
            let num = (p1 * q2).gcd(&(p2 * q1));
            Ok(BigRational::new(num, q1 * q2))
        }
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // very large numerator/denominator: scale down before converting
    let n = r.numer().bits() as i64;
    let d = r.denom().bits() as i64;
    let shift = (n - d) - 60;
    let scaled = if shift > 0 {
        r / BigRational::from_integer(BigInt::one() << shift as usize)
    } else {
        r * BigRational::from_integer(BigInt::one() << (-shift) as usize)
    };
    let n2 = scaled.numer().to_f64().unwrap_or(f64::NAN);
    let d2 = scaled.denom().to_f64().unwrap_or(f64::NAN);
    (n2 / d2) * 2f64.powi(shift as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_expr;

    fn basis() -> ConstantBasis {
        ConstantBasis::with_known(&["pi"]).unwrap()
    }

    fn x(s: &str) -> ExtendedRational {
        parse_expr(s, &basis()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn coordinate_arithmetic() {
        assert_eq!(&x("1") + &x("2*pi"), x("1 + 2*pi"));
        assert_eq!(-x("3/2"), x("-3/2"));
        assert_eq!(x("pi").scale(&rat(1, 3)), x("pi/3"));
        let other = ExtendedRational::zero(1);
        assert_eq!(x("1").checked_add(&other), Err(ExactError::BasisMismatch(2, 1)));
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(rational_ratio(&x("2"), &x("3")).unwrap(), Ratio::Rational(rat(3, 2)));
        assert_eq!(rational_ratio(&x("1"), &x("pi")).unwrap(), Ratio::Irrational);
        assert_eq!(rational_ratio(&x("pi"), &x("2*pi/3")).unwrap(), Ratio::Rational(rat(2, 3)));
        assert_eq!(rational_ratio(&x("0"), &x("1")), Err(ExactError::ZeroInput));
    }

    #[test]
    fn q_examples() {
        let q = q_of(&x("1"), &x("3/2")).unwrap();
        assert_eq!(q, QValue::Finite { p: 3.into(), q: 2.into() });
        let q = q_of(&x("2"), &x("26/5")).unwrap();
        assert_eq!(q, QValue::Finite { p: 13.into(), q: 5.into() });
        assert_eq!(q_of(&x("1"), &x("pi")).unwrap(), QValue::Infinite);
        assert_eq!(q_of(&x("pi"), &x("-pi")).unwrap(), QValue::Finite { p: (-1).into(), q: 1.into() });
        assert!(q_of(&x("0"), &x("pi")).is_err());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(rational_gcd(&rat(3, 2), &rat(5, 4)).unwrap(), rat(1, 4));
        assert_eq!(rational_gcd(&rat(6, 1), &rat(4, 1)).unwrap(), rat(2, 1));
        assert_eq!(rational_gcd(&rat(7, 3), &rat(0, 1)).unwrap(), rat(7, 3));
        assert_eq!(rational_gcd(&rat(0, 1), &rat(0, 1)), Err(ExactError::BothZero));
    }

    #[test]
    fn display_roundtrip() {
        let b = basis();
        for s in ["3/2 + pi", "-pi/3", "1/2 - pi/2", "0", "-2 - 5*pi", "7*pi/2"] {
            let v = x(s);
            let shown = v.display(&b).to_string();
            assert_eq!(parse_expr(&shown, &b).unwrap(), v, "{shown}");
        }
    }

    #[test]
    fn sign_from_approximation() {
        let b = basis();
        assert_eq!(x("pi - 3").signum(&b), 1);
        assert_eq!(x("22/7 - pi").signum(&b), 1);
        assert_eq!(x("3 - pi").signum(&b), -1);
        assert!((x("pi").to_f64(&b) - std::f64::consts::PI).abs() < 1e-15);
    }
}
