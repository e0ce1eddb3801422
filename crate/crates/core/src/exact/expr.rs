//! Parser for coordinate strings such as `3/2 + 1*pi` or `(1 + sqrt2)/2`.
//!
//! Only integer literals and declared constant names are allowed, combined
//! with `+ - * /` and parentheses. Products of two irrational factors and
//! division by an irrational factor are rejected: they are not linear over
//! the basis.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{ConstantBasis, ExactError, ExtendedRational};

pub fn parse_expr(input: &str, basis: &ConstantBasis) -> Result<ExtendedRational, ExactError> {
    let tokens = tokenize(input)?;
    let mut p = Parser { tokens, pos: 0, basis, input };
    let value = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Op(char),
}

fn tokenize(input: &str) -> Result<Vec<Tok>, ExactError> {
    let err = |reason: &str| ExactError::Parse { input: input.to_string(), reason: reason.to_string() };
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i] == '.' || chars[i] == 'e' || chars[i] == 'E') {
                return Err(err("floating-point literals are not allowed, use exact fractions"));
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Int(s.parse().map_err(|_| err("bad integer"))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(chars[start..i].iter().collect()));
        } else if "+-*/()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '.' {
            return Err(err("floating-point literals are not allowed, use exact fractions"));
        } else {
            return Err(err(&format!("unexpected character `{c}`")));
        }
    }
    if out.is_empty() {
        return Err(err("empty expression"));
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    basis: &'a ConstantBasis,
    input: &'a str,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> ExactError {
        ExactError::Parse { input: self.input.to_string(), reason: reason.to_string() }
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<ExtendedRational, ExactError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ExtendedRational, ExactError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                match (acc.as_rational(), rhs.as_rational()) {
                    (Some(r), _) => rhs.scale(r),
                    (_, Some(r)) => acc.scale(r),
                    _ => return Err(self.error("product of two irrational factors is not linear")),
                }
            } else {
                match rhs.as_rational() {
                    Some(r) if r.is_zero() => return Err(self.error("division by zero")),
                    Some(r) => acc.scale(&(BigRational::from_integer(1.into()) / r)),
                    None => return Err(self.error("division by an irrational factor is not linear")),
                }
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ExtendedRational, ExactError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<ExtendedRational, ExactError> {
        let dim = self.basis.dim();
        let tok = self.tokens.get(self.pos).cloned().ok_or_else(|| self.error("unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(ExtendedRational::from_rational(BigRational::from_integer(n), dim)),
            Tok::Name(name) => {
                let idx = self
                    .basis
                    .index_of(&name)
                    .ok_or_else(|| self.error(&format!("unknown constant `{name}`")))?;
                Ok(ExtendedRational::basis_element(idx, dim))
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.error("missing `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Tok::Op(c) => Err(self.error(&format!("unexpected `{c}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis() -> ConstantBasis {
        ConstantBasis::with_known(&["pi", "sqrt2"]).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn linear_forms() {
        let b = basis();
        let v = parse_expr("3/2 + 1*pi", &b).unwrap();
        assert_eq!(v.coords(), &[rat(3, 2), rat(1, 1), rat(0, 1)]);
        let v = parse_expr("(1 + sqrt2)/2 - pi*2/3", &b).unwrap();
        assert_eq!(v.coords(), &[rat(1, 2), rat(-2, 3), rat(1, 2)]);
        let v = parse_expr("-(-sqrt2)", &b).unwrap();
        assert_eq!(v.coords(), &[rat(0, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn rejects_nonlinear_and_floats() {
        let b = basis();
        for bad in ["pi*sqrt2", "1/pi", "1.5", "2e3", "tau", "1/0", "(1", "", "1 +"] {
            assert!(parse_expr(bad, &b).is_err(), "{bad}");
        }
    }
}
