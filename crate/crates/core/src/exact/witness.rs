//! Witnesses that `aℤ + bℤ` has elements arbitrarily close to zero when
//! `b / a` is irrational.
//!
//! The smallest `n ≥ 1` with `0 < n·b − ⌊n·b/a⌋·a < ε` is a record minimum of
//! the fractional parts `{nθ}`, `θ = b/a`. Those records occur exactly at the
//! denominators of the lower semiconvergents of `θ`: `q_0 = 1`, then
//! `q_k + j·q_{k+1}` for even `k` and `1 ≤ j ≤ a_{k+2}`. Along one such run
//! the fractional part decreases by a constant step, so the first hit below
//! `ε` is found in closed form instead of by a linear scan.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::number::{rational_to_f64, Ratio};
use super::{rational_ratio, ConstantBasis, ExactError, ExtendedRational};

/// Default bound on the multiple `n` explored by [`density_witness`].
pub const DEFAULT_WITNESS_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityWitness {
    /// Smallest multiple with a small positive remainder.
    pub n: u64,
    /// `n·b − ⌊n·b/a⌋·a`, evaluated on the declared approximations.
    pub value: f64,
    /// Guaranteed bound on the error of `value`.
    pub error_bound: f64,
}

pub fn density_witness(
    a: &ExtendedRational,
    b: &ExtendedRational,
    eps: f64,
    basis: &ConstantBasis,
    cap: u64,
) -> Result<DensityWitness, ExactError> {
    if a.is_zero() {
        return Err(ExactError::ZeroInput);
    }
    if let Ratio::Rational(r) = rational_ratio(a, b)? {
        return Err(ExactError::RationalRatio(r.to_string()));
    }
    let a_val = a.approx(basis);
    let b_val = b.approx(basis);
    if !a_val.is_positive() || !b_val.is_positive() || !(eps > 0.0) {
        return Err(ExactError::NonPositive);
    }
    let eps_q = BigRational::from_float(eps).ok_or(ExactError::NonPositive)?;
    let theta = &b_val / &a_val;
    let target = &eps_q / &a_val;

    // |θ_approx − θ| ≤ (err_b + θ·err_a) / (a − err_a)
    let err_a = a.approx_error(basis);
    let err_b = b.approx_error(basis);
    let theta_err = (&err_b + &theta * &err_a) / (&a_val - &err_a);
    if target <= &theta_err * BigRational::from_integer(4.into()) {
        return Err(ExactError::BelowResolution(eps));
    }

    let frac = |n: &BigInt| -> BigRational {
        let x = &theta * BigRational::from_integer(n.clone());
        &x - x.floor()
    };
    let accept = |n: &BigInt| -> Result<Option<DensityWitness>, ExactError> {
        let v = frac(n);
        if v.is_positive() && v < target {
            let slack = BigRational::from_integer(n.clone()) * &theta_err;
            if v <= slack || &v + &slack >= target {
                return Err(ExactError::BelowResolution(eps));
            }
            let n64 = n.to_u64().expect("n is bounded by the cap");
            return Ok(Some(DensityWitness {
                n: n64,
                value: rational_to_f64(&(&v * &a_val)),
                error_bound: rational_to_f64(&(&slack * &a_val)) + rational_to_f64(&(BigRational::from_integer(n.clone()) * &err_b)),
            }));
        }
        Ok(None)
    };

    let cap_big = BigInt::from(cap);
    let mut cf = ContinuedFraction::new(theta.clone());
    // convergent denominators q_{k-1}, q_k with q_{-1} = 0, q_0 = 1
    let mut q_prev = BigInt::zero();
    let mut q_cur = BigInt::one();
    let _a0 = cf.next_term().ok_or(ExactError::BelowResolution(eps))?;
    if let Some(w) = accept(&q_cur)? {
        return Ok(w);
    }
    let mut k = 0usize;
    loop {
        // advance to q_{k+1}
        let a_next = cf.next_term().ok_or(ExactError::BelowResolution(eps))?;
        let q_next = &a_next * &q_cur + &q_prev;
        q_prev = std::mem::replace(&mut q_cur, q_next);
        k += 1;
        if k % 2 == 1 {
            // q_prev = q_{k-1} (even index), q_cur = q_k; semiconvergents q_{k-1} + j q_k
            let Some(a_after) = cf.peek_term() else {
                return Err(ExactError::BelowResolution(eps));
            };
            let base = frac(&q_prev);
            let step = &base - frac(&(&q_prev + &q_cur));
            if !step.is_positive() {
                return Err(ExactError::BelowResolution(eps));
            }
            // first j with base − j·step < target
            let need = ((&base - &target) / &step).floor().to_integer() + BigInt::one();
            let j = need.max(BigInt::one());
            if j <= a_after {
                let n = &q_prev + &j * &q_cur;
                if n > cap_big {
                    return Err(ExactError::CapReached(cap));
                }
                if let Some(w) = accept(&n)? {
                    return Ok(w);
                }
                // rounding of the closed form; fall through to a short scan
                let mut jj = j + BigInt::one();
                while jj <= a_after {
                    let n = &q_prev + &jj * &q_cur;
                    if n > cap_big {
                        return Err(ExactError::CapReached(cap));
                    }
                    if let Some(w) = accept(&n)? {
                        return Ok(w);
                    }
                    jj += 1;
                }
            }
        }
        if q_cur > cap_big {
            return Err(ExactError::CapReached(cap));
        }
    }
}

/// Lazy continued-fraction expansion of a rational number.
struct ContinuedFraction {
    rest: Option<BigRational>,
    lookahead: Option<BigInt>,
}

impl ContinuedFraction {
    fn new(x: BigRational) -> Self {
        ContinuedFraction { rest: Some(x), lookahead: None }
    }

    fn produce(&mut self) -> Option<BigInt> {
        let x = self.rest.take()?;
        let a = x.floor().to_integer();
        let f = &x - BigRational::from_integer(a.clone());
        if !f.is_zero() {
            self.rest = Some(f.recip());
        }
        Some(a)
    }

    fn next_term(&mut self) -> Option<BigInt> {
        self.lookahead.take().or_else(|| self.produce())
    }

    fn peek_term(&mut self) -> Option<BigInt> {
        if self.lookahead.is_none() {
            self.lookahead = self.produce();
        }
        self.lookahead.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_expr;

    /// Linear scan oracle on f64 values.
    fn brute(a: f64, b: f64, eps: f64, limit: u64) -> Option<(u64, f64)> {
        (1..=limit).find_map(|n| {
            let nb = n as f64 * b;
            let v = nb - (nb / a).floor() * a;
            (v > 0.0 && v < eps).then_some((n, v))
        })
    }

    fn setup() -> ConstantBasis {
        ConstantBasis::with_known(&["pi", "sqrt2", "sqrt3", "e"]).unwrap()
    }

    #[test]
    fn sqrt2_example() {
        let b = setup();
        let w = density_witness(&parse_expr("1", &b).unwrap(), &parse_expr("sqrt2", &b).unwrap(), 0.1, &b, DEFAULT_WITNESS_CAP).unwrap();
        assert_eq!(w.n, 5);
        assert!((w.value - 0.071_067_811_865_475_24).abs() < 1e-12);
        assert_eq!(brute(1.0, 2f64.sqrt(), 0.1, 10).unwrap().0, 5);
    }

    #[test]
    fn pi_example_hits_first_multiple() {
        let b = setup();
        let w = density_witness(&parse_expr("1", &b).unwrap(), &parse_expr("pi", &b).unwrap(), 0.2, &b, DEFAULT_WITNESS_CAP).unwrap();
        assert_eq!(w.n, 1);
        assert!((w.value - (std::f64::consts::PI - 3.0)).abs() < 1e-12);
    }

    #[test]
    fn scaled_sqrt2_example() {
        let b = setup();
        let w = density_witness(&parse_expr("2", &b).unwrap(), &parse_expr("2*sqrt2", &b).unwrap(), 0.2, &b, DEFAULT_WITNESS_CAP).unwrap();
        assert_eq!(w.n, 5);
        assert!((w.value - 0.142_135_623_730_950_5).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_linear_scan() {
        let b = setup();
        let cases = [
            ("1", "pi"),
            ("1", "sqrt2"),
            ("3", "e"),
            ("sqrt3", "1"),
            ("pi", "sqrt2"),
            ("1/7", "sqrt3 + 2"),
            ("2*pi", "5*e/3"),
        ];
        for (sa, sb) in cases {
            let a = parse_expr(sa, &b).unwrap();
            let bb = parse_expr(sb, &b).unwrap();
            let (af, bf) = (a.to_f64(&b), bb.to_f64(&b));
            for eps in [0.3, 0.05, 0.01, 1e-3, 1e-4] {
                let eps = eps * af;
                let expect = brute(af, bf, eps, 200_000);
                let got = density_witness(&a, &bb, eps, &b, DEFAULT_WITNESS_CAP).ok();
                assert_eq!(got.as_ref().map(|w| w.n), expect.map(|e| e.0), "{sa} {sb} {eps}");
                if let (Some(g), Some(e)) = (got, expect) {
                    assert!((g.value - e.1).abs() < 1e-9);
                    assert!(g.value > 0.0 && g.value < eps);
                }
            }
        }
    }

    #[test]
    fn errors() {
        let b = setup();
        let one = parse_expr("1", &b).unwrap();
        let pi = parse_expr("pi", &b).unwrap();
        assert!(matches!(density_witness(&one, &parse_expr("3/2", &b).unwrap(), 0.1, &b, 100), Err(ExactError::RationalRatio(_))));
        assert!(matches!(density_witness(&one, &pi, 1e-70, &b, u64::MAX), Err(ExactError::BelowResolution(_))));
        assert!(matches!(density_witness(&one, &pi, 1e-9, &b, 1000), Err(ExactError::CapReached(1000))));
        assert!(matches!(density_witness(&-&one, &pi, 0.1, &b, 1000), Err(ExactError::NonPositive)));
    }
}
