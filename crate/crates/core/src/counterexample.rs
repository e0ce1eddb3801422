//! Explicit bounded nonconstant solutions `U(x) = cos(2π λ_x)` and
//! periodicity checks.

use std::f64::consts::PI;

use thiserror::Error;

use crate::closure::{ClosedSubgroup, ClosureError, HyperplaneCertificate};
use crate::exact::{rational_ratio, rational_to_f64, ConstantBasis, ExtendedRational, Ratio};
use crate::measure::show_point;
use crate::numerics::TestFunction;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CounterexampleError {
    #[error("c lies in H: the certificate cannot produce a nonconstant function")]
    CInH,
    #[error(transparent)]
    Closure(#[from] ClosureError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CounterexampleKind {
    /// `U(x) = cos(2π x / g)`.
    Cosine1d { g: ExtendedRational },
    /// `U(x) = cos(2π λ_x)` with `x = x_H + λ_x c`, `x_H ∈ H`.
    CosineCoset { h_basis: Vec<Vec<ExtendedRational>>, c: Vec<ExtendedRational> },
}

/// A bounded, nonconstant, `(H + cℤ)`-periodic function.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub kind: CounterexampleKind,
    pub certificate: HyperplaneCertificate,
    basis: ConstantBasis,
    normal: Vec<f64>,
    spacing: f64,
}

impl Counterexample {
    pub fn from_certificate(cert: HyperplaneCertificate, basis: &ConstantBasis) -> Result<Self, CounterexampleError> {
        if cert.spacing.is_zero() {
            return Err(CounterexampleError::CInH);
        }
        let dim = basis.dim();
        let kind = if cert.normal.len() == 1 {
            CounterexampleKind::Cosine1d { g: cert.c[0].clone() }
        } else {
            CounterexampleKind::CosineCoset {
                h_basis: cert.h_basis.iter().map(|v| v.iter().map(|x| ExtendedRational::from_rational(x.clone(), dim)).collect()).collect(),
                c: cert.c.clone(),
            }
        };
        let normal = cert.normal.iter().map(rational_to_f64).collect();
        let spacing = cert.spacing.to_f64(basis);
        Ok(Counterexample { kind, certificate: cert, basis: basis.clone(), normal, spacing })
    }

    /// `λ_x` in floating point.
    pub fn lambda(&self, x: &[f64]) -> f64 {
        self.normal.iter().zip(x).map(|(n, xi)| n * xi).sum::<f64>() / self.spacing
    }

    /// `λ_x` exactly, when it is a rational number.
    pub fn lambda_exact(&self, x: &[ExtendedRational]) -> Option<num_rational::BigRational> {
        let dim = self.basis.dim();
        let num = self
            .certificate
            .normal
            .iter()
            .zip(x)
            .fold(ExtendedRational::zero(dim), |acc, (n, xi)| &acc + &xi.scale(n));
        match rational_ratio(&self.certificate.spacing, &num) {
            Ok(Ratio::Rational(r)) => Some(r),
            _ => None,
        }
    }

    pub fn closed_form(&self) -> String {
        match &self.kind {
            CounterexampleKind::Cosine1d { g } => format!("U(x) = cos(2 pi x / ({}))", g.display(&self.basis)),
            CounterexampleKind::CosineCoset { c, .. } => {
                let n: Vec<String> = self.certificate.normal.iter().map(|v| v.to_string()).collect();
                format!(
                    "U(x) = cos(2 pi <n, x> / ({})) with n = ({}), c = {}",
                    self.certificate.spacing.display(&self.basis),
                    n.join(", "),
                    show_point(c, &self.basis)
                )
            }
        }
    }
}

impl TestFunction for Counterexample {
    fn dim(&self) -> usize {
        self.normal.len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (2.0 * PI * self.lambda(x)).cos()
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let s = -2.0 * PI * (2.0 * PI * self.lambda(x)).sin() / self.spacing;
        self.normal.iter().map(|n| n * s).collect()
    }
    fn sup_bound(&self) -> Option<f64> {
        Some(1.0)
    }
    fn hessian_bound(&self, _x: &[f64], _radius: f64) -> f64 {
        let n2: f64 = self.normal.iter().map(|n| n * n).sum();
        (2.0 * PI).powi(2) * n2 / (self.spacing * self.spacing)
    }
    /// Shifts in `H + cℤ` leave `U` unchanged exactly.
    fn shifted_value(&self, x: &[f64], shift: &[ExtendedRational], _basis: &ConstantBasis) -> Option<f64> {
        self.certificate.coset_index(shift).map(|_| self.value(x))
    }
    fn describe(&self) -> String {
        self.closed_form()
    }
}

/// The coset cosine attached to the canonical certificate of a non-dense closure.
pub fn build_counterexample(closure: &ClosedSubgroup, basis: &ConstantBasis) -> Result<Counterexample, CounterexampleError> {
    let cert = HyperplaneCertificate::from_closure(closure, basis)?;
    Counterexample::from_certificate(cert, basis)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicityCheck {
    pub passed: bool,
    pub max_deviation: f64,
    /// `(sample index, generator index)` attaining the maximum.
    pub worst: Option<(usize, usize)>,
}

/// `max_{x, s} |u(x + s) − u(x)|` over samples and generators; passes when `≤ tol`.
pub fn check_periodicity(u: &dyn TestFunction, generators: &[Vec<f64>], samples: &[Vec<f64>], tol: f64) -> PeriodicityCheck {
    let mut max_deviation: f64 = 0.0;
    let mut worst = None;
    for (i, x) in samples.iter().enumerate() {
        let ux = u.value(x);
        for (j, s) in generators.iter().enumerate() {
            let y: Vec<f64> = x.iter().zip(s).map(|(a, b)| a + b).collect();
            let dev = (u.value(&y) - ux).abs();
            if dev > max_deviation || worst.is_none() {
                max_deviation = max_deviation.max(dev);
                worst = Some((i, j));
            }
        }
    }
    PeriodicityCheck { passed: max_deviation <= tol, max_deviation, worst }
}

/// Like [`check_periodicity`], but shifts by exact generators: functions that
/// know their exact translation behaviour (`shifted_value`) avoid rounding
/// `x + s`, which for steep cosines costs `|∇u| · ulp`.
pub fn check_periodicity_exact(
    u: &dyn TestFunction,
    generators: &[Vec<ExtendedRational>],
    samples: &[Vec<f64>],
    basis: &ConstantBasis,
    tol: f64,
) -> PeriodicityCheck {
    let mut max_deviation: f64 = 0.0;
    let mut worst = None;
    for (i, x) in samples.iter().enumerate() {
        let ux = u.value(x);
        for (j, s) in generators.iter().enumerate() {
            let shifted = u.shifted_value(x, s, basis).unwrap_or_else(|| {
                let y: Vec<f64> = x.iter().zip(s).map(|(a, b)| a + b.to_f64(basis)).collect();
                u.value(&y)
            });
            let dev = (shifted - ux).abs();
            if dev > max_deviation || worst.is_none() {
                max_deviation = max_deviation.max(dev);
                worst = Some((i, j));
            }
        }
    }
    PeriodicityCheck { passed: max_deviation <= tol, max_deviation, worst }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::closure_1d;
    use crate::measure::{parse_measure, support_of};
    use crate::numerics::Cosine;

    #[test]
    fn half_lattice_gives_cos_4pi() {
        let mu = parse_measure("dimension = 1\n[[atoms]]\npoint = [\"1/2\"]\nweight = \"1\"\n[[atoms]]\npoint = [\"3/2\"]\nweight = \"1\"\n").unwrap();
        let g = closure_1d(&support_of(&mu), &mu.basis);
        let u = build_counterexample(&g, &mu.basis).unwrap();
        assert!(matches!(&u.kind, CounterexampleKind::Cosine1d { g } if g.as_rational() == Some(&num_rational::BigRational::new(1.into(), 2.into()))));
        for x in [0.0, 0.1, 0.37] {
            assert!((u.value(&[x]) - (4.0 * PI * x).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn periodicity_examples() {
        let u = Cosine { frequency: vec![2.0 * PI], phase: 0.0 };
        let samples = vec![vec![0.0], vec![0.3]];
        assert!(check_periodicity(&u, &[vec![1.0]], &samples, 1e-12).passed);
        let half = check_periodicity(&u, &[vec![0.5]], &samples, 1e-12);
        assert!(!half.passed);
        assert!((half.max_deviation - 2.0).abs() < 1e-12);
        assert_eq!(half.worst, Some((0, 0)));
    }
}
