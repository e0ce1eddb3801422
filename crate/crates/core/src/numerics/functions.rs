//! Test functions fed to the operator evaluator.

use crate::exact::{ConstantBasis, ExtendedRational};

use super::NumericsError;

pub trait TestFunction: Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    /// Central differences by default.
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        (0..x.len())
            .map(|i| {
                let h = 1e-6 * (1.0 + x[i].abs());
                y[i] = x[i] + h;
                let up = self.value(&y);
                y[i] = x[i] - h;
                let down = self.value(&y);
                y[i] = x[i];
                (up - down) / (2.0 * h)
            })
            .collect()
    }

    /// `sup |u|` over ℝ^d, `None` when `u` is unbounded.
    fn sup_bound(&self) -> Option<f64>;

    /// Bound on the operator norm of `D²u` over the ball `B(x, radius)`.
    fn hessian_bound(&self, x: &[f64], radius: f64) -> f64;

    /// `u(x + shift)` computed from exact data, when the function can do better
    /// than adding the shift in floating point.
    fn shifted_value(&self, _x: &[f64], _shift: &[ExtendedRational], _basis: &ConstantBasis) -> Option<f64> {
        None
    }

    fn describe(&self) -> String;

    /// `ξ` when `u` is a plane wave `cos(ξ·x + φ)`, so that `L u = ψ(ξ) u`.
    fn plane_wave_frequency(&self) -> Option<&[f64]> {
        None
    }
}

/// `cos(ξ·x + φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cosine {
    pub frequency: Vec<f64>,
    pub phase: f64,
}

impl TestFunction for Cosine {
    fn dim(&self) -> usize {
        self.frequency.len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (dot(&self.frequency, x) + self.phase).cos()
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let s = -(dot(&self.frequency, x) + self.phase).sin();
        self.frequency.iter().map(|k| k * s).collect()
    }
    fn sup_bound(&self) -> Option<f64> {
        Some(1.0)
    }
    fn hessian_bound(&self, _x: &[f64], _radius: f64) -> f64 {
        dot(&self.frequency, &self.frequency)
    }
    fn describe(&self) -> String {
        format!("cos(xi.x + {}) with xi = {:?}", self.phase, self.frequency)
    }
    fn plane_wave_frequency(&self) -> Option<&[f64]> {
        Some(&self.frequency)
    }
}

/// Harmonic polynomials of degree ≤ 2.
#[derive(Debug, Clone, PartialEq)]
pub enum HarmonicPolynomial {
    /// `c + a·x`
    Affine { constant: f64, linear: Vec<f64> },
    /// `x_i² − x_j²`
    SquareDifference { d: usize, i: usize, j: usize },
    /// `x_i x_j`, `i ≠ j`
    Product { d: usize, i: usize, j: usize },
}

impl TestFunction for HarmonicPolynomial {
    fn dim(&self) -> usize {
        match self {
            HarmonicPolynomial::Affine { linear, .. } => linear.len(),
            HarmonicPolynomial::SquareDifference { d, .. } | HarmonicPolynomial::Product { d, .. } => *d,
        }
    }
    fn value(&self, x: &[f64]) -> f64 {
        match self {
            HarmonicPolynomial::Affine { constant, linear } => constant + dot(linear, x),
            HarmonicPolynomial::SquareDifference { i, j, .. } => x[*i] * x[*i] - x[*j] * x[*j],
            HarmonicPolynomial::Product { i, j, .. } => x[*i] * x[*j],
        }
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        match self {
            HarmonicPolynomial::Affine { linear, .. } => g.copy_from_slice(linear),
            HarmonicPolynomial::SquareDifference { i, j, .. } => {
                g[*i] = 2.0 * x[*i];
                g[*j] = -2.0 * x[*j];
            }
            HarmonicPolynomial::Product { i, j, .. } => {
                g[*i] = x[*j];
                g[*j] = x[*i];
            }
        }
        g
    }
    fn sup_bound(&self) -> Option<f64> {
        match self {
            HarmonicPolynomial::Affine { constant, linear } if linear.iter().all(|a| *a == 0.0) => Some(constant.abs()),
            _ => None,
        }
    }
    fn hessian_bound(&self, _x: &[f64], _radius: f64) -> f64 {
        match self {
            HarmonicPolynomial::Affine { .. } => 0.0,
            HarmonicPolynomial::SquareDifference { .. } => 2.0,
            HarmonicPolynomial::Product { .. } => 1.0,
        }
    }
    fn describe(&self) -> String {
        match self {
            HarmonicPolynomial::Affine { constant, linear } => format!("{constant} + {linear:?}.x"),
            HarmonicPolynomial::SquareDifference { i, j, .. } => format!("x{}^2 - x{}^2", i + 1, j + 1),
            HarmonicPolynomial::Product { i, j, .. } => format!("x{} x{}", i + 1, j + 1),
        }
    }
}

/// `amplitude · exp(−|x − center|² / (2 width²))`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBump {
    pub center: Vec<f64>,
    pub width: f64,
    pub amplitude: f64,
}

impl TestFunction for GaussianBump {
    fn dim(&self) -> usize {
        self.center.len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(&self.center).map(|(a, c)| (a - c).powi(2)).sum();
        self.amplitude * (-r2 / (2.0 * self.width * self.width)).exp()
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let v = self.value(x);
        x.iter().zip(&self.center).map(|(a, c)| -v * (a - c) / (self.width * self.width)).collect()
    }
    fn sup_bound(&self) -> Option<f64> {
        Some(self.amplitude.abs())
    }
    fn hessian_bound(&self, _x: &[f64], _radius: f64) -> f64 {
        // |D²(e^{−r²/2})| ≤ max(1, 2e^{−3/2}) = 1 in units of width^{-2}
        self.amplitude.abs() / (self.width * self.width)
    }
    fn describe(&self) -> String {
        format!("{} exp(-|x - {:?}|^2 / (2 {}^2))", self.amplitude, self.center, self.width)
    }
}

/// `base + bump`: a control that breaks periodicity.
pub struct Perturbed<F> {
    pub base: F,
    pub bump: GaussianBump,
}

impl<F: TestFunction> TestFunction for Perturbed<F> {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.base.value(x) + self.bump.value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.base.gradient(x).iter().zip(self.bump.gradient(x)).map(|(a, b)| a + b).collect()
    }
    fn sup_bound(&self) -> Option<f64> {
        Some(self.base.sup_bound()? + self.bump.sup_bound()?)
    }
    fn hessian_bound(&self, x: &[f64], radius: f64) -> f64 {
        self.base.hessian_bound(x, radius) + self.bump.hessian_bound(x, radius)
    }
    fn describe(&self) -> String {
        format!("{} + {}", self.base.describe(), self.bump.describe())
    }
}

/// Parse a built-in test function name.
///
/// Accepted: `cos` (first coordinate), `cos:ξ1,ξ2,…`, `x1^2-x2^2`, `x1*x2`,
/// `bump`, `bump:width`.
pub fn parse_test_function(name: &str, d: usize) -> Result<Box<dyn TestFunction>, NumericsError> {
    let bad = || NumericsError::UnknownFunction(name.to_string());
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h.trim(), Some(a.trim())),
        None => (name.trim(), None),
    };
    let compact: String = head.chars().filter(|c| !c.is_whitespace()).collect();
    match compact.as_str() {
        "cos" => {
            let frequency = match arg {
                None => {
                    let mut f = vec![0.0; d];
                    f[0] = 1.0;
                    f
                }
                Some(a) => a.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?,
            };
            if frequency.len() != d {
                return Err(bad());
            }
            Ok(Box::new(Cosine { frequency, phase: 0.0 }))
        }
        "x1^2-x2^2" if d >= 2 => Ok(Box::new(HarmonicPolynomial::SquareDifference { d, i: 0, j: 1 })),
        "x1*x2" if d >= 2 => Ok(Box::new(HarmonicPolynomial::Product { d, i: 0, j: 1 })),
        "bump" => {
            let width = match arg {
                None => 1.0,
                Some(a) => a.parse::<f64>().map_err(|_| bad())?,
            };
            Ok(Box::new(GaussianBump { center: vec![0.0; d], width, amplitude: 1.0 }))
        }
        _ => Err(bad()),
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
