//! Floating-point side: operator quadrature with error bounds, propagation of
//! maximum sets and the density probe.

pub mod functions;
mod operator;
mod propagate;
pub mod quadrature;
pub mod special;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use functions::{parse_test_function, Cosine, GaussianBump, HarmonicPolynomial, Perturbed, TestFunction};
pub use operator::{eval_operator, fourier_symbol, ComponentEvaluation, Evaluation, EvaluatorConfig, OperatorEvaluator};
pub use propagate::{classify, density_probe, propagate, ProbeConfig, ProbeReport, ProbeVerdict, Propagation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("test function is unbounded but the {0} part has unbounded support")]
    UnboundedFunction(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("error bound {bound:e} exceeds tolerance {tolerance:e} (value {value})")]
    ToleranceExceeded { value: f64, bound: f64, tolerance: f64 },
    #[error("unknown test function {0:?}")]
    UnknownFunction(String),
    #[error("the support is empty")]
    EmptySupport,
    #[error("i/o: {0}")]
    Io(String),
}

/// `count` points uniform in `[−radius, radius]^d`, reproducible from `seed`.
pub fn sample_points(d: usize, count: usize, radius: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..d).map(|_| rng.random_range(-radius..=radius)).collect()).collect()
}
