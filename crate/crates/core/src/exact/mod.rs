//! Exact arithmetic over a finite basis of real constants.
//!
//! Every real number the toolkit manipulates is a ℚ-linear combination
//! `q_0·1 + q_1·α_1 + … + q_m·α_m` of constants the user asserts to be
//! linearly independent over ℚ. Under that assertion equality, zero tests and
//! rationality of ratios are decidable coordinate-wise.

mod basis;
mod expr;
mod number;
mod witness;

pub use basis::{known_constant, ConstantBasis, MIN_DIGITS};
pub(crate) use basis::parse_decimal;
pub(crate) use number::rational_to_f64;
pub use expr::parse_expr;
pub use number::{q_of, rational_gcd, rational_ratio, ExtendedRational, QValue, Ratio};
pub use witness::{density_witness, DensityWitness, DEFAULT_WITNESS_CAP};

use thiserror::Error;

/// Errors raised by exact arithmetic.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("operands belong to different constant bases ({0} vs {1} coordinates)")]
    BasisMismatch(usize, usize),
    #[error("division by an exact zero")]
    ZeroInput,
    #[error("rational_gcd needs at least one nonzero argument")]
    BothZero,
    #[error("negative argument to rational_gcd")]
    Negative,
    #[error("the ratio is rational ({0}); no density witness exists below its floor")]
    RationalRatio(String),
    #[error("witness arguments must be positive")]
    NonPositive,
    #[error("tolerance {0:e} is below the numeric resolution of the declared constants")]
    BelowResolution(f64),
    #[error("witness search exceeded the cap of {0} multiples")]
    CapReached(u64),
    #[error("invalid constant basis: {0}")]
    InvalidBasis(String),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
}
