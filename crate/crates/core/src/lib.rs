//! Decide whether a nonlocal diffusion operator driven by a symmetric Lévy
//! measure has the Liouville property, and back every answer with a
//! certificate that can be re-checked.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`] : exact arithmetic over a declared basis of ℚ-independent
//!   real constants (`1, π, √2, …`), the `Q(a, b)` denominator function,
//!   rational gcds and small-fractional-part witnesses.
//! * [`measure`] : the measure data model, the TOML measure-spec format and
//!   support descriptors.
//! * [`closure`] : closures of the additive group generated by a support,
//!   lattice bases, Kronecker checks, orthogonal decompositions.
//! * [`decider`] : the holds/fails decision with certificates.
//! * [`counterexample`] : explicit bounded nonconstant solutions and
//!   periodicity checks.
//! * [`numerics`] : evaluation of `L^μ[u]`, propagation of maximum sets and
//!   the numerical density probe.
//! * [`cli`] : report types and the command implementations behind the
//!   `liouville` binary.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod cli;
pub mod closure;
pub mod counterexample;
pub mod decider;
pub mod exact;
pub mod linalg;
pub mod measure;
pub mod numerics;

pub use closure::{ClosedSubgroup, Decomposition, HyperplaneCertificate};
pub use counterexample::{build_counterexample, check_periodicity, check_periodicity_exact, Counterexample};
pub use decider::{decide, decide_1d, DecideConfig, LiouvilleVerdict, Route};
pub use exact::{ConstantBasis, ExtendedRational, QValue};
pub use measure::{parse_measure, LevyMeasure, SupportDescriptor};
