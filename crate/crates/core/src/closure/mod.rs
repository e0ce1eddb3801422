//! Closures of the additive group generated by a support, written as
//! `V ⊕ Λ` with `V` a subspace and `Λ` a lattice transversal to it.

mod certificate;
mod compute;
mod decompose;

pub use certificate::HyperplaneCertificate;
pub use compute::{closure_1d, closure_multid, kronecker_check, lattice_hnf, orthogonalize, ClosureConfig, KroneckerResult};
pub use decompose::{decompose_measure, CosetPart, Decomposition};

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::exact::{rational_ratio, ConstantBasis, ExtendedRational, Ratio};
use crate::linalg::{self, QMat, QVec};
use crate::numerics::ProbeReport;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosureError {
    #[error("lattice generators must have rational coordinates: {0}")]
    NotRational(String),
    #[error("the subspace V is not spanned by rational vectors; exact projection is unavailable")]
    IrrationalSubspace,
    #[error("the closure is dense; there is no lattice structure to certify")]
    Dense,
    #[error("support point {0} lies in no coset V + a with a in the lattice")]
    NotInCoset(String),
    #[error("separation between cosets is zero")]
    ZeroSeparation,
    #[error("continuous part `{0}` does not lie inside a single coset")]
    ContinuousOutsideCoset(String),
    #[error("no rational hyperplane certificate found: {0}")]
    NoCertificate(String),
    #[error("certificate check failed: {0}")]
    InvalidCertificate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Exact,
    NumericalProbe,
}

/// Which structural case produced the closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureRoute {
    /// Empty support: the closure is `{0}`.
    Trivial,
    ContainsBall,
    Accumulation,
    UnboundedSequence,
    /// One-dimensional finite support: gcd or an irrational ratio.
    OneDimensional,
    Lattice,
    ProductAxes,
    Kronecker,
    ScaledLattice,
    /// Certified subspace from continuous parts and sequence lines, remaining points resolved exactly.
    AffinePieces,
    Probe,
}

impl ClosureRoute {
    pub fn name(&self) -> &'static str {
        match self {
            ClosureRoute::Trivial => "trivial",
            ClosureRoute::ContainsBall => "contains_ball",
            ClosureRoute::Accumulation => "accumulation",
            ClosureRoute::UnboundedSequence => "unbounded_sequence",
            ClosureRoute::OneDimensional => "one_dimensional",
            ClosureRoute::Lattice => "lattice_hnf",
            ClosureRoute::ProductAxes => "product_axes",
            ClosureRoute::Kronecker => "kronecker",
            ClosureRoute::ScaledLattice => "scaled_lattice",
            ClosureRoute::AffinePieces => "affine_pieces",
            ClosureRoute::Probe => "numerical_probe",
        }
    }
}

/// Why a closure is dense.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityEvidence {
    /// An interval, a ball or a sphere lies in the support.
    ContinuousPart(String),
    Accumulation { at: Vec<ExtendedRational> },
    IrrationalPair { a: ExtendedRational, b: ExtendedRational },
    /// Sequence `index` has unbounded reduced denominators along its direction.
    UnboundedSequence { index: usize, detail: String },
    /// The only integer vector annihilating all generators modulo ℤ is zero.
    NoAnnihilator,
    Probe,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedSubgroup {
    pub dimension: usize,
    pub v_basis: Vec<Vec<ExtendedRational>>,
    pub lambda_basis: Vec<Vec<ExtendedRational>>,
    pub orthogonal: bool,
    pub provenance: Provenance,
    pub route: ClosureRoute,
    pub evidence: Option<DensityEvidence>,
    pub probe: Option<ProbeReport>,
    /// Probe results that are neither dense-likely nor lattice-like.
    pub inconclusive: bool,
}

impl ClosedSubgroup {
    pub fn is_dense(&self) -> bool {
        self.v_basis.len() == self.dimension
    }

    pub fn is_certified(&self) -> bool {
        self.provenance == Provenance::Exact
    }

    /// Rational basis of `V`, when every coordinate is rational.
    pub fn v_rational(&self) -> Option<Vec<QVec>> {
        self.v_basis.iter().map(|v| rational_vec(v)).collect()
    }

    /// Exact membership `x ∈ V ⊕ Λ`; requires `orthogonal` and a rational `V`.
    pub fn contains(&self, x: &[ExtendedRational]) -> Result<bool, ClosureError> {
        let vq = self.v_rational().ok_or(ClosureError::IrrationalSubspace)?;
        let dim = x.first().map_or(1, ExtendedRational::dim);
        let perp = if vq.is_empty() {
            x.to_vec()
        } else {
            let p = projection(&vq, self.dimension);
            let px = linalg::apply(&p, x, dim);
            x.iter().zip(&px).map(|(a, b)| a - b).collect()
        };
        Ok(lattice_coords(&self.lambda_basis, &perp).is_some())
    }

    /// Canonical bases: `V` in reduced row echelon form, `Λ` in Hermite normal
    /// form over the lifted coordinates.
    pub fn canonical(mut self) -> Self {
        if let Some(vq) = self.v_rational() {
            let (r, piv) = linalg::rref(&vq);
            let dim = self.dim_hint();
            self.v_basis = r[..piv.len()].iter().map(|v| to_ext(v, dim)).collect();
        }
        self.lambda_basis = canonical_lattice(&self.lambda_basis);
        self
    }

    fn dim_hint(&self) -> usize {
        self.v_basis
            .iter()
            .chain(&self.lambda_basis)
            .flat_map(|v| v.first())
            .map(ExtendedRational::dim)
            .next()
            .unwrap_or(1)
    }

    pub fn describe(&self, basis: &ConstantBasis) -> String {
        let show = |vs: &[Vec<ExtendedRational>]| {
            vs.iter().map(|v| crate::measure::show_point(v, basis)).collect::<Vec<_>>().join(", ")
        };
        if self.is_dense() {
            return format!("R^{}", self.dimension);
        }
        let v = if self.v_basis.is_empty() { "{0}".to_string() } else { format!("span{{{}}}", show(&self.v_basis)) };
        let l = if self.lambda_basis.is_empty() { "{0}".to_string() } else { format!("Z{{{}}}", show(&self.lambda_basis)) };
        format!("{v} + {l}")
    }
}

pub(crate) fn rational_vec(v: &[ExtendedRational]) -> Option<QVec> {
    v.iter().map(|x| x.as_rational().cloned()).collect()
}

pub(crate) fn to_ext(v: &[BigRational], dim: usize) -> Vec<ExtendedRational> {
    v.iter().map(|x| ExtendedRational::from_rational(x.clone(), dim)).collect()
}

/// `⟨n, x⟩` for a rational `n`.
pub(crate) fn dot_ext(n: &[BigRational], x: &[ExtendedRational], dim: usize) -> ExtendedRational {
    n.iter().zip(x).fold(ExtendedRational::zero(dim), |acc, (c, xi)| if c.is_zero() { acc } else { &acc + &xi.scale(c) })
}

/// If `v = s·r` for a scalar `s` and a rational vector `r`, return `r`
/// normalised to 1 at its first nonzero entry.
pub(crate) fn rational_direction(v: &[ExtendedRational]) -> Option<QVec> {
    let s = v.iter().find(|x| !x.is_zero())?;
    v.iter()
        .map(|x| match rational_ratio(s, x) {
            Ok(Ratio::Rational(r)) => Some(r),
            _ => None,
        })
        .collect()
}

/// Orthogonal projection matrix onto the span of rational vectors.
pub(crate) fn projection(v: &[QVec], d: usize) -> QMat {
    if v.is_empty() {
        return vec![vec![BigRational::zero(); d]; d];
    }
    let vt = linalg::transpose(&v.to_vec());
    let gram = linalg::mat_mul(&v.to_vec(), &vt);
    let inv = linalg::inverse(&gram).expect("independent vectors have an invertible Gram matrix");
    linalg::mat_mul(&linalg::mat_mul(&vt, &inv), &v.to_vec())
}

/// Integer coordinates of `x` in a lattice basis over the lifted coordinates.
pub(crate) fn lattice_coords(basis: &[Vec<ExtendedRational>], x: &[ExtendedRational]) -> Option<Vec<num_bigint::BigInt>> {
    let lifted: Vec<QVec> = basis.iter().map(|b| linalg::lift(b)).collect();
    linalg::lattice_coordinates(&lifted, &linalg::lift(x))
}

pub(crate) fn canonical_lattice(basis: &[Vec<ExtendedRational>]) -> Vec<Vec<ExtendedRational>> {
    let Some(first) = basis.first() else { return Vec::new() };
    let dim = first.first().map_or(1, ExtendedRational::dim);
    let lifted: Vec<QVec> = basis.iter().map(|b| linalg::lift(b)).collect();
    let n = lifted[0].len();
    linalg::rational_hnf(&lifted, n).into_iter().map(|v| linalg::unlift(&v, dim)).collect()
}

pub(crate) fn norm_f64(v: &[ExtendedRational], basis: &ConstantBasis) -> f64 {
    v.iter().map(|x| x.to_f64(basis).powi(2)).sum::<f64>().sqrt()
}
