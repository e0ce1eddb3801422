//! Symmetric Lévy measures: finite atoms, template sequences of atoms and
//! tagged continuous parts, plus the support descriptors derived from them.

mod spec;
mod support;
mod template;

pub use spec::{parse_document, parse_measure, parse_rational, MeasureDocument};
pub use support::{lebesgue_split, support_of, AffinePiece, LebesgueSplit, SequenceSummary, SupportDescriptor};
pub use template::{AtomSequence, PointRule, SequenceBehaviour, WeightRule};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ConstantBasis, ExactError, ExtendedRational};
use crate::linalg::{self, QVec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("{field}: {source}")]
    Field { field: String, source: ExactError },
    #[error("zero atom at {0}: the support excludes the origin")]
    ZeroAtom(String),
    #[error("asymmetric measure: {0}")]
    Asymmetric(String),
    #[error("divergent Lévy integral: {0}")]
    Divergent(String),
    #[error("invalid sequence template: {0}")]
    Template(String),
    #[error("invalid continuous part: {0}")]
    Continuous(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryMode {
    /// Insert missing mirror atoms.
    #[default]
    Complete,
    /// Reject input whose atoms are not listed with their mirrors.
    Strict,
}

/// `weight · δ_point`; the measure stores both `a` and `−a` explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub point: Vec<ExtendedRational>,
    pub weight: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RadialKernel {
    /// Centered Gaussian density with standard deviation `sigma` per axis, total mass `mass`.
    Gaussian { sigma: f64, mass: f64 },
    /// `mass` spread uniformly on the ball of the given radius.
    UniformBall { radius: f64, mass: f64 },
}

/// One-dimensional profile carried by a lower-dimensional affine piece.
#[derive(Debug, Clone, PartialEq)]
pub enum AffineProfile {
    /// Fractional kernel of the piece's own dimension; only allowed through the origin.
    Fractional { alpha: f64 },
    /// Gaussian of mass `mass` centred at the offset (and at its mirror).
    Gaussian { sigma: f64, mass: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ContinuousPart {
    Fractional { alpha: f64 },
    Relativistic { alpha: f64, mass: f64 },
    Convolution { kernel: RadialKernel },
    SurfaceSphere { radius: f64, mass: f64 },
    AffineSupported { basis: Vec<QVec>, offset: Vec<ExtendedRational>, profile: AffineProfile },
    /// Singular diffuse measure of Cantor type; only its descriptor is represented.
    CantorStub,
}

impl ContinuousPart {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ContinuousPart::Fractional { .. } => "fractional",
            ContinuousPart::Relativistic { .. } => "relativistic",
            ContinuousPart::Convolution { .. } => "convolution",
            ContinuousPart::SurfaceSphere { .. } => "surface_sphere",
            ContinuousPart::AffineSupported { .. } => "affine",
            ContinuousPart::CantorStub => "cantor_stub",
        }
    }

    fn validate(&self, d: usize, basis: &ConstantBasis) -> Result<(), MeasureError> {
        let bad = |m: String| Err(MeasureError::Continuous(m));
        let positive = |x: f64| x.is_finite() && x > 0.0;
        let alpha_ok = |a: f64| a.is_finite() && a > 0.0 && a < 2.0;
        match self {
            ContinuousPart::Fractional { alpha } if !alpha_ok(*alpha) => bad(format!("alpha = {alpha} outside (0, 2)")),
            ContinuousPart::Relativistic { alpha, mass } if !alpha_ok(*alpha) || !positive(*mass) => {
                bad(format!("relativistic needs alpha in (0, 2) and m > 0, got alpha = {alpha}, m = {mass}"))
            }
            ContinuousPart::Convolution { kernel: RadialKernel::Gaussian { sigma, mass } }
            | ContinuousPart::Convolution { kernel: RadialKernel::UniformBall { radius: sigma, mass } }
                if !positive(*sigma) || !positive(*mass) =>
            {
                bad("convolution kernel parameters must be positive".into())
            }
            ContinuousPart::SurfaceSphere { radius, mass } => {
                if d < 2 {
                    bad("surface_sphere needs dimension ≥ 2 (in d = 1 use two atoms)".into())
                } else if d > 3 {
                    bad("surface_sphere is implemented for d = 2 and d = 3".into())
                } else if !positive(*radius) || !positive(*mass) {
                    bad("surface_sphere radius and mass must be positive".into())
                } else {
                    Ok(())
                }
            }
            ContinuousPart::AffineSupported { basis: dirs, offset, profile } => {
                if dirs.is_empty() || dirs.iter().any(|v| v.len() != d) || offset.len() != d {
                    return bad(format!("affine piece needs 1..{d} direction vectors and an offset of length {d}"));
                }
                if linalg::rank(dirs) != dirs.len() || dirs.len() >= d {
                    return bad("affine directions must be linearly independent and span a proper subspace".into());
                }
                if offset.iter().any(|x| x.dim() != basis.dim()) {
                    return bad("affine offset uses a different constant basis".into());
                }
                match profile {
                    AffineProfile::Fractional { alpha } => {
                        if !alpha_ok(*alpha) {
                            return bad(format!("alpha = {alpha} outside (0, 2)"));
                        }
                        if offset.iter().any(|x| !x.is_zero()) {
                            return bad("a fractional profile is only integrable on a subspace through the origin".into());
                        }
                    }
                    AffineProfile::Gaussian { sigma, mass } => {
                        if !positive(*sigma) || !positive(*mass) {
                            return bad("gaussian profile parameters must be positive".into());
                        }
                    }
                }
                Ok(())
            }
            ContinuousPart::CantorStub if d != 1 => bad("cantor_stub is only available in d = 1".into()),
            _ => Ok(()),
        }
    }
}

/// A validated symmetric Lévy measure on ℝ^d.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyMeasure {
    pub dimension: usize,
    pub basis: ConstantBasis,
    pub symmetry_mode: SymmetryMode,
    pub atoms: Vec<Atom>,
    pub sequences: Vec<AtomSequence>,
    pub continuous: Vec<ContinuousPart>,
}

impl LevyMeasure {
    /// Validate the parts, complete or check symmetry, merge duplicate atoms and
    /// sort atoms into canonical order.
    pub fn new(
        dimension: usize,
        basis: ConstantBasis,
        symmetry_mode: SymmetryMode,
        atoms: Vec<Atom>,
        sequences: Vec<AtomSequence>,
        continuous: Vec<ContinuousPart>,
    ) -> Result<Self, MeasureError> {
        if dimension == 0 {
            return Err(MeasureError::Dimension("dimension must be at least 1".into()));
        }
        let dim = basis.dim();
        for a in &atoms {
            if a.point.len() != dimension {
                return Err(MeasureError::Dimension(format!(
                    "atom has {} coordinates, dimension is {dimension}",
                    a.point.len()
                )));
            }
            if a.point.iter().any(|x| x.dim() != dim) {
                return Err(MeasureError::Dimension("atom uses a different constant basis".into()));
            }
            if a.point.iter().all(ExtendedRational::is_zero) {
                return Err(MeasureError::ZeroAtom(show_point(&a.point, &basis)));
            }
            if !a.weight.is_positive() {
                return Err(MeasureError::Schema(format!(
                    "atom at {} has non-positive weight {}",
                    show_point(&a.point, &basis),
                    a.weight
                )));
            }
        }
        let atoms = symmetrize(atoms, symmetry_mode, &basis)?;
        for s in &sequences {
            if s.scale.dim() != dim || s.accumulation.iter().flatten().any(|x| x.dim() != dim) {
                return Err(MeasureError::Dimension("sequence uses a different constant basis".into()));
            }
            s.validate(dimension, &basis)?;
        }
        for c in &continuous {
            c.validate(dimension, &basis)?;
        }
        let continuous = symmetrize_affine(continuous, symmetry_mode, &basis)?;
        Ok(LevyMeasure { dimension, basis, symmetry_mode, atoms, sequences, continuous })
    }

    /// Measure made only of finite atoms, mirrors inserted automatically.
    pub fn atomic(dimension: usize, basis: ConstantBasis, atoms: Vec<Atom>) -> Result<Self, MeasureError> {
        Self::new(dimension, basis, SymmetryMode::Complete, atoms, Vec::new(), Vec::new())
    }

    pub fn is_finite_atomic(&self) -> bool {
        self.sequences.is_empty() && self.continuous.is_empty()
    }

    /// Upper bound on `∫ (|z|^2 ∧ 1) dμ` over the atomic and sequence parts.
    pub fn discrete_levy_bound(&self) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|a| {
                let r2: f64 = a.point.iter().map(|x| x.to_f64(&self.basis).powi(2)).sum();
                r2.min(1.0) * crate::exact::rational_to_f64(&a.weight)
            })
            .sum();
        let seqs: f64 = self.sequences.iter().filter_map(|s| s.levy_bound(&self.basis)).map(|b| 2.0 * b).sum();
        atoms + seqs
    }
}

pub fn show_point(p: &[ExtendedRational], basis: &ConstantBasis) -> String {
    format!("({})", p.iter().map(|x| x.display(basis).to_string()).collect::<Vec<_>>().join(", "))
}

fn negate(p: &[ExtendedRational]) -> Vec<ExtendedRational> {
    p.iter().map(|x| -x).collect()
}

fn symmetrize(atoms: Vec<Atom>, mode: SymmetryMode, basis: &ConstantBasis) -> Result<Vec<Atom>, MeasureError> {
    use std::collections::BTreeMap;
    // repeated atoms at one point are merged by adding their weights
    let mut merged: BTreeMap<Vec<ExtendedRational>, BigRational> = BTreeMap::new();
    for a in atoms {
        *merged.entry(a.point).or_insert_with(BigRational::zero) += a.weight;
    }
    let mut out = merged.clone();
    for (p, w) in &merged {
        let m = negate(p);
        match merged.get(&m) {
            Some(wm) if wm == w => {}
            Some(wm) => {
                return Err(MeasureError::Asymmetric(format!(
                    "atom {} has weight {w} but its mirror has weight {wm}",
                    show_point(p, basis)
                )))
            }
            None if mode == SymmetryMode::Strict => {
                return Err(MeasureError::Asymmetric(format!(
                    "mirror of atom {} is missing (strict symmetry)",
                    show_point(p, basis)
                )))
            }
            None => {
                out.insert(m, w.clone());
            }
        }
    }
    Ok(out.into_iter().map(|(point, weight)| Atom { point, weight }).collect())
}

fn symmetrize_affine(
    parts: Vec<ContinuousPart>,
    mode: SymmetryMode,
    basis: &ConstantBasis,
) -> Result<Vec<ContinuousPart>, MeasureError> {
    let mut out = parts.clone();
    for p in &parts {
        let ContinuousPart::AffineSupported { basis: dirs, offset, profile } = p else { continue };
        if offset.iter().all(ExtendedRational::is_zero) {
            continue;
        }
        let mirror = ContinuousPart::AffineSupported { basis: dirs.clone(), offset: negate(offset), profile: profile.clone() };
        if parts.contains(&mirror) || out.contains(&mirror) {
            continue;
        }
        if mode == SymmetryMode::Strict {
            return Err(MeasureError::Asymmetric(format!(
                "mirror of the affine piece at offset {} is missing (strict symmetry)",
                show_point(offset, basis)
            )));
        }
        out.push(mirror);
    }
    Ok(out)
}
