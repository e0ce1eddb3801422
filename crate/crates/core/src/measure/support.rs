use std::collections::BTreeSet;

use serde::Serialize;

use crate::exact::ExtendedRational;
use crate::linalg::QVec;

use super::{ContinuousPart, LevyMeasure, SequenceBehaviour};

/// `offset + span(basis)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePiece {
    pub basis: Vec<QVec>,
    pub offset: Vec<ExtendedRational>,
}

/// Certified facts about one template sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSummary {
    pub scale: ExtendedRational,
    pub direction: QVec,
    pub behaviour: SequenceBehaviour,
}

/// What the closure computation needs to know about `supp(μ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportDescriptor {
    pub dimension: usize,
    /// Atoms and truncated sequence points, deduplicated and sorted; never contains 0.
    pub finite_points: Vec<Vec<ExtendedRational>>,
    pub has_accumulation_point: bool,
    pub accumulation_points: Vec<Vec<ExtendedRational>>,
    /// Some continuous part charges every ball around some point (an interval in d = 1).
    pub contains_interval_or_ball: bool,
    /// A sphere of positive radius (d ≥ 2) lies in the support.
    pub contains_sphere: bool,
    pub affine_pieces: Vec<AffinePiece>,
    pub sequences: Vec<SequenceSummary>,
}

impl SupportDescriptor {
    pub fn is_empty(&self) -> bool {
        self.finite_points.is_empty()
            && !self.has_accumulation_point
            && !self.contains_interval_or_ball
            && !self.contains_sphere
            && self.affine_pieces.is_empty()
    }
}

pub fn support_of(mu: &LevyMeasure) -> SupportDescriptor {
    let mut points: BTreeSet<Vec<ExtendedRational>> = mu.atoms.iter().map(|a| a.point.clone()).collect();
    let mut accumulation: BTreeSet<Vec<ExtendedRational>> = BTreeSet::new();
    let mut sequences = Vec::new();
    for s in &mu.sequences {
        for n in 1..=s.truncation {
            let p = s.point(n);
            points.insert(p.iter().map(|x| -x).collect());
            points.insert(p);
        }
        let behaviour = s.behaviour();
        if let SequenceBehaviour::Accumulates { at } = &behaviour {
            accumulation.insert(at.iter().map(|x| -x).collect());
            accumulation.insert(at.clone());
        }
        sequences.push(SequenceSummary { scale: s.scale.clone(), direction: s.direction.clone(), behaviour });
    }
    let mut ball = false;
    let mut sphere = false;
    let mut affine = Vec::new();
    for c in &mu.continuous {
        match c {
            ContinuousPart::Fractional { .. }
            | ContinuousPart::Relativistic { .. }
            | ContinuousPart::Convolution { .. } => ball = true,
            ContinuousPart::SurfaceSphere { .. } => sphere = true,
            ContinuousPart::AffineSupported { basis, offset, .. } => {
                affine.push(AffinePiece { basis: basis.clone(), offset: offset.clone() })
            }
            ContinuousPart::CantorStub => {
                // a Cantor-type set is perfect: every point of it is an accumulation point
                accumulation.insert(vec![ExtendedRational::zero(mu.basis.dim()); mu.dimension]);
            }
        }
    }
    affine.sort_by(|a, b| (&a.offset, &a.basis).cmp(&(&b.offset, &b.basis)));
    SupportDescriptor {
        dimension: mu.dimension,
        finite_points: points.into_iter().collect(),
        has_accumulation_point: !accumulation.is_empty(),
        accumulation_points: accumulation.into_iter().collect(),
        contains_interval_or_ball: ball,
        contains_sphere: sphere,
        affine_pieces: affine,
        sequences,
    }
}

/// Declared Lebesgue components of the measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LebesgueSplit {
    pub absolutely_continuous: Vec<String>,
    pub singular_diffuse: Vec<String>,
    pub atomic: Vec<String>,
}

impl LebesgueSplit {
    pub fn presence(&self) -> (bool, bool, bool) {
        (!self.absolutely_continuous.is_empty(), !self.singular_diffuse.is_empty(), !self.atomic.is_empty())
    }
}

pub fn lebesgue_split(mu: &LevyMeasure) -> LebesgueSplit {
    let mut split = LebesgueSplit { absolutely_continuous: vec![], singular_diffuse: vec![], atomic: vec![] };
    for c in &mu.continuous {
        let desc = match c {
            ContinuousPart::Fractional { alpha } => format!("fractional(alpha={alpha})"),
            ContinuousPart::Relativistic { alpha, mass } => format!("relativistic(alpha={alpha}, m={mass})"),
            ContinuousPart::Convolution { kernel } => format!("convolution({kernel:?})"),
            ContinuousPart::SurfaceSphere { radius, mass } => format!("surface_sphere(radius={radius}, mass={mass})"),
            ContinuousPart::AffineSupported { basis, .. } => format!("affine(dim={})", basis.len()),
            ContinuousPart::CantorStub => "cantor_stub".to_string(),
        };
        match c {
            ContinuousPart::Fractional { .. } | ContinuousPart::Relativistic { .. } | ContinuousPart::Convolution { .. } => {
                split.absolutely_continuous.push(desc)
            }
            _ => split.singular_diffuse.push(desc),
        }
    }
    if !mu.atoms.is_empty() {
        split.atomic.push(format!("{} atoms", mu.atoms.len()));
    }
    for s in &mu.sequences {
        split.atomic.push(format!("sequence({:?})", s.points));
    }
    split
}
