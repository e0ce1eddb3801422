use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::exact::{rational_to_f64, ExtendedRational};
use crate::linalg;
use crate::measure::{show_point, Atom, ContinuousPart, LevyMeasure, SequenceBehaviour};

use super::{lattice_coords, norm_f64, projection, ClosedSubgroup, ClosureError};

/// The restriction `μ_a = μ|_{V + a}` for one lattice point `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetPart {
    /// `a` in coordinates of the lattice basis.
    pub index: Vec<BigInt>,
    pub offset: Vec<ExtendedRational>,
    /// Finite atoms and truncated sequence atoms in this coset.
    pub atoms: Vec<Atom>,
    /// Continuous parts carried by this coset.
    pub continuous: Vec<String>,
    pub mass: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub closure: ClosedSubgroup,
    pub parts: BTreeMap<Vec<BigInt>, CosetPart>,
    /// `min |a|` over occupied cosets `a ≠ 0` (orthogonal lattice, so this is `dist(0, V + a)`).
    pub separation: f64,
    /// Upper bound on `Σ_{a≠0} μ_a(ℝ^d)`, including tails of truncated sequences.
    pub off_zero_mass: f64,
}

impl Decomposition {
    /// `μ_a(·) = μ_{−a}(−·)` on every listed part.
    pub fn is_symmetric(&self) -> bool {
        self.parts.iter().all(|(k, part)| {
            let neg: Vec<BigInt> = k.iter().map(|x| -x).collect();
            let Some(mirror) = self.parts.get(&neg) else { return false };
            let mut flipped: Vec<(Vec<ExtendedRational>, BigRational)> =
                mirror.atoms.iter().map(|a| (a.point.iter().map(|x| -x).collect(), a.weight.clone())).collect();
            flipped.sort();
            let mut own: Vec<(Vec<ExtendedRational>, BigRational)> =
                part.atoms.iter().map(|a| (a.point.clone(), a.weight.clone())).collect();
            own.sort();
            own == flipped
        })
    }

    /// All atoms across parts, sorted.
    pub fn reassembled_atoms(&self) -> Vec<Atom> {
        let mut all: Vec<Atom> = self.parts.values().flat_map(|p| p.atoms.iter().cloned()).collect();
        all.sort_by(|a, b| a.point.cmp(&b.point));
        all
    }
}

/// Split the atoms of `mu` along the cosets `V + a`, `a ∈ Λ̃`.
pub fn decompose_measure(mu: &LevyMeasure, closure: &ClosedSubgroup) -> Result<Decomposition, ClosureError> {
    if closure.is_dense() {
        return Err(ClosureError::Dense);
    }
    let closure = if closure.orthogonal { closure.clone() } else { super::orthogonalize(closure.clone())? };
    let basis = &mu.basis;
    let dim = basis.dim();
    let d = mu.dimension;
    let vq = closure.v_rational().ok_or(ClosureError::IrrationalSubspace)?;
    let p = projection(&vq, d);
    let perp = |x: &[ExtendedRational]| -> Vec<ExtendedRational> {
        if vq.is_empty() {
            return x.to_vec();
        }
        let px = linalg::apply(&p, x, dim);
        x.iter().zip(&px).map(|(a, b)| a - b).collect()
    };
    let locate = |x: &[ExtendedRational]| -> Result<(Vec<BigInt>, Vec<ExtendedRational>), ClosureError> {
        let a = perp(x);
        let k = lattice_coords(&closure.lambda_basis, &a).ok_or_else(|| ClosureError::NotInCoset(show_point(x, basis)))?;
        Ok((k, a))
    };

    let mut parts: BTreeMap<Vec<BigInt>, CosetPart> = BTreeMap::new();
    let mut add = |x: &[ExtendedRational], w: BigRational| -> Result<(), ClosureError> {
        let (k, a) = locate(x)?;
        let part = parts.entry(k.clone()).or_insert_with(|| CosetPart {
            index: k,
            offset: a,
            atoms: Vec::new(),
            continuous: Vec::new(),
            mass: BigRational::zero(),
        });
        part.mass += &w;
        part.atoms.push(Atom { point: x.to_vec(), weight: w });
        Ok(())
    };
    for atom in &mu.atoms {
        add(&atom.point, atom.weight.clone())?;
    }
    let mut tail = 0.0;
    for s in &mu.sequences {
        for n in 1..=s.truncation {
            let pt = s.point(n);
            let w = s.weight(n);
            add(&pt.iter().map(|x| -x).collect::<Vec<_>>(), w.clone())?;
            add(&pt, w)?;
        }
        let in_v = matches!(s.behaviour(), SequenceBehaviour::Accumulates { .. })
            || s.behaviour().is_dense_along_line();
        if !in_v {
            let partial: f64 = (1..=s.truncation).map(|n| rational_to_f64(&s.weight(n))).sum();
            tail += 2.0 * (s.weights.total_mass_bound().unwrap_or(f64::INFINITY) - partial).max(0.0);
        }
    }
    for c in &mu.continuous {
        match c {
            ContinuousPart::AffineSupported { offset, basis: dirs, .. } => {
                let (k, a) = locate(offset)?;
                if dirs.iter().any(|v| !in_span(&vq, v)) {
                    return Err(ClosureError::ContinuousOutsideCoset(c.kind_name().into()));
                }
                let part = parts.entry(k.clone()).or_insert_with(|| CosetPart {
                    index: k,
                    offset: a,
                    atoms: Vec::new(),
                    continuous: Vec::new(),
                    mass: BigRational::zero(),
                });
                part.continuous.push(c.kind_name().to_string());
            }
            other => return Err(ClosureError::ContinuousOutsideCoset(other.kind_name().into())),
        }
    }
    for part in parts.values_mut() {
        part.atoms.sort_by(|a, b| a.point.cmp(&b.point));
    }
    let zero = vec![BigInt::zero(); closure.lambda_basis.len()];
    let separation = parts
        .iter()
        .filter(|(k, _)| **k != zero)
        .map(|(_, part)| norm_f64(&part.offset, basis))
        .fold(f64::INFINITY, f64::min);
    if separation == 0.0 {
        return Err(ClosureError::ZeroSeparation);
    }
    let off_zero_mass = parts.iter().filter(|(k, _)| **k != zero).map(|(_, part)| rational_to_f64(&part.mass)).sum::<f64>() + tail;
    Ok(Decomposition { closure, parts, separation, off_zero_mass })
}

fn in_span(vq: &[linalg::QVec], v: &linalg::QVec) -> bool {
    let mut m = vq.to_vec();
    let r = linalg::rank(&m);
    m.push(v.clone());
    linalg::rank(&m) == r
}
