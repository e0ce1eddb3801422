use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::exact::{rational_gcd, rational_ratio, ConstantBasis, ExtendedRational, Ratio};
use crate::linalg::{self, QMat, QVec};
use crate::measure::{SequenceBehaviour, SupportDescriptor};

use super::compute::direction_of;
use super::{dot_ext, norm_f64, to_ext, ClosedSubgroup, ClosureError};

/// `supp(μ) ⊆ H + cℤ` with `H = {x : ⟨normal, x⟩ = 0}` and `c ∉ H`.
///
/// A point `x` lies in `H + kc` exactly when `⟨normal, x⟩ = k·spacing`,
/// where `spacing = ⟨normal, c⟩ ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneCertificate {
    /// Primitive integer normal vector.
    pub normal: QVec,
    pub c: Vec<ExtendedRational>,
    pub spacing: ExtendedRational,
    /// Rational basis of `H`.
    pub h_basis: Vec<QVec>,
}

fn primitive(v: &QVec) -> QVec {
    let den = linalg::common_denominator([v]);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect()
}

impl HyperplaneCertificate {
    fn new(normal: QVec, c: Vec<ExtendedRational>, basis: &ConstantBasis) -> Self {
        let dim = basis.dim();
        let mut normal = primitive(&normal);
        let mut spacing = dot_ext(&normal, &c, dim);
        if spacing.signum(basis) < 0 {
            normal.iter_mut().for_each(|x| *x = -&*x);
            spacing = -spacing;
        }
        let h_basis = linalg::nullspace(&vec![normal.clone()], normal.len());
        HyperplaneCertificate { normal, c, spacing, h_basis }
    }

    /// Build a certificate for a non-dense, orthogonalized closure.
    ///
    /// Preferred form: `c` is a basis vector of `Λ̃` (shortest first) and `H`
    /// contains `V` and the remaining lattice directions. When the lattice
    /// directions are not rational, a rational normal with commensurable
    /// values on `Λ̃` is searched instead.
    pub fn from_closure(g: &ClosedSubgroup, basis: &ConstantBasis) -> Result<Self, ClosureError> {
        if g.is_dense() {
            return Err(ClosureError::Dense);
        }
        let d = g.dimension;
        let dim = basis.dim();
        let vq = g.v_rational().ok_or(ClosureError::IrrationalSubspace)?;
        let dirs: Vec<Option<QVec>> = g.lambda_basis.iter().map(|l| direction_of(l)).collect();

        if vq.len() + g.lambda_basis.len() == d {
            let mut order: Vec<usize> = (0..g.lambda_basis.len()).collect();
            order.sort_by(|&a, &b| {
                let (na, nb) = (norm_f64(&g.lambda_basis[a], basis), norm_f64(&g.lambda_basis[b], basis));
                na.total_cmp(&nb).then_with(|| g.lambda_basis[a].cmp(&g.lambda_basis[b]))
            });
            for i in order {
                let mut span: QMat = vq.clone();
                let ok = dirs.iter().enumerate().filter(|(j, _)| *j != i).all(|(_, dj)| match dj {
                    Some(r) => {
                        span.push(r.clone());
                        true
                    }
                    None => false,
                });
                if !ok {
                    continue;
                }
                let normal = linalg::nullspace(&span, d);
                if normal.len() == 1 {
                    return Ok(Self::new(normal[0].clone(), g.lambda_basis[i].clone(), basis));
                }
            }
        } else if dirs.iter().all(Option::is_some) {
            let mut span = vq.clone();
            span.extend(dirs.iter().flatten().cloned());
            if let Some(n) = linalg::nullspace(&span, d).into_iter().next() {
                let n = primitive(&n);
                let c = to_ext(&n, dim);
                return Ok(Self::new(n, c, basis));
            }
        }
        Self::commensurable_search(g, &vq, basis)
    }

    fn commensurable_search(g: &ClosedSubgroup, vq: &[QVec], basis: &ConstantBasis) -> Result<Self, ClosureError> {
        let d = g.dimension;
        let dim = basis.dim();
        let u: QMat = if vq.is_empty() { (0..d).map(|i| linalg::unit(i, d)).collect() } else { linalg::nullspace(&vq.to_vec(), d) };
        let e = u.len();
        // vals[i][j] = coordinates of ⟨u_j, λ_i⟩
        let vals: Vec<Vec<QVec>> = g
            .lambda_basis
            .iter()
            .map(|l| u.iter().map(|uj| dot_ext(uj, l, dim).coords().to_vec()).collect())
            .collect();
        let mut candidates: Vec<QVec> = (0..dim).map(|k| linalg::unit(k, dim)).collect();
        candidates.extend(vals.iter().flatten().filter(|v| v.iter().any(|x| !x.is_zero())).cloned());
        for s in candidates {
            let sperp = linalg::nullspace(&vec![s.clone()], dim);
            let rows: QMat = vals
                .iter()
                .flat_map(|vi| sperp.iter().map(move |w| vi.iter().map(|col| linalg::dot(w, col)).collect::<QVec>()))
                .collect();
            let Some(coef) = linalg::nullspace(&rows, e).into_iter().next() else { continue };
            let n: QVec = (0..d).map(|k| u.iter().zip(&coef).map(|(uj, cj)| &uj[k] * cj).sum()).collect();
            let n = primitive(&n);
            let values: Vec<ExtendedRational> = g.lambda_basis.iter().map(|l| dot_ext(&n, l, dim)).filter(|v| !v.is_zero()).collect();
            let n2: BigRational = linalg::dot(&n, &n);
            let Some(v0) = values.first() else {
                let c = to_ext(&n, dim);
                return Ok(Self::new(n, c, basis));
            };
            let mut gr = BigRational::from_integer(1.into());
            for v in &values[1..] {
                match rational_ratio(v0, v) {
                    Ok(Ratio::Rational(r)) => gr = rational_gcd(&gr, &r.abs()).expect("positive"),
                    _ => return Err(ClosureError::NoCertificate("inconsistent commensurability".into())),
                }
            }
            let spacing = v0.abs(basis).scale(&gr);
            let c: Vec<ExtendedRational> = n.iter().map(|nk| spacing.scale(&(nk / &n2))).collect();
            return Ok(Self::new(n, c, basis));
        }
        Err(ClosureError::NoCertificate(
            "the lattice directions admit no rational separating hyperplane".into(),
        ))
    }

    /// `k` with `x ∈ H + kc`, when it exists.
    pub fn coset_index(&self, x: &[ExtendedRational]) -> Option<BigInt> {
        let dim = self.spacing.dim();
        let val = dot_ext(&self.normal, x, dim);
        match rational_ratio(&self.spacing, &val) {
            Ok(Ratio::Rational(r)) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    /// `λ_x` in `x = x_H + λ_x c`, in floating point.
    pub fn lambda_f64(&self, x: &[f64], basis: &ConstantBasis) -> f64 {
        let num: f64 = self.normal.iter().zip(x).map(|(n, xi)| crate::exact::rational_to_f64(n) * xi).sum();
        num / self.spacing.to_f64(basis)
    }

    /// Exact check against every finite support point, affine piece and sequence.
    pub fn check(&self, support: &SupportDescriptor, basis: &ConstantBasis) -> Result<(), ClosureError> {
        let bad = |m: String| Err(ClosureError::InvalidCertificate(m));
        if self.spacing.is_zero() {
            return bad("c lies in H".into());
        }
        if support.contains_interval_or_ball || support.contains_sphere {
            return bad("the support contains a ball or a sphere".into());
        }
        if support.dimension == 1 && support.has_accumulation_point {
            return bad("the support has an accumulation point".into());
        }
        let show = |p: &[ExtendedRational]| crate::measure::show_point(p, basis);
        for x in &support.finite_points {
            if self.coset_index(x).is_none() {
                return bad(format!("support point {} is not in H + cZ", show(x)));
            }
        }
        for piece in &support.affine_pieces {
            if piece.basis.iter().any(|v| !linalg::dot(&self.normal, v).is_zero()) {
                return bad("an affine piece is not parallel to H".into());
            }
            if self.coset_index(&piece.offset).is_none() {
                return bad(format!("affine offset {} is not in H + cZ", show(&piece.offset)));
            }
        }
        for s in &support.sequences {
            match &s.behaviour {
                SequenceBehaviour::Discrete { generator } => {
                    let p: Vec<ExtendedRational> = s.direction.iter().map(|c| s.scale.scale(&(c * generator))).collect();
                    if self.coset_index(&p).is_none() {
                        return bad("a sequence generator is not in H + cZ".into());
                    }
                }
                _ => {
                    if !linalg::dot(&self.normal, &s.direction).is_zero() {
                        return bad("a dense sequence direction is not parallel to H".into());
                    }
                }
            }
        }
        Ok(())
    }
}
