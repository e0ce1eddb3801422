use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::{rational_gcd, rational_ratio, rational_to_f64, ConstantBasis, ExtendedRational, Ratio};
use crate::linalg::{self, QMat, QVec};
use crate::measure::{SequenceBehaviour, SupportDescriptor};
use crate::numerics::{density_probe, ProbeConfig, ProbeVerdict};

use super::{
    projection, rational_direction, rational_vec, to_ext, ClosedSubgroup, ClosureError, ClosureRoute, DensityEvidence,
    Provenance,
};

#[derive(Debug, Clone, Default)]
pub struct ClosureConfig {
    /// Used only when no exact route applies.
    pub probe: ProbeConfig,
}

fn subgroup(d: usize, route: ClosureRoute) -> ClosedSubgroup {
    ClosedSubgroup {
        dimension: d,
        v_basis: Vec::new(),
        lambda_basis: Vec::new(),
        orthogonal: true,
        provenance: Provenance::Exact,
        route,
        evidence: None,
        probe: None,
        inconclusive: false,
    }
}

fn dense(d: usize, dim: usize, route: ClosureRoute, evidence: DensityEvidence) -> ClosedSubgroup {
    let mut g = subgroup(d, route);
    g.v_basis = (0..d).map(|i| to_ext(&linalg::unit(i, d), dim)).collect();
    g.evidence = Some(evidence);
    g
}

enum Scalar {
    Zero,
    Dense { a: ExtendedRational, b: ExtendedRational },
    Discrete(ExtendedRational),
}

/// Closure of the subgroup of ℝ generated by finitely many numbers.
fn scalar_closure(values: &[ExtendedRational], basis: &ConstantBasis) -> Scalar {
    let mut pos: Vec<ExtendedRational> = values.iter().filter(|x| !x.is_zero()).map(|x| x.abs(basis)).collect();
    if pos.is_empty() {
        return Scalar::Zero;
    }
    pos.sort_by_key(|x| x.approx(basis));
    pos.dedup();
    let a1 = pos[0].clone();
    let mut g = BigRational::one();
    for b in &pos[1..] {
        match rational_ratio(&a1, b).expect("a1 is nonzero") {
            Ratio::Irrational => return Scalar::Dense { a: a1, b: b.clone() },
            Ratio::Rational(r) => g = rational_gcd(&g, &r).expect("positive arguments"),
        }
    }
    Scalar::Discrete(a1.scale(&g))
}

fn sequence_detail(b: &SequenceBehaviour) -> String {
    match b {
        SequenceBehaviour::UnboundedDenominators { resultant } => format!(
            "after cancelling common factors gcd(p(n), r(n)) divides the resultant {resultant} while |r(n)| grows without bound"
        ),
        SequenceBehaviour::GeometricDenominators { base } => {
            format!("a_n / a_1 has reduced denominator {base}^(n-1)")
        }
        SequenceBehaviour::Accumulates { .. } => "the points accumulate".into(),
        SequenceBehaviour::Discrete { generator } => format!("all points are multiples of {generator}"),
    }
}

/// One-dimensional closure: `{0}`, `gℤ` or ℝ.
pub fn closure_1d(support: &SupportDescriptor, basis: &ConstantBasis) -> ClosedSubgroup {
    let dim = basis.dim();
    if support.is_empty() {
        return subgroup(1, ClosureRoute::Trivial);
    }
    if support.contains_interval_or_ball {
        return dense(1, dim, ClosureRoute::ContainsBall, DensityEvidence::ContinuousPart("interval".into()));
    }
    if let Some(at) = support.accumulation_points.first() {
        return dense(1, dim, ClosureRoute::Accumulation, DensityEvidence::Accumulation { at: at.clone() });
    }
    for (index, s) in support.sequences.iter().enumerate() {
        if s.behaviour.is_dense_along_line() {
            return dense(
                1,
                dim,
                ClosureRoute::UnboundedSequence,
                DensityEvidence::UnboundedSequence { index, detail: sequence_detail(&s.behaviour) },
            );
        }
    }
    let values: Vec<ExtendedRational> = support.finite_points.iter().map(|p| p[0].clone()).chain(discrete_generators(support).map(|g| g[0].clone())).collect();
    match scalar_closure(&values, basis) {
        Scalar::Zero => subgroup(1, ClosureRoute::Trivial),
        Scalar::Dense { a, b } => dense(1, dim, ClosureRoute::OneDimensional, DensityEvidence::IrrationalPair { a, b }),
        Scalar::Discrete(g) => {
            let mut s = subgroup(1, ClosureRoute::OneDimensional);
            s.lambda_basis = vec![vec![g]];
            s
        }
    }
}

fn discrete_generators(support: &SupportDescriptor) -> impl Iterator<Item = Vec<ExtendedRational>> + '_ {
    support.sequences.iter().filter_map(|s| match &s.behaviour {
        SequenceBehaviour::Discrete { generator } => {
            Some(s.direction.iter().map(|c| s.scale.scale(&(c * generator))).collect())
        }
        _ => None,
    })
}

/// Basis of the lattice generated by rational vectors.
pub fn lattice_hnf(generators: &[Vec<ExtendedRational>]) -> Result<Vec<Vec<ExtendedRational>>, ClosureError> {
    let Some(first) = generators.first() else { return Ok(Vec::new()) };
    let d = first.len();
    let dim = first.first().map_or(1, ExtendedRational::dim);
    let q: Vec<QVec> = generators
        .iter()
        .map(|g| rational_vec(g).ok_or_else(|| ClosureError::NotRational(format!("{} coordinates over the constant basis", g.len()))))
        .collect::<Result<_, _>>()?;
    Ok(linalg::rational_hnf(&q, d).into_iter().map(|v| to_ext(&v, dim)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KroneckerResult {
    Dense,
    /// Integers `y` with `y_0 + y_1 c_1 + … + y_d c_d = 0`.
    NotDense { dependency: Vec<BigInt> },
}

/// Is `ℤ^d + ℤc` dense in ℝ^d? True iff `1, c_1, …, c_d` are ℚ-independent.
pub fn kronecker_check(c: &[ExtendedRational]) -> KroneckerResult {
    let dim = c.first().map_or(1, ExtendedRational::dim);
    let mut rows: QMat = vec![linalg::unit(0, dim)];
    rows.extend(c.iter().map(|x| x.coords().to_vec()));
    if linalg::rank(&rows) == rows.len() {
        return KroneckerResult::Dense;
    }
    let null = linalg::nullspace(&linalg::transpose(&rows), rows.len());
    let y = &null[0];
    let den = linalg::common_denominator([y]);
    let ints: Vec<BigInt> = y.iter().map(|v| (v * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let mut ints: Vec<BigInt> = ints.into_iter().map(|v| v / &g).collect();
    if ints.iter().find(|v| !v.is_zero()).is_some_and(Signed::is_negative) {
        ints.iter_mut().for_each(|v| *v = -&*v);
    }
    KroneckerResult::NotDense { dependency: ints }
}

/// Replace each lattice vector `a` by `a − proj_V(a)`.
pub fn orthogonalize(mut g: ClosedSubgroup) -> Result<ClosedSubgroup, ClosureError> {
    let vq = g.v_rational().ok_or(ClosureError::IrrationalSubspace)?;
    if !vq.is_empty() {
        let p = projection(&vq, g.dimension);
        g.lambda_basis = g
            .lambda_basis
            .iter()
            .map(|a| {
                let dim = a.first().map_or(1, ExtendedRational::dim);
                let pa = linalg::apply(&p, a, dim);
                a.iter().zip(&pa).map(|(x, y)| x - y).collect()
            })
            .collect();
    }
    g.orthogonal = true;
    Ok(g)
}

/// Quotient closure: `v` rational, `lambda` over the constant basis.
struct Quotient {
    v: Vec<QVec>,
    lambda: Vec<Vec<ExtendedRational>>,
    route: ClosureRoute,
}

fn matrix_columns(cols: &[QVec]) -> QMat {
    linalg::transpose(&cols.to_vec())
}

/// Closure of `ℤB + Σ ℤc_i` for a rational basis `B` of ℝ^d: writing
/// `β_i = B^{-1} c_i`, it is `{x : ⟨k, B^{-1}x⟩ ∈ ℤ for all k ∈ K}` with
/// `K = {k ∈ ℤ^d : ⟨k, β_i⟩ ∈ ℤ for every i}`.
fn annihilator_closure(b: &[QVec], others: &[Vec<ExtendedRational>], dim: usize) -> (Vec<QVec>, Vec<QVec>) {
    let d = b.len();
    let m = matrix_columns(b);
    let minv = linalg::inverse(&m).expect("full-rank lattice basis");
    let betas: Vec<Vec<ExtendedRational>> = others.iter().map(|c| linalg::apply(&minv, c, dim)).collect();
    // irrational parts of ⟨k, β⟩ must vanish
    let rows: QMat = betas
        .iter()
        .flat_map(|beta| (1..dim).map(move |j| beta.iter().map(|x| x.coords()[j].clone()).collect::<QVec>()))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let u = linalg::integer_kernel(&rows, d);
    let identity: Vec<QVec> = (0..d).map(|i| linalg::unit(i, d)).collect();
    let real = |coords: &[QVec]| -> Vec<QVec> { coords.iter().map(|c| linalg::mat_vec(&m, c)).collect() };
    if u.is_empty() {
        return (real(&identity), Vec::new());
    }
    // rational parts: ⟨z, γ_i⟩ ∈ ℤ with γ_i = U β_i^{(0)}
    let gammas: Vec<QVec> = betas
        .iter()
        .map(|beta| {
            u.iter()
                .map(|ul| ul.iter().zip(beta).map(|(k, x)| BigRational::from_integer(k.clone()) * &x.coords()[0]).sum())
                .collect()
        })
        .collect();
    let den = linalg::common_denominator(gammas.iter());
    let (nu, p) = (u.len(), gammas.len());
    let a: QMat = gammas
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut row: QVec = g.iter().map(|x| x * BigRational::from_integer(den.clone())).collect();
            row.extend((0..p).map(|j| if j == i { BigRational::from_integer(den.clone()) } else { BigRational::zero() }));
            row
        })
        .collect();
    let z_gens: Vec<Vec<BigInt>> = linalg::integer_kernel(&a, nu + p).into_iter().map(|k| k[..nu].to_vec()).collect();
    let z_basis = linalg::hnf(&z_gens, nu).basis;
    let k: QMat = z_basis
        .iter()
        .map(|z| {
            (0..d)
                .map(|i| BigRational::from_integer(z.iter().zip(&u).map(|(zl, ul)| zl * &ul[i]).sum::<BigInt>()))
                .collect()
        })
        .collect();
    if k.is_empty() {
        return (real(&identity), Vec::new());
    }
    let v = linalg::nullspace(&k, d);
    let kkt_inv = linalg::inverse(&linalg::mat_mul(&k, &linalg::transpose(&k))).expect("independent rows");
    let kt = linalg::transpose(&k);
    let lambda: Vec<QVec> = (0..k.len())
        .map(|i| (0..d).map(|r| (0..k.len()).map(|j| &kt[r][j] * &kkt_inv[j][i]).sum()).collect())
        .collect();
    (real(&v), real(&lambda))
}

fn quotient_closure(points: &[Vec<ExtendedRational>], d: usize, basis: &ConstantBasis) -> Option<Quotient> {
    let dim = basis.dim();
    let points: Vec<&Vec<ExtendedRational>> = points.iter().filter(|p| p.iter().any(|x| !x.is_zero())).collect();
    if points.is_empty() {
        return Some(Quotient { v: vec![], lambda: vec![], route: ClosureRoute::Trivial });
    }
    let (rational, irrational): (Vec<&Vec<ExtendedRational>>, Vec<&Vec<ExtendedRational>>) =
        points.iter().copied().partition(|p| rational_vec(p).is_some());
    let rq: Vec<QVec> = rational.iter().map(|p| rational_vec(p).unwrap()).collect();
    let hnf = linalg::rational_hnf(&rq, d);
    if irrational.is_empty() {
        return Some(Quotient { v: vec![], lambda: hnf.iter().map(|v| to_ext(v, dim)).collect(), route: ClosureRoute::Lattice });
    }
    // product of one-dimensional supports along the axes
    let axis_of = |p: &Vec<ExtendedRational>| {
        let nz: Vec<usize> = (0..d).filter(|&i| !p[i].is_zero()).collect();
        (nz.len() == 1).then(|| nz[0])
    };
    if points.iter().all(|p| axis_of(p).is_some()) {
        let mut q = Quotient { v: vec![], lambda: vec![], route: ClosureRoute::ProductAxes };
        for axis in 0..d {
            let vals: Vec<ExtendedRational> = points.iter().filter(|p| axis_of(p) == Some(axis)).map(|p| p[axis].clone()).collect();
            match scalar_closure(&vals, basis) {
                Scalar::Zero => {}
                Scalar::Dense { .. } => q.v.push(linalg::unit(axis, d)),
                Scalar::Discrete(g) => {
                    let mut e = vec![ExtendedRational::zero(dim); d];
                    e[axis] = g;
                    q.lambda.push(e);
                }
            }
        }
        return Some(q);
    }
    if hnf.len() == d {
        let others: Vec<Vec<ExtendedRational>> = irrational.iter().map(|p| (*p).clone()).collect();
        let (v, lambda) = annihilator_closure(&hnf, &others, dim);
        return Some(Quotient { v, lambda: lambda.iter().map(|l| to_ext(l, dim)).collect(), route: ClosureRoute::Kronecker });
    }
    // every coordinate a rational multiple of one scalar s: closure = s · lattice
    let s = points[0].iter().find(|x| !x.is_zero()).unwrap().clone();
    let scaled: Option<Vec<QVec>> = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|x| match rational_ratio(&s, x) {
                    Ok(Ratio::Rational(r)) => Some(r),
                    _ => None,
                })
                .collect()
        })
        .collect();
    if let Some(scaled) = scaled {
        let lambda = linalg::rational_hnf(&scaled, d)
            .into_iter()
            .map(|v| v.iter().map(|c| s.scale(c)).collect())
            .collect();
        return Some(Quotient { v: vec![], lambda, route: ClosureRoute::ScaledLattice });
    }
    None
}

/// Representatives of `±x` with a positive leading coordinate.
fn half_points(points: &[Vec<ExtendedRational>], basis: &ConstantBasis) -> Vec<Vec<ExtendedRational>> {
    let set: BTreeSet<Vec<ExtendedRational>> = points
        .iter()
        .filter(|p| p.iter().any(|x| !x.is_zero()))
        .map(|p| {
            let lead = p.iter().find(|x| !x.is_zero()).unwrap();
            if lead.signum(basis) < 0 {
                p.iter().map(|x| -x).collect()
            } else {
                p.clone()
            }
        })
        .collect();
    set.into_iter().collect()
}

/// Closure `V ⊕ Λ` of the group generated by the support, returned with
/// `Λ ⊥ V` and canonical bases.
pub fn closure_multid(support: &SupportDescriptor, basis: &ConstantBasis, config: &ClosureConfig) -> ClosedSubgroup {
    let d = support.dimension;
    let dim = basis.dim();
    if d == 1 {
        return closure_1d(support, basis);
    }
    if support.contains_interval_or_ball {
        return dense(d, dim, ClosureRoute::ContainsBall, DensityEvidence::ContinuousPart("ball".into()));
    }
    if support.contains_sphere {
        return dense(d, dim, ClosureRoute::ContainsBall, DensityEvidence::ContinuousPart("sphere".into()));
    }

    // subspace certified to lie in the closure
    let mut w: Vec<QVec> = Vec::new();
    let mut w_route = None;
    let mut w_evidence = None;
    for piece in &support.affine_pieces {
        w.extend(piece.basis.iter().cloned());
        w_route.get_or_insert(ClosureRoute::AffinePieces);
    }
    for (index, s) in support.sequences.iter().enumerate() {
        match &s.behaviour {
            SequenceBehaviour::Accumulates { at } => {
                w.push(s.direction.clone());
                w_route.get_or_insert(ClosureRoute::Accumulation);
                w_evidence.get_or_insert(DensityEvidence::Accumulation { at: at.clone() });
            }
            b if b.is_dense_along_line() => {
                w.push(s.direction.clone());
                w_route.get_or_insert(ClosureRoute::UnboundedSequence);
                w_evidence.get_or_insert(DensityEvidence::UnboundedSequence { index, detail: sequence_detail(b) });
            }
            _ => {}
        }
    }
    let w: Vec<QVec> = {
        let (r, piv) = linalg::rref(&w);
        r[..piv.len()].to_vec()
    };
    if w.len() == d {
        return dense(d, dim, w_route.unwrap(), w_evidence.unwrap_or(DensityEvidence::NoAnnihilator));
    }

    let mut gens: Vec<Vec<ExtendedRational>> = support.finite_points.clone();
    gens.extend(support.affine_pieces.iter().map(|p| p.offset.clone()));
    gens.extend(discrete_generators(support));
    let gens = half_points(&gens, basis);

    // coordinates on the orthogonal complement of W
    let qm: QMat = if w.is_empty() { (0..d).map(|i| linalg::unit(i, d)).collect() } else { linalg::nullspace(&w, d) };
    let dq = qm.len();
    let qt = linalg::transpose(&qm);
    let qplus = linalg::mat_mul(&qt, &linalg::inverse(&linalg::mat_mul(&qm, &qt)).expect("independent rows"));
    let projected: Vec<Vec<ExtendedRational>> = gens.iter().map(|g| linalg::apply(&qm, g, dim)).collect();

    let (quot, provenance, probe, inconclusive) = match quotient_closure(&projected, dq, basis) {
        Some(q) => (q, Provenance::Exact, None, false),
        None => {
            let report = density_probe(&projected, dq, basis, &config.probe);
            let mut q = Quotient { v: vec![], lambda: vec![], route: ClosureRoute::Probe };
            let mut inconclusive = false;
            match &report.verdict {
                ProbeVerdict::DenseLikely => q.v = (0..dq).map(|i| linalg::unit(i, dq)).collect(),
                ProbeVerdict::LatticeDetected { basis: fitted } => {
                    q.lambda = fitted
                        .iter()
                        .map(|v| {
                            v.iter()
                                .map(|x| ExtendedRational::from_rational(fitted_rational(*x), dim))
                                .collect()
                        })
                        .collect()
                }
                ProbeVerdict::Inconclusive => inconclusive = true,
            }
            (q, Provenance::NumericalProbe, Some(report), inconclusive)
        }
    };

    let mut v = w.clone();
    v.extend(quot.v.iter().map(|x| linalg::mat_vec(&qplus, x)));
    let lambda: Vec<Vec<ExtendedRational>> = quot.lambda.iter().map(|l| linalg::apply(&qplus, l, dim)).collect();
    let route = match (w_route, quot.route) {
        (_, ClosureRoute::Probe) => ClosureRoute::Probe,
        (Some(r), _) => r,
        (None, r) => r,
    };
    let is_dense = v.len() == d;
    let mut g = subgroup(d, route);
    g.v_basis = v.iter().map(|x| to_ext(x, dim)).collect();
    g.lambda_basis = if is_dense { Vec::new() } else { lambda };
    g.provenance = provenance;
    g.probe = probe;
    g.inconclusive = inconclusive;
    if is_dense {
        g.evidence = Some(match provenance {
            Provenance::NumericalProbe => DensityEvidence::Probe,
            Provenance::Exact => w_evidence.unwrap_or(DensityEvidence::NoAnnihilator),
        });
    }
    let g = orthogonalize(g).expect("V is rational on every route");
    if provenance == Provenance::NumericalProbe {
        // a Hermite form of a fitted, possibly irrational lattice only inflates denominators
        let fitted = g.lambda_basis.clone();
        return ClosedSubgroup { lambda_basis: fitted, ..g.canonical() };
    }
    g.canonical()
}

/// Rational direction helper re-exported for certificates.
/// Short continued-fraction approximation of a probe-fitted coordinate; the
/// probe resolves far less than 1e-6, so more digits would be noise.
fn fitted_rational(x: f64) -> BigRational {
    let tol = 1e-6 * x.abs().max(1.0);
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        let ai = BigInt::from(a as i64);
        (h0, h1) = (h1.clone(), &ai * &h1 + h0);
        (k0, k1) = (k1.clone(), &ai * &k1 + k0);
        let approx = BigRational::new(h1.clone(), k1.clone());
        if (rational_to_f64(&approx) - x).abs() <= tol || r - a < 1e-12 {
            return approx;
        }
        r = 1.0 / (r - a);
    }
    BigRational::from_float(x).unwrap_or_default()
}

pub(crate) fn direction_of(v: &[ExtendedRational]) -> Option<QVec> {
    rational_direction(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_expr;
    use crate::measure::{parse_measure, support_of};

    fn ext(s: &[&str], b: &ConstantBasis) -> Vec<ExtendedRational> {
        s.iter().map(|x| parse_expr(x, b).unwrap()).collect()
    }

    #[test]
    fn kronecker_examples() {
        let b = ConstantBasis::with_known(&["sqrt2", "sqrt3"]).unwrap();
        assert_eq!(kronecker_check(&ext(&["sqrt2", "sqrt3"], &b)), KroneckerResult::Dense);
        assert!(matches!(kronecker_check(&ext(&["1/2", "1/3"], &b)), KroneckerResult::NotDense { .. }));
        assert_eq!(
            kronecker_check(&ext(&["sqrt2", "sqrt2"], &b)),
            KroneckerResult::NotDense { dependency: vec![0.into(), 1.into(), (-1).into()] }
        );
    }

    #[test]
    fn diagonal_kronecker_closure() {
        let text = r#"
dimension = 2
[[constants]]
name = "sqrt2"
[[atoms]]
point = ["1", "0"]
weight = "1"
[[atoms]]
point = ["0", "1"]
weight = "1"
[[atoms]]
point = ["sqrt2", "sqrt2"]
weight = "1"
"#;
        let m = parse_measure(text).unwrap();
        let g = closure_multid(&support_of(&m), &m.basis, &ClosureConfig::default());
        assert_eq!(g.route, ClosureRoute::Kronecker);
        assert_eq!(g.v_basis.len(), 1);
        assert_eq!(g.lambda_basis.len(), 1);
        let b = &m.basis;
        // V = span(1,1), Λ̃ = ℤ(1/2, −1/2)
        assert_eq!(g.v_basis[0], ext(&["1", "1"], b));
        assert_eq!(g.lambda_basis[0], ext(&["1/2", "-1/2"], b));
        assert!(g.contains(&ext(&["sqrt2", "sqrt2"], b)).unwrap());
        assert!(g.contains(&ext(&["1", "0"], b)).unwrap());
        assert!(!g.contains(&ext(&["1/4", "0"], b)).unwrap());
    }

    #[test]
    fn fitted_rationals_are_short() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(fitted_rational(0.25), r(1, 4));
        assert_eq!(fitted_rational(-1.5), r(-3, 2));
        assert_eq!(fitted_rational(std::f64::consts::PI), r(355, 113));
        assert_eq!(fitted_rational(3.0), r(3, 1));
    }

    #[test]
    fn orthogonal_projection_example() {
        let b = ConstantBasis::rational();
        let mut g = subgroup(2, ClosureRoute::Lattice);
        g.v_basis = vec![ext(&["1", "0"], &b)];
        g.lambda_basis = vec![ext(&["1", "1"], &b)];
        g.orthogonal = false;
        let g = orthogonalize(g).unwrap();
        assert_eq!(g.lambda_basis, vec![ext(&["0", "1"], &b)]);
    }
}
