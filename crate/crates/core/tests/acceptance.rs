//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//!     cargo test --test acceptance

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::Parser;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use liouville::cli::{self, Cli};
use liouville::closure::{decompose_measure, kronecker_check, lattice_hnf, KroneckerResult};
use liouville::counterexample::{check_periodicity, check_periodicity_exact};
use liouville::exact::{q_of, rational_ratio, Ratio};
use liouville::linalg::{self, QMat};
use liouville::measure::{support_of, Atom};
use liouville::numerics::{
    density_probe, eval_operator, propagate, sample_points, Cosine, EvaluatorConfig, GaussianBump, HarmonicPolynomial, Perturbed,
    ProbeConfig, ProbeVerdict, TestFunction,
};
use liouville::{decide, decide_1d, parse_measure, ConstantBasis, DecideConfig, ExtendedRational, LevyMeasure, LiouvilleVerdict, QValue};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn load(name: &str) -> LevyMeasure {
    parse_measure(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn int_point(v: &[i64]) -> Vec<ExtendedRational> {
    v.iter().map(|&x| ExtendedRational::from_integer(x, 1)).collect()
}

fn timed(budget: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    if t > budget {
        Err(format!("took {t:.2?}, budget {budget:?}"))
    } else {
        Ok(t)
    }
}

/// Measures whose verdict failed in suites 1–4, collected for criteria 5, 6 and 9.
struct Failed {
    name: String,
    mu: LevyMeasure,
    verdict: LiouvilleVerdict,
}

#[derive(Default)]
struct Shared {
    failed: Vec<Failed>,
}

// ---------------------------------------------------------------- criterion 1

fn criterion_1(shared: &mut Shared) -> Outcome {
    let table = [
        ("discrete_laplacian_1d.toml", "fails", "lattice"),
        ("nonstandard_1d.toml", "holds", "irrational_pair"),
        ("harmonic_1d.toml", "holds", "accumulation"),
        ("poly_ratio_1d.toml", "holds", "unbounded_q_sequence"),
        ("fractional_1d.toml", "holds", "interval_or_ball"),
        ("relativistic_1d.toml", "holds", "interval_or_ball"),
        ("convolution_1d.toml", "holds", "interval_or_ball"),
    ];
    let mut slowest = Duration::ZERO;
    for (file, status, route) in table {
        let mu = load(file);
        let start = Instant::now();
        let v = decide_1d(&mu);
        slowest = slowest.max(timed(Duration::from_secs(1), start).map_err(|e| format!("{file}: {e}"))?);
        ensure!(v.status() == status, "{file}: got {} (expected {status})", v.status());
        ensure!(v.route.name() == route, "{file}: route {} (expected {route})", v.route.name());
        if status == "fails" {
            ensure!(v.counterexample.is_some(), "{file}: no counterexample");
            shared.failed.push(Failed { name: file.into(), mu, verdict: v });
        }
    }
    // the discrete Laplacian: closure Z and U = cos(2 pi x)
    let lap = &shared.failed[0].verdict;
    ensure!(lap.closure.lambda_basis == vec![int_point(&[1])], "discrete Laplacian closure {:?}", lap.closure.lambda_basis);
    let u = lap.counterexample.as_ref().unwrap();
    for x in [0.0, 0.25, 1.7] {
        ensure!((u.value(&[x]) - (2.0 * std::f64::consts::PI * x).cos()).abs() < 1e-14, "counterexample is not cos(2 pi x)");
    }
    // a_n = (n^2 + 1)/n: Q(a_1, a_n) >= n/2 for n <= 1000, exactly
    let mu = load("poly_ratio_1d.toml");
    let seq = &mu.sequences[0];
    let a1 = ExtendedRational::from_rational(rat(2, 1), 1);
    for n in 1..=1000i64 {
        let an = ExtendedRational::from_rational(rat(n * n + 1, n), 1);
        ensure!(seq.point(n as u64)[0] == an, "template point a_{n} differs from (n^2+1)/n");
        match q_of(&a1, &an).map_err(|e| e.to_string())? {
            QValue::Finite { q, .. } => ensure!(BigInt::from(2) * q >= BigInt::from(n), "Q(a_1, a_{n}) < n/2"),
            QValue::Infinite => return Err(format!("Q(a_1, a_{n}) infinite")),
        }
    }
    Ok(format!("7 specs, slowest {slowest:.2?}; q_n >= n/2 for n <= 1000"))
}

// ---------------------------------------------------------------- criterion 2

fn random_coordinate(rng: &mut ChaCha8Rng) -> ExtendedRational {
    let q = rng.random_range(1..=12i64);
    let mut p = rng.random_range(-24..=24i64);
    if p == 0 {
        p = 1;
    }
    if rng.random_bool(0.5) {
        ExtendedRational::from_rational(rat(p, q), 2)
    } else {
        ExtendedRational::from_coords(vec![BigRational::zero(), rat(p, q)])
    }
}

/// Condition (A_L) for a finite support: some pair has an irrational ratio.
fn a_l_holds(points: &[ExtendedRational]) -> bool {
    points.iter().any(|a| points.iter().any(|b| matches!(q_of(a, b), Ok(QValue::Infinite))))
}

fn criterion_2(shared: &mut Shared) -> Outcome {
    let start = Instant::now();
    let basis = ConstantBasis::with_known(&["pi"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut holds, mut fails) = (0, 0);
    for trial in 0..500 {
        let k = rng.random_range(2..=6);
        // one weight per magnitude so that listed mirrors never disagree
        let mut magnitudes = BTreeSet::new();
        let mut atoms = Vec::new();
        while atoms.len() < k {
            let x = random_coordinate(&mut rng);
            if magnitudes.insert(x.abs(&basis)) {
                atoms.push(Atom { point: vec![x], weight: rat(rng.random_range(1..=4), 1) });
            }
        }
        let mu = LevyMeasure::atomic(1, basis.clone(), atoms).unwrap();
        let support: Vec<ExtendedRational> = mu.atoms.iter().map(|a| a.point[0].clone()).collect();
        let expected = a_l_holds(&support);
        let v = decide_1d(&mu);
        ensure!(v.certified, "trial {trial}: uncertified");
        ensure!(v.holds == expected, "trial {trial}: decide_1d says {} but (A_L) says {expected}", v.status());
        if expected {
            holds += 1;
        } else {
            fails += 1;
            if fails <= 100 {
                shared.failed.push(Failed { name: format!("random 1-d #{trial}"), mu, verdict: v });
            }
        }
    }
    let t = timed(Duration::from_secs(10), start)?;
    Ok(format!("500/500 agree ({holds} holds, {fails} fails) in {t:.2?}"))
}

// ---------------------------------------------------------------- criterion 3

fn criterion_3(shared: &mut Shared) -> Outcome {
    let start = Instant::now();
    let probe = ProbeConfig { n_max: 20, ..ProbeConfig::default() };
    let config = DecideConfig::default();
    let mut lines = Vec::new();
    for (file, dense) in [("kronecker_sqrt2_sqrt3.toml", true), ("kronecker_sqrt2_sqrt2.toml", false), ("kronecker_rational.toml", false)] {
        let mu = load(file);
        let v = decide(&mu, &config);
        ensure!(v.certified, "{file}: uncertified");
        ensure!(v.closure.is_dense() == dense, "{file}: dense = {}", v.closure.is_dense());
        let c = mu.atoms.iter().find(|a| a.point.iter().all(|x| !x.is_zero()) && a.point[0].signum(&mu.basis) > 0).unwrap().point.clone();
        match kronecker_check(&c) {
            KroneckerResult::Dense => ensure!(dense, "{file}: Kronecker check says dense"),
            KroneckerResult::NotDense { dependency } => {
                ensure!(!dense, "{file}: Kronecker check found a dependency for a dense case");
                ensure!(dependency.iter().any(|y| !y.is_zero()), "{file}: zero dependency");
                let dim = mu.basis.dim();
                let mut sum = ExtendedRational::from_rational(BigRational::from_integer(dependency[0].clone()), dim);
                for (y, ci) in dependency[1..].iter().zip(&c) {
                    sum = &sum + &ci.scale(&BigRational::from_integer(y.clone()));
                }
                ensure!(sum.is_zero(), "{file}: dependency {dependency:?} does not vanish");
            }
        }
        let report = density_probe(&support_of(&mu).finite_points, 2, &mu.basis, &probe);
        ensure!(!report.contradicts(dense), "{file}: probe says {} against certified dense = {dense}", report.verdict.name());
        lines.push(format!("{} -> {} / probe {}", file.trim_end_matches(".toml"), v.status(), report.verdict.name()));
        if !dense {
            shared.failed.push(Failed { name: file.into(), mu, verdict: v });
        }
    }
    // the two-dimensional nonstandard grids and the checkerboard join the failed pool
    for (file, status) in [("nonstandard_2d_pi.toml", "holds"), ("nonstandard_2d_three_halves.toml", "fails"), ("checkerboard_2d.toml", "fails")] {
        let mu = load(file);
        let v = decide(&mu, &config);
        ensure!(v.status() == status, "{file}: {}", v.status());
        let report = density_probe(&support_of(&mu).finite_points, 2, &mu.basis, &probe);
        ensure!(!report.contradicts(v.closure.is_dense()), "{file}: probe contradicts");
        if status == "fails" {
            shared.failed.push(Failed { name: file.into(), mu, verdict: v });
        }
    }
    let t = timed(Duration::from_secs(5), start)?;
    Ok(format!("{} in {t:.2?}", lines.join("; ")))
}

// ---------------------------------------------------------------- criterion 4

/// Integer lattice membership: solve on an invertible column subset, round, verify exactly.
struct IntLattice {
    rows: Vec<Vec<i64>>,
    cols: Vec<usize>,
    inv: Vec<Vec<f64>>,
}

impl IntLattice {
    fn new(rows: Vec<Vec<i64>>, d: usize) -> Option<Self> {
        let r = rows.len();
        if r == 0 {
            return Some(IntLattice { rows, cols: Vec::new(), inv: Vec::new() });
        }
        let combos: Vec<Vec<usize>> = match (d, r) {
            (_, r) if r == d => vec![(0..d).collect()],
            (2, 1) => vec![vec![0], vec![1]],
            (3, 1) => vec![vec![0], vec![1], vec![2]],
            (3, 2) => vec![vec![0, 1], vec![0, 2], vec![1, 2]],
            _ => return None,
        };
        for cols in combos {
            let m: Vec<Vec<f64>> = (0..r).map(|i| cols.iter().map(|&j| rows[i][j] as f64).collect()).collect();
            if let Some(inv) = invert(&m) {
                return Some(IntLattice { rows, cols, inv });
            }
        }
        None
    }

    fn contains(&self, x: &[i64]) -> bool {
        let r = self.rows.len();
        if r == 0 {
            return x.iter().all(|&v| v == 0);
        }
        // k · M = x restricted to cols  =>  k = x_cols · M^{-1}
        let k: Vec<i64> = (0..r)
            .map(|i| self.cols.iter().enumerate().map(|(a, &j)| x[j] as f64 * self.inv[a][i]).sum::<f64>().round() as i64)
            .collect();
        (0..x.len()).all(|j| (0..r).map(|i| k[i] * self.rows[i][j]).sum::<i64>() == x[j])
    }
}

fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.iter().enumerate().map(|(i, row)| {
        let mut r = row.clone();
        r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
        r
    }).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-9 {
            return None;
        }
        a.swap(c, p);
        let piv = a[c][c];
        a[c].iter_mut().for_each(|v| *v /= piv);
        for i in 0..n {
            if i != c {
                let f = a[i][c];
                let rc = a[c].clone();
                a[i].iter_mut().zip(rc).for_each(|(v, w)| *v -= f * w);
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Points of `[−half, half]^d` reachable from 0 by steps `±g` without leaving the box.
fn bfs_span(gens: &[Vec<i64>], d: usize, half: i64) -> Vec<bool> {
    let side = (2 * half + 1) as usize;
    let index = |p: &[i64]| p.iter().fold(0usize, |acc, &v| acc * side + (v + half) as usize);
    let mut seen = vec![false; side.pow(d as u32)];
    let mut queue = vec![vec![0i64; d]];
    seen[index(&queue[0])] = true;
    while let Some(p) = queue.pop() {
        for g in gens {
            for s in [1i64, -1] {
                let q: Vec<i64> = p.iter().zip(g).map(|(a, b)| a + s * b).collect();
                if q.iter().all(|v| v.abs() <= half) {
                    let i = index(&q);
                    if !seen[i] {
                        seen[i] = true;
                        queue.push(q);
                    }
                }
            }
        }
    }
    seen
}

fn for_each_point(d: usize, half: i64, mut f: impl FnMut(&[i64]) -> bool) -> bool {
    let mut p = vec![-half; d];
    loop {
        if !f(&p) {
            return false;
        }
        let mut i = d;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if p[i] < half {
                p[i] += 1;
                break;
            }
            p[i] = -half;
        }
    }
}

fn criterion_4(shared: &mut Shared) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let basis = ConstantBasis::with_known(&[]).unwrap();
    let mut checked = 0usize;
    for trial in 0..200 {
        let d = if trial % 2 == 0 { 2 } else { 3 };
        let k = rng.random_range(1..=4);
        let mut gens: Vec<Vec<i64>> = Vec::new();
        while gens.len() < k {
            let g: Vec<i64> = (0..d).map(|_| rng.random_range(-5..=5)).collect();
            if g.iter().any(|&v| v != 0) {
                gens.push(g);
            }
        }
        let hnf = lattice_hnf(&gens.iter().map(|g| int_point(g)).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
        let rows: Vec<Vec<i64>> = hnf
            .iter()
            .map(|v| v.iter().map(|x| {
                let r = x.as_rational().expect("rational lattice");
                assert!(r.is_integer());
                i64::try_from(r.to_integer()).unwrap()
            }).collect())
            .collect();
        let lattice = IntLattice::new(rows, d).ok_or_else(|| format!("trial {trial}: HNF basis is rank-deficient"))?;
        let outer = if d == 2 { 50 } else { 35 };
        let seen = bfs_span(&gens, d, outer);
        let side = (2 * outer + 1) as usize;
        let mut bad = None;
        let ok = for_each_point(d, 20, |p| {
            let idx = p.iter().fold(0usize, |acc, &v| acc * side + (v + outer) as usize);
            let agree = seen[idx] == lattice.contains(p);
            if !agree {
                bad = Some((p.to_vec(), seen[idx]));
            }
            checked += 1;
            agree
        });
        ensure!(ok, "trial {trial}: generators {gens:?}, point {:?} (brute force {})", bad.as_ref().unwrap().0, bad.as_ref().unwrap().1);
        if trial < 60 {
            let atoms = gens.iter().map(|g| Atom { point: int_point(g), weight: BigRational::one() }).collect();
            let mu = LevyMeasure::atomic(d, basis.clone(), atoms).map_err(|e| e.to_string())?;
            let v = decide(&mu, &DecideConfig::default());
            ensure!(v.status() == "fails", "trial {trial}: integer generators gave {}", v.status());
            shared.failed.push(Failed { name: format!("integer lattice #{trial}"), mu, verdict: v });
        }
    }
    let t = timed(Duration::from_secs(30), start)?;
    Ok(format!("200 generator sets, {checked} box points agree in {t:.2?}"))
}

// ---------------------------------------------------------------- criterion 5

fn in_span(v: &QMat, w: &[BigRational]) -> bool {
    if w.iter().all(Zero::is_zero) {
        return true;
    }
    let mut m = v.clone();
    m.push(w.to_vec());
    linalg::rank(&m) == linalg::rank(v)
}

/// `x ∈ span_ℝ(V)` for rational `V`: each basis component of `x` must lie in `span_ℚ(V)`.
fn in_subspace(v: &QMat, x: &[ExtendedRational]) -> bool {
    let dim = x.first().map_or(1, ExtendedRational::dim);
    (0..dim).all(|t| in_span(v, &x.iter().map(|c| c.coords()[t].clone()).collect::<Vec<_>>()))
}

fn project_out(v: &QMat, x: &[ExtendedRational], dim: usize) -> Vec<ExtendedRational> {
    if v.is_empty() {
        return x.to_vec();
    }
    // P = I − Vᵀ (V Vᵀ)^{-1} V
    let vt = linalg::transpose(v);
    let gram_inv = linalg::inverse(&linalg::mat_mul(v, &vt)).unwrap();
    let proj = linalg::mat_mul(&linalg::mat_mul(&vt, &gram_inv), v);
    let d = x.len();
    let p: QMat = (0..d).map(|i| (0..d).map(|j| if i == j { BigRational::one() } else { BigRational::zero() } - &proj[i][j]).collect()).collect();
    linalg::apply(&p, x, dim)
}

fn criterion_5(shared: &mut Shared) -> Outcome {
    let start = Instant::now();
    for f in &shared.failed {
        let (mu, g) = (&f.mu, &f.verdict.closure);
        let dim = mu.basis.dim();
        let dec = decompose_measure(mu, g).map_err(|e| format!("{}: {e}", f.name))?;
        let v: QMat = g.v_rational().ok_or_else(|| format!("{}: V is not rational", f.name))?;
        let mut reassembled: Vec<(Vec<ExtendedRational>, BigRational)> = Vec::new();
        for (key, part) in &dec.parts {
            ensure!(g.contains(&part.offset).map_err(|e| e.to_string())?, "{}: offset outside the closure", f.name);
            for a in &part.atoms {
                let diff: Vec<ExtendedRational> = a.point.iter().zip(&part.offset).map(|(p, o)| p - o).collect();
                ensure!(in_subspace(&v, &diff), "{}: atom outside V + a for a = {key:?}", f.name);
                reassembled.push((a.point.clone(), a.weight.clone()));
            }
            let neg: Vec<BigInt> = key.iter().map(|x| -x).collect();
            let mirror = dec.parts.get(&neg).ok_or_else(|| format!("{}: part {key:?} has no mirror", f.name))?;
            let mut flipped: Vec<_> = mirror.atoms.iter().map(|a| (a.point.iter().map(|x| -x).collect::<Vec<_>>(), a.weight.clone())).collect();
            let mut own: Vec<_> = part.atoms.iter().map(|a| (a.point.clone(), a.weight.clone())).collect();
            flipped.sort();
            own.sort();
            ensure!(own == flipped, "{}: mu_a != mu_-a(-.) for a = {key:?}", f.name);
        }
        ensure!(dec.off_zero_mass.is_finite(), "{}: infinite mass off V", f.name);
        if mu.is_finite_atomic() {
            let mut original: Vec<_> = mu.atoms.iter().map(|a| (a.point.clone(), a.weight.clone())).collect();
            original.sort();
            reassembled.sort();
            ensure!(original == reassembled, "{}: parts do not add up to mu", f.name);
            let exact_off: BigRational =
                dec.parts.iter().filter(|(k, _)| k.iter().any(|x| !x.is_zero())).map(|(_, p)| p.mass.clone()).sum();
            let approx: f64 = num_traits::ToPrimitive::to_f64(&exact_off).unwrap();
            ensure!((approx - dec.off_zero_mass).abs() <= 1e-9 * (1.0 + approx), "{}: off-V mass {approx} vs {}", f.name, dec.off_zero_mass);
        }
        // V ⊥ Λ̃ and the same group: support ⊆ V + Λ̃, and Λ̃ = projected support lattice
        ensure!(g.orthogonal, "{}: closure not orthogonalized", f.name);
        for l in &g.lambda_basis {
            for b in &v {
                let dot = l.iter().zip(b).fold(ExtendedRational::zero(dim), |acc, (x, c)| &acc + &x.scale(c));
                ensure!(dot.is_zero(), "{}: Λ̃ not orthogonal to V", f.name);
            }
        }
        let points = support_of(mu).finite_points;
        for p in &points {
            ensure!(g.contains(p).map_err(|e| e.to_string())?, "{}: support point outside the closure", f.name);
        }
        let projected: Vec<Vec<ExtendedRational>> =
            points.iter().map(|p| project_out(&v, p, dim)).filter(|p| p.iter().any(|x| !x.is_zero())).collect();
        let rational = projected.iter().all(|p| p.iter().all(ExtendedRational::is_rational));
        if !projected.is_empty() && !rational {
            // d = 1 with an irrational generator g: every point is k g, and gcd(k) = 1
            ensure!(mu.dimension == 1 && g.lambda_basis.len() == 1, "{}: irrational lattice in d > 1", f.name);
            let gen = &g.lambda_basis[0][0];
            let mut gcd = BigInt::zero();
            for p in &projected {
                match rational_ratio(gen, &p[0]).map_err(|e| e.to_string())? {
                    Ratio::Rational(r) if r.is_integer() => gcd = num_integer::Integer::gcd(&gcd, &r.to_integer()),
                    other => return Err(format!("{}: support point is not an integer multiple of g ({other:?})", f.name)),
                }
            }
            ensure!(gcd.is_one(), "{}: g is not generated by the support (gcd {gcd})", f.name);
        } else if !projected.is_empty() {
            let span = lattice_hnf(&projected).map_err(|e| format!("{}: {e}", f.name))?;
            let span_q: Vec<_> = span.iter().map(|p| linalg::lift(p)).collect();
            let lam_q: Vec<_> = g.lambda_basis.iter().map(|p| linalg::lift(p)).collect();
            for l in &lam_q {
                ensure!(linalg::lattice_coordinates(&span_q, l).is_some(), "{}: Λ̃ vector not generated by the support", f.name);
            }
            for s in &span_q {
                ensure!(linalg::lattice_coordinates(&lam_q, s).is_some(), "{}: support lattice not inside Λ̃", f.name);
            }
        }
    }
    Ok(format!("{} failed verdicts decomposed soundly in {:.2?}", shared.failed.len(), start.elapsed()))
}

// ---------------------------------------------------------------- criterion 6

fn criterion_6(shared: &mut Shared) -> Outcome {
    let start = Instant::now();
    let config = EvaluatorConfig::default();
    let mut evaluated = 0;
    for (i, f) in shared.failed.iter().enumerate() {
        if !f.mu.is_finite_atomic() {
            continue;
        }
        let u = f.verdict.counterexample.as_ref().ok_or_else(|| format!("{}: no counterexample", f.name))?;
        for x in sample_points(f.mu.dimension, 100, 5.0, 600 + i as u64) {
            let e = eval_operator(&f.mu, u, &x, &config).map_err(|e| e.to_string())?;
            ensure!(e.value == 0.0 && e.bound == 0.0, "{}: L U({x:?}) = {} ± {}", f.name, e.value, e.bound);
            evaluated += 1;
        }
    }
    let mu = load("diffuse_hyperplane_2d.toml");
    let v = decide(&mu, &DecideConfig::default());
    ensure!(v.status() == "fails", "diffuse hyperplane: {}", v.status());
    let u = v.counterexample.as_ref().ok_or("diffuse hyperplane: no counterexample")?;
    let mut worst: f64 = 0.0;
    for x in sample_points(2, 10, 5.0, 66) {
        let e = eval_operator(&mu, u, &x, &config).map_err(|e| e.to_string())?;
        worst = worst.max(e.value.abs());
    }
    ensure!(worst < 1e-8, "diffuse hyperplane: |L U| = {worst:e}");
    Ok(format!("{evaluated} atomic evaluations exactly 0; diffuse max |L U| = {worst:e}; {:.2?}", start.elapsed()))
}

// ---------------------------------------------------------------- criterion 7

fn criterion_7(_: &mut Shared) -> Outcome {
    let start = Instant::now();
    let config = EvaluatorConfig::default();
    let frac = load("fractional_1d.toml");
    let u = Cosine { frequency: vec![1.0], phase: 0.0 };
    let mut err: f64 = 0.0;
    for x in [0.0, 0.7, 2.0, -3.1] {
        let e = eval_operator(&frac, &u, &[x], &config).map_err(|e| e.to_string())?;
        err = err.max((e.value + x.cos()).abs());
    }
    ensure!(err < 1e-4, "half-Laplacian of cos off by {err:e}");

    let mean = load("mean_value_2d.toml");
    let h = HarmonicPolynomial::SquareDifference { d: 2, i: 0, j: 1 };
    let mut harm: f64 = 0.0;
    for x in [[0.0, 0.0], [1.5, -0.3], [3.0, 2.0], [-4.0, 0.5]] {
        harm = harm.max(eval_operator(&mean, &h, &x, &config).map_err(|e| e.to_string())?.value.abs());
    }
    ensure!(harm < 1e-10, "mean value of x1^2 - x2^2 is {harm:e}");

    let bump = GaussianBump { center: vec![0.0], width: 0.8, amplitude: 1.0 };
    let evals = [0.5, 1.0, 2.0]
        .iter()
        .map(|&r0| eval_operator(&frac, &bump, &[0.3], &EvaluatorConfig { r0, ..config.clone() }))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    for a in &evals {
        for b in &evals {
            ensure!((a.value - b.value).abs() <= 2.0 * a.bound.max(b.bound), "r0 split: {} vs {} (bounds {}, {})", a.value, b.value, a.bound, b.bound);
        }
    }
    let t = timed(Duration::from_secs(10), start)?;
    Ok(format!("cos err {err:.1e}, harmonic {harm:.1e}, r0 spread within 2x bound; {t:.2?}"))
}

// ---------------------------------------------------------------- criterion 8

fn criterion_8(_: &mut Shared) -> Outcome {
    let config = ProbeConfig::default();
    let basis = ConstantBasis::with_known(&[]).unwrap();
    let ones = vec![int_point(&[1])];
    let p = propagate(&ones, 1, &basis, &config).map_err(|e| e.to_string())?;
    ensure!(p.history.windows(2).all(|w| w[1] <= w[0]), "{{±1}}: history increases");
    ensure!(p.history[5..].iter().all(|&d| (d - 0.5).abs() < 1e-12), "{{±1}}: δ_n != 1/2 after the window fills: {:?}", p.history);
    let r = density_probe(&ones, 1, &basis, &config);
    let g = match &r.verdict {
        ProbeVerdict::LatticeDetected { basis } => basis[0][0].abs(),
        other => return Err(format!("{{±1}}: probe says {}", other.name())),
    };
    ensure!((g - 1.0).abs() <= 1e-9, "{{±1}}: g-estimate {g}");

    let mu = load("propagate_sqrt2.toml");
    let pts = support_of(&mu).finite_points;
    let q = propagate(&pts, 1, &mu.basis, &config).map_err(|e| e.to_string())?;
    ensure!(q.history.windows(2).all(|w| w[1] <= w[0]), "{{±1, ±√2}}: history increases");
    let n = q.reached.ok_or("{±1, ±√2}: δ_n never dropped below 0.05")?;
    ensure!(n <= 40, "{{±1, ±√2}}: reached at n = {n}");

    let near = load("near_rational_355_113.toml");
    let w = propagate(&support_of(&near).finite_points, 1, &near.basis, &config).map_err(|e| e.to_string())?;
    ensure!(w.history.windows(2).all(|w| w[1] <= w[0]), "355/113: history increases");
    Ok(format!("{{±1}}: δ = 1/2, g = {g}; {{±1, ±√2}}: δ_{n} = {:.6} < 0.05", q.history[n]))
}

// ---------------------------------------------------------------- criterion 9

fn criterion_9(shared: &mut Shared) -> Outcome {
    let (mut checked, mut ill_conditioned) = (0, 0);
    let mut worst: f64 = 0.0;
    for (i, f) in shared.failed.iter().enumerate() {
        let Some(u) = &f.verdict.counterexample else { continue };
        let generators: Vec<Vec<f64>> =
            support_of(&f.mu).finite_points.iter().map(|p| p.iter().map(|x| x.to_f64(&f.mu.basis)).collect()).collect();
        let exact_generators = support_of(&f.mu).finite_points;
        let samples = sample_points(f.mu.dimension, 20, 1.0, 900 + i as u64);
        let exact = check_periodicity_exact(u, &exact_generators, &samples, &f.mu.basis, 1e-12);
        ensure!(exact.passed, "{}: exact-shift deviation {:e} at {:?}", f.name, exact.max_deviation, exact.worst);
        // Shifting in floating point perturbs the argument by ~ulp(|x| + |s|), so U moves by up to
        // |∇U| times that; the 1e-12 threshold applies wherever this floor is below it.
        let grad = TestFunction::hessian_bound(u, &samples[0], 0.0).sqrt();
        let reach = 1.0 + generators.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        let floor = 4.0 * grad * reach * f64::EPSILON;
        let check = check_periodicity(u, &generators, &samples, 1e-12f64.max(floor));
        ensure!(check.passed, "{}: deviation {:e} (floor {floor:e}) at {:?}", f.name, check.max_deviation, check.worst);
        if floor > 1e-12 {
            ill_conditioned += 1;
        } else {
            worst = worst.max(check.max_deviation);
        }
        checked += 1;

        if f.mu.is_finite_atomic() && i % 10 == 0 {
            let d = f.mu.dimension;
            let control = Perturbed { base: u.clone(), bump: GaussianBump { center: vec![0.0; d], width: 0.3, amplitude: 0.5 } };
            let at_origin = vec![vec![0.0; d]];
            let c = check_periodicity(&control, &generators, &at_origin, 1e-12);
            ensure!(!c.passed, "{}: perturbed control looks periodic", f.name);
            let e = eval_operator(&f.mu, &control, &at_origin[0], &EvaluatorConfig::default()).map_err(|e| e.to_string())?;
            ensure!(e.value.abs() > 1e-6, "{}: perturbed control is annihilated ({})", f.name, e.value);
        }
    }
    Ok(format!(
        "{checked} counterexamples periodic under exact shifts; float deviation {worst:.1e} < 1e-12 on {}, \
         {ill_conditioned} steep cosines within their rounding floor; perturbed controls rejected",
        checked - ill_conditioned
    ))
}

// ---------------------------------------------------------------- criterion 10

fn criterion_10(_: &mut Shared) -> Outcome {
    let files: BTreeSet<String> = std::fs::read_dir(data(""))
        .unwrap()
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.ends_with(".toml") && n != "malformed.toml")
        .collect();
    let mut digests = HashSet::new();
    for file in &files {
        let path = data(file);
        for format in ["report", "json-like"] {
            let cli = Cli::try_parse_from(["liouville", "decide", path.to_str().unwrap(), "--format", format]).map_err(|e| e.to_string())?;
            let a = cli::execute(&cli).map_err(|e| e.to_string())?;
            let b = cli::execute(&cli).map_err(|e| e.to_string())?;
            ensure!(cli::strip_timestamp(&a.output) == cli::strip_timestamp(&b.output), "{file} ({format}): reports differ");
            ensure!(a.code == b.code, "{file}: exit codes differ");
            if format == "report" {
                let parsed: cli::report::VerdictReport = toml::from_str(&a.output).map_err(|e| format!("{file}: {e}"))?;
                ensure!(toml::to_string(&parsed).unwrap() == a.output, "{file}: report does not round-trip");
                digests.insert(parsed.header.input_digest);
            }
        }
    }
    ensure!(digests.len() == files.len(), "input digests collide");
    // two separate processes
    let bin = env!("CARGO_BIN_EXE_liouville");
    let run = || std::process::Command::new(bin).args(["decide", data("checkerboard_2d.toml").to_str().unwrap()]).output().unwrap();
    let (x, y) = (run(), run());
    ensure!(x.status.code() == Some(10), "checkerboard exit code {:?}", x.status.code());
    ensure!(
        cli::strip_timestamp(&String::from_utf8_lossy(&x.stdout)) == cli::strip_timestamp(&String::from_utf8_lossy(&y.stdout)),
        "process outputs differ"
    );
    Ok(format!("{} specs x 2 formats byte-identical modulo timestamp; reports round-trip", files.len()))
}

fn main() {
    let criteria: [(&str, fn(&mut Shared) -> Outcome); 10] = [
        ("1-d decision table", criterion_1),
        ("brute-force (A_L) equivalence", criterion_2),
        ("Kronecker suite", criterion_3),
        ("HNF vs brute-force span", criterion_4),
        ("decomposition soundness", criterion_5),
        ("counterexample verification", criterion_6),
        ("operator numerics", criterion_7),
        ("propagation diagnostics", criterion_8),
        ("periodicity coherence", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut shared = Shared::default();
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(|| run(&mut shared))).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:2} {name}: PASS ({secs:.2}s) {detail}", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {:2} {name}: FAIL ({secs:.2}s) {e}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
