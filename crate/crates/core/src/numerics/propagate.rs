//! Propagation of maximum sets `A_{n+1} = A_n + supp μ` and the numerical
//! density probe built on it.

use std::collections::BTreeSet;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::{ConstantBasis, ExtendedRational};

use super::NumericsError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Window radius `R`.
    pub radius: f64,
    pub n_max: usize,
    /// Stop once `δ_n < target_delta` (ties within a relative `1e-9` count as not reached).
    pub target_delta: f64,
    /// Grid spacing for `δ_n`; `R/200` (d ≤ 2) or `R/50` (d = 3) by default.
    pub grid_step: Option<f64>,
    pub point_cap: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { radius: 5.0, n_max: 40, target_delta: 0.05, grid_step: None, point_cap: 5_000_000 }
    }
}

impl ProbeConfig {
    pub fn step(&self, d: usize) -> f64 {
        self.grid_step.unwrap_or(if d >= 3 { self.radius / 50.0 } else { self.radius / 200.0 })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Propagation {
    pub dimension: usize,
    pub radius: f64,
    pub grid_step: f64,
    /// `δ_n = sup_{y ∈ B_R ∩ grid} dist(y, A_n)` for `n = 0, 1, …`.
    pub history: Vec<f64>,
    /// `|A_n ∩ B_{R+margin}|`.
    pub sizes: Vec<usize>,
    /// First `n` with `δ_n < target`.
    pub reached: Option<usize>,
    /// The point cap stopped the iteration.
    pub capped: bool,
    /// Final point set, in floating point, sorted.
    pub points: Vec<Vec<f64>>,
}

impl Propagation {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), NumericsError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["n", "points", "delta"]).map_err(csv_err)?;
        for (n, (delta, size)) in self.history.iter().zip(&self.sizes).enumerate() {
            out.write_record([n.to_string(), size.to_string(), format!("{delta:.17e}")]).map_err(csv_err)?;
        }
        out.flush().map_err(|e| NumericsError::Io(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> NumericsError {
    NumericsError::Io(e.to_string())
}

/// Grid over `[−R, R]^d` with a running distance field to the current point set.
struct DistanceField {
    d: usize,
    side: usize,
    step: f64,
    radius: f64,
    dist: Vec<f64>,
    inside: Vec<bool>,
}

impl DistanceField {
    fn new(d: usize, radius: f64, step: f64) -> Self {
        let side = (2.0 * radius / step).round() as usize + 1;
        let total = side.pow(d as u32);
        let mut inside = vec![false; total];
        let mut idx = vec![0usize; d];
        for (flat, slot) in inside.iter_mut().enumerate() {
            decode(flat, side, &mut idx);
            let r2: f64 = idx.iter().map(|&i| (-radius + i as f64 * step).powi(2)).sum();
            *slot = r2 <= radius * radius * (1.0 + 1e-12);
        }
        DistanceField { d, side, step, radius, dist: vec![f64::INFINITY; total], inside }
    }

    /// Lower distances around `p` out to `reach`.
    fn insert(&mut self, p: &[f64], reach: f64) {
        let reach = reach.min(4.0 * self.radius);
        let mut lo = vec![0usize; self.d];
        let mut hi = vec![0usize; self.d];
        for k in 0..self.d {
            let a = ((p[k] - reach + self.radius) / self.step).floor().max(0.0);
            let b = ((p[k] + reach + self.radius) / self.step).ceil().min((self.side - 1) as f64);
            if a > b {
                return;
            }
            lo[k] = a as usize;
            hi[k] = b as usize;
        }
        let mut idx = lo.clone();
        loop {
            let mut flat = 0;
            let mut r2 = 0.0;
            for k in 0..self.d {
                flat = flat * self.side + idx[k];
                r2 += (-self.radius + idx[k] as f64 * self.step - p[k]).powi(2);
            }
            let r = r2.sqrt();
            if r < self.dist[flat] {
                self.dist[flat] = r;
            }
            // odometer increment
            let mut k = self.d;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                if idx[k] < hi[k] {
                    idx[k] += 1;
                    break;
                }
                idx[k] = lo[k];
            }
        }
    }

    fn delta(&self) -> f64 {
        self.dist.iter().zip(&self.inside).filter(|(_, i)| **i).map(|(d, _)| *d).fold(0.0, f64::max)
    }
}

fn decode(mut flat: usize, side: usize, idx: &mut [usize]) {
    for k in (0..idx.len()).rev() {
        idx[k] = flat % side;
        flat /= side;
    }
}

fn to_f64(p: &[ExtendedRational], basis: &ConstantBasis) -> Vec<f64> {
    p.iter().map(|x| x.to_f64(basis)).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Iterate `A_{n+1} = A_n ∪ (A_n + S)` inside `B_{R + margin}`, `margin = max |s|`,
/// starting from `A_0 = {0}`. `S` is closed under negation before use.
pub fn propagate(
    support: &[Vec<ExtendedRational>],
    d: usize,
    basis: &ConstantBasis,
    config: &ProbeConfig,
) -> Result<Propagation, NumericsError> {
    if !(config.radius > 0.0) || config.point_cap == 0 {
        return Err(NumericsError::Config("probe radius and point cap must be positive".into()));
    }
    let step = config.step(d);
    if !(step > 0.0) || (2.0 * config.radius / step).powi(d as i32) > 2e8 {
        return Err(NumericsError::Config(format!("grid step {step} is too fine for d = {d}")));
    }
    let dim = basis.dim();
    let mut s: BTreeSet<Vec<ExtendedRational>> = BTreeSet::new();
    for p in support {
        if p.len() != d {
            return Err(NumericsError::Dimension(format!("support point has {} coordinates, expected {d}", p.len())));
        }
        if p.iter().all(ExtendedRational::is_zero) {
            continue;
        }
        s.insert(p.clone());
        s.insert(p.iter().map(|x| -x).collect());
    }
    if s.is_empty() {
        return Err(NumericsError::EmptySupport);
    }
    // floats ride along with the exact coordinates; exactness is only needed for deduplication
    let s: Vec<(Vec<ExtendedRational>, Vec<f64>)> = s.into_iter().map(|p| {
        let f = to_f64(&p, basis);
        (p, f)
    }).collect();
    let margin = s.iter().map(|(_, f)| norm(f)).fold(0.0, f64::max);
    let window = config.radius + margin;

    let origin = vec![ExtendedRational::zero(dim); d];
    let mut all: BTreeSet<Vec<ExtendedRational>> = BTreeSet::from([origin.clone()]);
    let mut points = vec![vec![0.0; d]];
    let mut frontier = vec![(origin, vec![0.0; d])];
    let mut field = DistanceField::new(d, config.radius, step);
    field.insert(&vec![0.0; d], f64::INFINITY);
    let mut history = vec![field.delta()];
    let mut sizes = vec![1];
    let below = |delta: f64| delta < config.target_delta * (1.0 - 1e-9);
    let mut reached = below(history[0]).then_some(0);
    let mut capped = false;

    for _ in 1..=config.n_max {
        if reached.is_some() {
            break;
        }
        let candidates: Vec<(Vec<ExtendedRational>, Vec<f64>)> = frontier
            .par_iter()
            .flat_map_iter(|(f, ff)| {
                s.iter().filter_map(move |(t, tf)| {
                    let qf: Vec<f64> = ff.iter().zip(tf).map(|(a, b)| a + b).collect();
                    (norm(&qf) <= window).then(|| (f.iter().zip(t).map(|(a, b)| a + b).collect(), qf))
                })
            })
            .collect();
        let mut fresh: Vec<(Vec<ExtendedRational>, Vec<f64>)> = Vec::new();
        let mut seen_now: BTreeSet<&Vec<ExtendedRational>> = BTreeSet::new();
        let mut order: Vec<usize> = (0..candidates.len()).collect();
        order.sort_by(|&i, &j| candidates[i].0.cmp(&candidates[j].0));
        for i in order {
            let q = &candidates[i].0;
            if !all.contains(q) && seen_now.insert(q) {
                fresh.push(candidates[i].clone());
            }
        }
        drop(seen_now);
        let reach = *history.last().unwrap();
        for (q, qf) in &fresh {
            field.insert(qf, reach);
            all.insert(q.clone());
            points.push(qf.clone());
        }
        frontier = fresh;
        history.push(field.delta());
        sizes.push(all.len());
        if below(*history.last().unwrap()) {
            reached = Some(history.len() - 1);
        }
        if all.len() > config.point_cap {
            capped = true;
            break;
        }
    }
    Ok(Propagation { dimension: d, radius: config.radius, grid_step: step, history, sizes, reached, capped, points })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ProbeVerdict {
    /// The points sit on a lattice; `basis` are fitted generators (`basis[0][0]` is `g` in d = 1).
    LatticeDetected { basis: Vec<Vec<f64>> },
    DenseLikely,
    Inconclusive,
}

impl ProbeVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ProbeVerdict::LatticeDetected { .. } => "lattice-detected",
            ProbeVerdict::DenseLikely => "dense-likely",
            ProbeVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Outcome of the numerical density probe. Never a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub verdict: ProbeVerdict,
    pub history: Vec<f64>,
    pub sizes: Vec<usize>,
    pub radius: f64,
    pub grid_step: f64,
    pub capped: bool,
}

impl ProbeReport {
    /// Whether the probe disagrees with an exact density statement.
    pub fn contradicts(&self, certified_dense: bool) -> bool {
        match self.verdict {
            ProbeVerdict::LatticeDetected { .. } => certified_dense,
            ProbeVerdict::DenseLikely => !certified_dense,
            ProbeVerdict::Inconclusive => false,
        }
    }
}

/// Greedy successive minima of the point cloud, accepted when every point has
/// integer coordinates within `1e-9`.
fn fit_lattice(points: &[Vec<f64>], d: usize) -> Option<Vec<Vec<f64>>> {
    let mut sorted: Vec<&Vec<f64>> = points.iter().filter(|p| norm(p) > 1e-12).collect();
    sorted.sort_by(|a, b| norm(a).total_cmp(&norm(b)).then_with(|| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal)));
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for p in sorted {
        if basis.len() == d {
            break;
        }
        let mut r = p.clone();
        for q in &ortho {
            let c: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
            r.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
        let n = norm(&r);
        if n > 1e-6 * norm(p) {
            basis.push(p.clone());
            ortho.push(r.into_iter().map(|a| a / n).collect());
        }
    }
    if basis.is_empty() {
        return None;
    }
    // Gram matrix solve for coordinates
    let k = basis.len();
    let gram: Vec<Vec<f64>> = basis.iter().map(|a| basis.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect();
    for p in points {
        let rhs: Vec<f64> = basis.iter().map(|a| a.iter().zip(p).map(|(x, y)| x * y).sum()).collect();
        let c = solve_small(&gram, &rhs)?;
        let recon: Vec<f64> = (0..d).map(|i| (0..k).map(|j| c[j] * basis[j][i]).sum()).collect();
        let resid = norm(&recon.iter().zip(p).map(|(a, b)| a - b).collect::<Vec<_>>());
        if resid > 1e-9 || c.iter().any(|x| (x - x.round()).abs() > 1e-9) {
            return None;
        }
    }
    Some(basis)
}

fn solve_small(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(row, bi)| row.iter().copied().chain([*bi]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Classify the propagation history:
/// lattice-detected when `δ_n` is constant over the last five iterations and the
/// points snap to a fitted lattice; dense-likely when `δ_n` fell by a factor ≥ 10
/// and below `R/50`; inconclusive otherwise.
pub fn classify(prop: &Propagation) -> ProbeVerdict {
    let h = &prop.history;
    let last = *h.last().unwrap();
    if h.len() >= 6 && h[h.len() - 6..].windows(2).all(|w| (w[0] - w[1]).abs() <= 1e-12) {
        if let Some(basis) = fit_lattice(&prop.points, prop.dimension) {
            return ProbeVerdict::LatticeDetected { basis };
        }
    }
    if last * 10.0 <= h[0] && last < prop.radius / 50.0 {
        return ProbeVerdict::DenseLikely;
    }
    ProbeVerdict::Inconclusive
}

pub fn density_probe(points: &[Vec<ExtendedRational>], d: usize, basis: &ConstantBasis, config: &ProbeConfig) -> ProbeReport {
    match propagate(points, d, basis, config) {
        Ok(prop) => ProbeReport {
            verdict: classify(&prop),
            history: prop.history,
            sizes: prop.sizes,
            radius: prop.radius,
            grid_step: prop.grid_step,
            capped: prop.capped,
        },
        Err(_) => ProbeReport {
            verdict: ProbeVerdict::Inconclusive,
            history: Vec::new(),
            sizes: Vec::new(),
            radius: config.radius,
            grid_step: config.step(d),
            capped: false,
        },
    }
}
