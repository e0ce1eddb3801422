//! Holds/fails decision for the Liouville property, with certificates.
//!
//! Liouville holds exactly when the closed subgroup generated by the support
//! is all of ℝ^d. When it is not, the support sits in `H + cℤ` for a
//! hyperplane `H` and a vector `c ∉ H`, and `cos(2π λ_x)` is a bounded
//! nonconstant solution.

use num_bigint::BigInt;

use crate::closure::{
    closure_1d, closure_multid, ClosedSubgroup, ClosureConfig, DensityEvidence, HyperplaneCertificate,
};
use crate::counterexample::Counterexample;
use crate::exact::{q_of, ExtendedRational, QValue};
use crate::linalg::QVec;
use crate::measure::{support_of, LevyMeasure};
use crate::numerics::ProbeVerdict;

#[derive(Debug, Clone, PartialEq)]
pub enum Route {
    Accumulation { at: Vec<ExtendedRational> },
    IntervalOrBall { part: String },
    IrrationalPair { a: ExtendedRational, b: ExtendedRational },
    /// `witnesses` lists `(n, Q(a_1, a_n))` at sampled indices of the sequence.
    UnboundedQSequence { sequence: usize, detail: String, witnesses: Vec<(u64, BigInt)> },
    /// No nonzero integer relation survives; the closure is everything.
    Kronecker,
    /// Fails in d = 1 (or for the trivial measure): `Λ = gℤ` or `{0}`.
    Lattice { basis: Vec<Vec<ExtendedRational>> },
    /// Fails in d ≥ 2.
    Hyperplane { normal: QVec, c: Vec<ExtendedRational> },
    /// Only the numerical probe was available; `score = δ_last / δ_0`.
    Probe { verdict: String, score: f64 },
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Accumulation { .. } => "accumulation",
            Route::IntervalOrBall { .. } => "interval_or_ball",
            Route::IrrationalPair { .. } => "irrational_pair",
            Route::UnboundedQSequence { .. } => "unbounded_q_sequence",
            Route::Kronecker => "kronecker",
            Route::Lattice { .. } => "lattice",
            Route::Hyperplane { .. } => "hyperplane",
            Route::Probe { .. } => "probe",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiouvilleVerdict {
    /// Best available answer; authoritative only when `certified`.
    pub holds: bool,
    pub certified: bool,
    pub route: Route,
    pub closure: ClosedSubgroup,
    pub certificate: Option<HyperplaneCertificate>,
    pub counterexample: Option<Counterexample>,
    /// The ℚ-independence assertions the verdict relies on.
    pub assumptions: String,
    /// `sup Q(a_1, b)` over finite support points (d = 1), `None` when infinite.
    pub sup_q: Option<BigInt>,
    pub notes: Vec<String>,
}

impl LiouvilleVerdict {
    /// `holds` / `fails` / `uncertified`.
    pub fn status(&self) -> &'static str {
        match (self.certified, self.holds) {
            (false, _) => "uncertified",
            (true, true) => "holds",
            (true, false) => "fails",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct DecideConfig {
    pub closure: ClosureConfig,
}

fn dense_route(g: &ClosedSubgroup, mu: &LevyMeasure) -> Route {
    match &g.evidence {
        Some(DensityEvidence::ContinuousPart(p)) => Route::IntervalOrBall { part: p.clone() },
        Some(DensityEvidence::Accumulation { at }) => Route::Accumulation { at: at.clone() },
        Some(DensityEvidence::IrrationalPair { a, b }) => Route::IrrationalPair { a: a.clone(), b: b.clone() },
        Some(DensityEvidence::UnboundedSequence { index, detail }) => {
            Route::UnboundedQSequence { sequence: *index, detail: detail.clone(), witnesses: q_witnesses(mu, *index) }
        }
        Some(DensityEvidence::NoAnnihilator) | None => Route::Kronecker,
        Some(DensityEvidence::Probe) => probe_route(g),
    }
}

fn probe_route(g: &ClosedSubgroup) -> Route {
    let (verdict, score) = match &g.probe {
        Some(r) => {
            let score = match (r.history.first(), r.history.last()) {
                (Some(a), Some(b)) if *a > 0.0 => b / a,
                _ => f64::NAN,
            };
            (r.verdict.name().to_string(), score)
        }
        None => (ProbeVerdict::Inconclusive.name().to_string(), f64::NAN),
    };
    Route::Probe { verdict, score }
}

/// `(n, Q(a_1, a_n))` for `n = 1, 2, 4, …` up to the truncation, along the line of the sequence.
fn q_witnesses(mu: &LevyMeasure, index: usize) -> Vec<(u64, BigInt)> {
    let Some(s) = mu.sequences.get(index) else { return Vec::new() };
    let coord = |n: u64| -> ExtendedRational {
        // the points are scale · f(n) · direction; compare along the first nonzero direction entry
        let p = s.point(n);
        let i = s.direction.iter().position(|c| !num_traits::Zero::is_zero(c)).unwrap_or(0);
        p[i].clone()
    };
    let a1 = coord(1);
    let mut out = Vec::new();
    let mut n = 1;
    while n <= s.truncation {
        if let Ok(QValue::Finite { q, .. }) = q_of(&a1, &coord(n)) {
            out.push((n, q));
        }
        n *= 2;
    }
    out
}

fn sup_q_1d(points: &[Vec<ExtendedRational>]) -> Option<BigInt> {
    let a1 = points.iter().map(|p| &p[0]).find(|x| !x.is_zero())?;
    let mut sup = BigInt::from(1);
    for p in points {
        match q_of(a1, &p[0]) {
            Ok(QValue::Finite { q, .. }) => sup = sup.max(q),
            Ok(QValue::Infinite) => return None,
            Err(_) => {}
        }
    }
    Some(sup)
}

fn finish(mu: &LevyMeasure, g: ClosedSubgroup) -> LiouvilleVerdict {
    let basis = &mu.basis;
    let support = support_of(mu);
    let mut notes = Vec::new();
    let sup_q = if mu.dimension == 1 { sup_q_1d(&support.finite_points) } else { None };
    let certified = g.is_certified();
    if g.is_dense() {
        let route = if certified { dense_route(&g, mu) } else { probe_route(&g) };
        return LiouvilleVerdict {
            holds: true,
            certified,
            route,
            closure: g,
            certificate: None,
            counterexample: None,
            assumptions: basis.assertion_echo(),
            sup_q,
            notes,
        };
    }
    let certificate = match HyperplaneCertificate::from_closure(&g, basis) {
        Ok(c) => match c.check(&support, basis) {
            Ok(()) => Some(c),
            Err(e) => {
                notes.push(e.to_string());
                None
            }
        },
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    let counterexample = certificate.as_ref().and_then(|c| match Counterexample::from_certificate(c.clone(), basis) {
        Ok(u) => Some(u),
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    });
    let certified = certified && certificate.is_some() && counterexample.is_some();
    if g.inconclusive {
        notes.push("numerical probe was inconclusive".into());
    }
    let route = if !g.is_certified() {
        probe_route(&g)
    } else if mu.dimension == 1 {
        Route::Lattice { basis: g.lambda_basis.clone() }
    } else {
        match &certificate {
            Some(c) => Route::Hyperplane { normal: c.normal.clone(), c: c.c.clone() },
            None => Route::Lattice { basis: g.lambda_basis.clone() },
        }
    };
    LiouvilleVerdict {
        holds: false,
        certified,
        route,
        closure: g,
        certificate,
        counterexample,
        assumptions: basis.assertion_echo(),
        sup_q,
        notes,
    }
}

/// One-dimensional decision: an interval or an accumulation point gives
/// Liouville; otherwise it holds iff some ratio `a_n / a_1` is irrational or
/// the denominators `Q(a_1, a_n)` are unbounded.
pub fn decide_1d(mu: &LevyMeasure) -> LiouvilleVerdict {
    assert_eq!(mu.dimension, 1, "decide_1d needs a one-dimensional measure");
    let g = closure_1d(&support_of(mu), &mu.basis);
    finish(mu, g)
}

pub fn decide(mu: &LevyMeasure, config: &DecideConfig) -> LiouvilleVerdict {
    if mu.dimension == 1 {
        return decide_1d(mu);
    }
    let g = closure_multid(&support_of(mu), &mu.basis, &config.closure);
    finish(mu, g)
}
