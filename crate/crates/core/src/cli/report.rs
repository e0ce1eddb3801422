//! Serializable reports. Field order is fixed by declaration order; floats
//! are strings with 17 significant digits so reruns diff cleanly.

use serde::{Deserialize, Serialize};

use crate::closure::{ClosedSubgroup, Decomposition, HyperplaneCertificate, Provenance};
use crate::counterexample::{Counterexample, CounterexampleKind};
use crate::decider::{LiouvilleVerdict, Route};
use crate::exact::{ConstantBasis, ExtendedRational};
use crate::numerics::{Evaluation, ProbeReport};

/// Relative accuracy of floats derived from exact values.
pub const F64_TOLERANCE: f64 = 4.0 * f64::EPSILON;

pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn exact(x: &ExtendedRational, basis: &ConstantBasis) -> String {
    x.display(basis).to_string()
}

fn point(p: &[ExtendedRational], basis: &ConstantBasis) -> Vec<String> {
    p.iter().map(|x| exact(x, basis)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// sha256 over command, canonical flags and the spec text.
    pub input_digest: String,
    /// Not covered by the digest; strip before comparing runs.
    pub timestamp: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteReport {
    pub name: String,
    pub details: Vec<String>,
}

impl RouteReport {
    pub fn new(route: &Route, basis: &ConstantBasis) -> Self {
        let details = match route {
            Route::Accumulation { at } => vec![format!("accumulation at {}", point(at, basis).join(", "))],
            Route::IntervalOrBall { part } => vec![format!("continuous part: {part}")],
            Route::IrrationalPair { a, b } => vec![
                format!("a = {}", exact(a, basis)),
                format!("b = {}", exact(b, basis)),
                "a / b is irrational".into(),
            ],
            Route::UnboundedQSequence { sequence, detail, witnesses } => {
                let mut v = vec![format!("sequence {sequence}"), detail.clone()];
                v.extend(witnesses.iter().map(|(n, q)| format!("Q(a_1, a_{n}) = {q}")));
                v
            }
            Route::Kronecker => vec!["no nonzero integer relation modulo Z".into()],
            Route::Lattice { basis: b } => b.iter().map(|p| format!("generator ({})", point(p, basis).join(", "))).collect(),
            Route::Hyperplane { normal, c } => vec![
                format!("normal = ({})", normal.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
                format!("c = ({})", point(c, basis).join(", ")),
            ],
            Route::Probe { verdict, score } => vec![format!("probe verdict {verdict}"), format!("score {}", num(*score))],
        };
        RouteReport { name: route.name().into(), details }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub dimension: usize,
    pub description: String,
    pub dense: bool,
    pub v_basis: Vec<Vec<String>>,
    pub lambda_basis: Vec<Vec<String>>,
    pub orthogonal: bool,
    /// `exact` or `numerical_probe`.
    pub provenance: String,
    pub route: String,
    pub inconclusive: bool,
}

impl ClosureReport {
    pub fn new(g: &ClosedSubgroup, basis: &ConstantBasis) -> Self {
        ClosureReport {
            dimension: g.dimension,
            description: g.describe(basis),
            dense: g.is_dense(),
            v_basis: g.v_basis.iter().map(|p| point(p, basis)).collect(),
            lambda_basis: g.lambda_basis.iter().map(|p| point(p, basis)).collect(),
            orthogonal: g.orthogonal,
            provenance: match g.provenance {
                Provenance::Exact => "exact".into(),
                Provenance::NumericalProbe => "numerical_probe".into(),
            },
            route: g.route.name().into(),
            inconclusive: g.inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub statement: String,
    pub normal: Vec<String>,
    pub c: Vec<String>,
    /// `⟨n, c⟩`; support points satisfy `⟨n, x⟩ ∈ spacing · Z` exactly.
    pub spacing: String,
    pub h_basis: Vec<Vec<String>>,
}

impl CertificateReport {
    pub fn new(cert: &HyperplaneCertificate, basis: &ConstantBasis) -> Self {
        CertificateReport {
            statement: "supp(mu) is contained in H + cZ, H = {x : <n, x> = 0}, c not in H".into(),
            normal: cert.normal.iter().map(|x| x.to_string()).collect(),
            c: point(&cert.c, basis),
            spacing: exact(&cert.spacing, basis),
            h_basis: cert.h_basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub kind: String,
    pub closed_form: String,
    pub bound: String,
}

impl CounterexampleReport {
    pub fn new(u: &Counterexample) -> Self {
        let kind = match u.kind {
            CounterexampleKind::Cosine1d { .. } => "cosine_1d",
            CounterexampleKind::CosineCoset { .. } => "cosine_coset",
        };
        CounterexampleReport { kind: kind.into(), closed_form: u.closed_form(), bound: "|U| <= 1".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeDiagnostics {
    pub verdict: String,
    pub radius: String,
    pub grid_step: String,
    /// Each `δ_n` is a grid estimate, accurate to `delta_tolerance`.
    pub delta_tolerance: String,
    pub capped: bool,
    pub history: Vec<String>,
    pub sizes: Vec<usize>,
}

impl ProbeDiagnostics {
    pub fn new(r: &ProbeReport, d: usize) -> Self {
        ProbeDiagnostics {
            verdict: r.verdict.name().into(),
            radius: num(r.radius),
            grid_step: num(r.grid_step),
            delta_tolerance: num(r.grid_step * (d as f64).sqrt() / 2.0),
            capped: r.capped,
            history: r.history.iter().map(|x| num(*x)).collect(),
            sizes: r.sizes.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_q: Option<String>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeDiagnostics>,
}

fn diagnostics(g: &ClosedSubgroup, sup_q: Option<String>, notes: Vec<String>) -> Diagnostics {
    Diagnostics { sup_q, notes, probe: g.probe.as_ref().map(|r| ProbeDiagnostics::new(r, g.dimension)) }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub header: Header,
    /// `holds`, `fails` or `uncertified`.
    pub verdict: String,
    pub holds: bool,
    pub certified: bool,
    pub route: RouteReport,
    pub assumptions: String,
    pub closure: ClosureReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
    pub diagnostics: Diagnostics,
}

impl VerdictReport {
    pub fn new(header: Header, v: &LiouvilleVerdict, basis: &ConstantBasis) -> Self {
        VerdictReport {
            header,
            verdict: v.status().into(),
            holds: v.holds,
            certified: v.certified,
            route: RouteReport::new(&v.route, basis),
            assumptions: v.assumptions.clone(),
            closure: ClosureReport::new(&v.closure, basis),
            certificate: v.certificate.as_ref().map(|c| CertificateReport::new(c, basis)),
            counterexample: v.counterexample.as_ref().map(CounterexampleReport::new),
            diagnostics: diagnostics(&v.closure, v.sup_q.as_ref().map(|q| q.to_string()), v.notes.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureCommandReport {
    pub header: Header,
    pub assumptions: String,
    pub closure: ClosureReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    pub diagnostics: Diagnostics,
}

impl ClosureCommandReport {
    pub fn new(header: Header, g: &ClosedSubgroup, cert: Option<&HyperplaneCertificate>, basis: &ConstantBasis, notes: Vec<String>) -> Self {
        ClosureCommandReport {
            header,
            assumptions: basis.assertion_echo(),
            closure: ClosureReport::new(g, basis),
            certificate: cert.map(|c| CertificateReport::new(c, basis)),
            diagnostics: diagnostics(g, None, notes),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomReport {
    pub point: Vec<String>,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartReport {
    /// `a` in lattice coordinates.
    pub index: Vec<String>,
    pub offset: Vec<String>,
    /// Exact mass of the listed atoms.
    pub mass: String,
    pub continuous: Vec<String>,
    pub atoms: Vec<AtomReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub header: Header,
    pub closure: ClosureReport,
    pub symmetric: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation_tolerance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub off_zero_mass: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub off_zero_mass_tolerance: Option<String>,
    pub parts: Vec<PartReport>,
    pub notes: Vec<String>,
}

impl DecomposeReport {
    pub fn new(header: Header, dec: &Decomposition, basis: &ConstantBasis) -> Self {
        let parts = dec
            .parts
            .values()
            .map(|p| PartReport {
                index: p.index.iter().map(|i| i.to_string()).collect(),
                offset: point(&p.offset, basis),
                mass: p.mass.to_string(),
                continuous: p.continuous.clone(),
                atoms: p.atoms.iter().map(|a| AtomReport { point: point(&a.point, basis), weight: a.weight.to_string() }).collect(),
            })
            .collect();
        let finite = |x: f64| x.is_finite().then(|| num(x));
        DecomposeReport {
            header,
            closure: ClosureReport::new(&dec.closure, basis),
            symmetric: dec.is_symmetric(),
            separation: finite(dec.separation),
            separation_tolerance: finite(dec.separation * F64_TOLERANCE),
            off_zero_mass: finite(dec.off_zero_mass),
            off_zero_mass_tolerance: finite(dec.off_zero_mass * F64_TOLERANCE),
            parts,
            notes: Vec::new(),
        }
    }

    pub fn dense(header: Header, g: &ClosedSubgroup, basis: &ConstantBasis) -> Self {
        DecomposeReport {
            header,
            closure: ClosureReport::new(g, basis),
            symmetric: true,
            separation: None,
            separation_tolerance: None,
            off_zero_mass: None,
            off_zero_mass_tolerance: None,
            parts: Vec::new(),
            notes: vec!["the closure is dense: there is a single coset and nothing to split".into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleCommandReport {
    pub header: Header,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
    pub samples: usize,
    /// Largest `|L U|` over the samples, with the largest error bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_abs_value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_bound: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub x: Vec<String>,
    pub value: String,
    pub bound: String,
    /// `value − reference`.
    pub residual: String,
}

impl EvaluationReport {
    pub fn new(x: &[f64], e: &Evaluation, reference: f64) -> Self {
        EvaluationReport {
            x: x.iter().map(|v| num(*v)).collect(),
            value: num(e.value),
            bound: num(e.bound),
            residual: num(e.value - reference),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub header: Header,
    pub function: String,
    pub r0: String,
    pub quad_nodes: usize,
    pub seed: u64,
    pub sample_radius: String,
    pub points: usize,
    pub max_abs_value: String,
    /// Largest reported error bound; the exact value lies within `value ± bound`.
    pub max_bound: String,
    /// What each value is compared with: `fourier_symbol` (`ψ(ξ) u(x)` for plane waves) or `zero`.
    pub reference: String,
    pub max_abs_residual: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
    pub within_tolerance: bool,
    pub evaluations: Vec<EvaluationReport>,
}
