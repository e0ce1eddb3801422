//! The TOML measure-spec format.
//!
//! ```toml
//! dimension = 1
//! symmetry_mode = "complete"
//!
//! [[constants]]
//! name = "pi"            # built-in; other names need `value = "<50+ digits>"`
//!
//! [[atoms]]
//! point = ["1"]
//! weight = "1/2"
//!
//! [[atoms]]
//! point = ["pi"]
//! weight = "0.0506605918211688857219397316048638194521793"
//!
//! [[sequences]]
//! template = "poly_ratio"   # poly_ratio | harmonic | geometric
//! numerator = [1, 0, 1]     # lowest degree first: n^2 + 1
//! denominator = [0, 1]      # n
//! weight = { rule = "power", scale = "1", exponent = 2 }
//! truncation = 1000
//!
//! [[continuous]]
//! kind = "fractional"
//! alpha = 1.0
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exact::{known_constant, parse_decimal, parse_expr, ConstantBasis, ExactError, ExtendedRational};

use super::{
    AffineProfile, Atom, AtomSequence, ContinuousPart, LevyMeasure, MeasureError, PointRule, RadialKernel, SymmetryMode,
    WeightRule,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDocument {
    pub dimension: usize,
    #[serde(default = "yes")]
    pub independence_asserted: bool,
    #[serde(default)]
    pub symmetry_mode: SymmetryMode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constants: Vec<ConstantDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<AtomDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sequences: Vec<SequenceDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub continuous: Vec<ContinuousDoc>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    pub point: Vec<String>,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightDoc {
    Constant { value: String },
    Power { scale: String, exponent: u32 },
    Geometric { scale: String, ratio: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDoc {
    pub template: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerator: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<String>,
    pub weight: WeightDoc,
    #[serde(default = "default_truncation")]
    pub truncation: u64,
    #[serde(default)]
    pub accumulation: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accumulation_point: Option<Vec<String>>,
}

fn default_truncation() -> u64 {
    1000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ContinuousDoc {
    Fractional {
        alpha: f64,
    },
    Relativistic {
        alpha: f64,
        mass: f64,
    },
    Convolution {
        kernel: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
        #[serde(default = "one")]
        mass: f64,
    },
    SurfaceSphere {
        radius: f64,
        #[serde(default = "one")]
        mass: f64,
    },
    Affine {
        basis: Vec<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<Vec<String>>,
        profile: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass: Option<f64>,
    },
    CantorStub {},
}

fn one() -> f64 {
    1.0
}

/// Exact rational from `"3/2"`, `"-7"` or a decimal literal such as `"0.125"`.
pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let rational_basis = ConstantBasis::rational();
    if let Ok(x) = parse_expr(s, &rational_basis) {
        return Ok(x.as_rational().cloned().expect("rational basis"));
    }
    parse_decimal(s)
        .map(|(v, _)| v)
        .ok_or_else(|| ExactError::Parse { input: s.to_string(), reason: "expected a rational or decimal literal".into() })
}

fn field<T>(name: impl Into<String>, r: Result<T, ExactError>) -> Result<T, MeasureError> {
    r.map_err(|source| MeasureError::Field { field: name.into(), source })
}

fn point(name: &str, coords: &[String], basis: &ConstantBasis) -> Result<Vec<ExtendedRational>, MeasureError> {
    coords.iter().enumerate().map(|(i, c)| field(format!("{name}[{i}]"), parse_expr(c, basis))).collect()
}

fn rational_vec(name: &str, coords: &[String]) -> Result<Vec<BigRational>, MeasureError> {
    coords.iter().enumerate().map(|(i, c)| field(format!("{name}[{i}]"), parse_rational(c))).collect()
}

/// Parse and validate a measure-spec document.
pub fn parse_measure(text: &str) -> Result<LevyMeasure, MeasureError> {
    parse_document(text)?.into_measure()
}

/// Schema-level parse only; nothing is validated beyond field types.
pub fn parse_document(text: &str) -> Result<MeasureDocument, MeasureError> {
    toml::from_str(text).map_err(|e| MeasureError::Schema(e.to_string()))
}

impl MeasureDocument {
    pub fn into_measure(self) -> Result<LevyMeasure, MeasureError> {
        let d = self.dimension;
        let pairs = self
            .constants
            .iter()
            .map(|c| {
                let value = c.value.clone().or_else(|| known_constant(&c.name).map(str::to_string)).ok_or_else(|| {
                    MeasureError::Schema(format!("constant `{}` needs a decimal `value` (not a built-in)", c.name))
                })?;
                Ok((c.name.clone(), value))
            })
            .collect::<Result<Vec<_>, MeasureError>>()?;
        let basis = field("constants", ConstantBasis::new(pairs, self.independence_asserted))?;
        let dim = basis.dim();

        let mut atoms = Vec::new();
        for (i, a) in self.atoms.iter().enumerate() {
            let p = point(&format!("atoms[{i}].point"), &a.point, &basis)?;
            if p.len() != d {
                return Err(MeasureError::Dimension(format!("atoms[{i}].point has {} coordinates, dimension is {d}", p.len())));
            }
            let weight = field(format!("atoms[{i}].weight"), parse_rational(&a.weight))?;
            atoms.push(Atom { point: p, weight });
        }

        let mut sequences = Vec::new();
        for (i, s) in self.sequences.iter().enumerate() {
            let ctx = format!("sequences[{i}]");
            let missing = |f: &str| MeasureError::Schema(format!("{ctx}: template `{}` needs `{f}`", s.template));
            let ints = |v: &[i64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
            let points = match s.template.as_str() {
                "poly_ratio" => PointRule::PolyRatio {
                    numerator: ints(s.numerator.as_deref().ok_or_else(|| missing("numerator"))?),
                    denominator: ints(s.denominator.as_deref().ok_or_else(|| missing("denominator"))?),
                },
                "harmonic" => PointRule::Harmonic { power: s.power.ok_or_else(|| missing("power"))? },
                "geometric" => PointRule::Geometric {
                    ratio: field(format!("{ctx}.ratio"), parse_rational(s.ratio.as_deref().ok_or_else(|| missing("ratio"))?))?,
                },
                other => {
                    return Err(MeasureError::Schema(format!(
                        "{ctx}: unknown template `{other}` (expected poly_ratio, harmonic or geometric)"
                    )))
                }
            };
            let weights = match &s.weight {
                WeightDoc::Constant { value } => WeightRule::Constant(field(format!("{ctx}.weight.value"), parse_rational(value))?),
                WeightDoc::Power { scale, exponent } => WeightRule::Power {
                    scale: field(format!("{ctx}.weight.scale"), parse_rational(scale))?,
                    exponent: *exponent,
                },
                WeightDoc::Geometric { scale, ratio } => WeightRule::Geometric {
                    scale: field(format!("{ctx}.weight.scale"), parse_rational(scale))?,
                    ratio: field(format!("{ctx}.weight.ratio"), parse_rational(ratio))?,
                },
            };
            let scale = match &s.scale {
                Some(x) => field(format!("{ctx}.scale"), parse_expr(x, &basis))?,
                None => ExtendedRational::from_integer(1, dim),
            };
            let direction = match &s.direction {
                Some(v) => rational_vec(&format!("{ctx}.direction"), v)?,
                None if d == 1 => vec![BigRational::from_integer(1.into())],
                None => return Err(missing("direction")),
            };
            let accumulation = match (s.accumulation, &s.accumulation_point) {
                (false, None) => None,
                (false, Some(_)) => {
                    return Err(MeasureError::Schema(format!("{ctx}: accumulation_point given but accumulation = false")))
                }
                (true, Some(p)) => Some(point(&format!("{ctx}.accumulation_point"), p, &basis)?),
                (true, None) => Some(vec![ExtendedRational::zero(dim); d]),
            };
            let seq = AtomSequence { scale, direction, points, weights, truncation: s.truncation, accumulation };
            seq.validate(d, &basis).map_err(|e| prefix(&ctx, e))?;
            sequences.push(seq);
        }

        let mut continuous = Vec::new();
        for (i, c) in self.continuous.iter().enumerate() {
            let ctx = format!("continuous[{i}]");
            let part = match c {
                ContinuousDoc::Fractional { alpha } => ContinuousPart::Fractional { alpha: *alpha },
                ContinuousDoc::Relativistic { alpha, mass } => ContinuousPart::Relativistic { alpha: *alpha, mass: *mass },
                ContinuousDoc::Convolution { kernel, sigma, radius, mass } => {
                    let kernel = match (kernel.as_str(), sigma, radius) {
                        ("gaussian", Some(s), None) => RadialKernel::Gaussian { sigma: *s, mass: *mass },
                        ("uniform_ball", None, Some(r)) => RadialKernel::UniformBall { radius: *r, mass: *mass },
                        _ => {
                            return Err(MeasureError::Schema(format!(
                                "{ctx}: convolution kernel must be `gaussian` with `sigma` or `uniform_ball` with `radius`"
                            )))
                        }
                    };
                    ContinuousPart::Convolution { kernel }
                }
                ContinuousDoc::SurfaceSphere { radius, mass } => ContinuousPart::SurfaceSphere { radius: *radius, mass: *mass },
                ContinuousDoc::Affine { basis: dirs, offset, profile, alpha, sigma, mass } => {
                    let dirs = dirs
                        .iter()
                        .enumerate()
                        .map(|(j, v)| rational_vec(&format!("{ctx}.basis[{j}]"), v))
                        .collect::<Result<Vec<_>, _>>()?;
                    let offset = match offset {
                        Some(o) => point(&format!("{ctx}.offset"), o, &basis)?,
                        None => vec![ExtendedRational::zero(dim); d],
                    };
                    let profile = match (profile.as_str(), alpha, sigma) {
                        ("fractional", Some(a), None) if mass.is_none() => AffineProfile::Fractional { alpha: *a },
                        ("gaussian", None, Some(s)) => AffineProfile::Gaussian { sigma: *s, mass: mass.unwrap_or(1.0) },
                        _ => {
                            return Err(MeasureError::Schema(format!(
                                "{ctx}: affine profile must be `fractional` with `alpha` or `gaussian` with `sigma` (and optional `mass`)"
                            )))
                        }
                    };
                    ContinuousPart::AffineSupported { basis: dirs, offset, profile }
                }
                ContinuousDoc::CantorStub {} => ContinuousPart::CantorStub,
            };
            continuous.push(part);
        }

        LevyMeasure::new(d, basis, self.symmetry_mode, atoms, sequences, continuous)
    }
}

fn prefix(ctx: &str, e: MeasureError) -> MeasureError {
    match e {
        MeasureError::Template(m) => MeasureError::Template(format!("{ctx}: {m}")),
        MeasureError::Divergent(m) => MeasureError::Divergent(format!("{ctx}: {m}")),
        other => other,
    }
}

fn rat_string(r: &BigRational) -> String {
    r.to_string()
}

impl LevyMeasure {
    /// Canonical document for this measure; mirrors are listed explicitly.
    pub fn to_document(&self) -> MeasureDocument {
        let b = &self.basis;
        let show = |p: &[ExtendedRational]| p.iter().map(|x| x.display(b).to_string()).collect::<Vec<_>>();
        let ints = |v: &[BigInt]| v.iter().map(|c| c.to_i64().expect("coefficients originate from i64")).collect::<Vec<_>>();
        let constants = b
            .names()
            .iter()
            .zip(b.decimals())
            .map(|(n, v)| ConstantDoc {
                name: n.clone(),
                value: if known_constant(n) == Some(v.as_str()) { None } else { Some(v.clone()) },
            })
            .collect();
        let atoms = self.atoms.iter().map(|a| AtomDoc { point: show(&a.point), weight: rat_string(&a.weight) }).collect();
        let sequences = self
            .sequences
            .iter()
            .map(|s| {
                let mut doc = SequenceDoc {
                    template: String::new(),
                    scale: Some(s.scale.display(b).to_string()),
                    direction: Some(s.direction.iter().map(rat_string).collect()),
                    numerator: None,
                    denominator: None,
                    power: None,
                    ratio: None,
                    weight: match &s.weights {
                        WeightRule::Constant(w) => WeightDoc::Constant { value: rat_string(w) },
                        WeightRule::Power { scale, exponent } => WeightDoc::Power { scale: rat_string(scale), exponent: *exponent },
                        WeightRule::Geometric { scale, ratio } => {
                            WeightDoc::Geometric { scale: rat_string(scale), ratio: rat_string(ratio) }
                        }
                    },
                    truncation: s.truncation,
                    accumulation: s.accumulation.is_some(),
                    accumulation_point: s.accumulation.as_ref().map(|p| show(p)),
                };
                match &s.points {
                    PointRule::PolyRatio { numerator, denominator } => {
                        doc.template = "poly_ratio".into();
                        doc.numerator = Some(ints(numerator));
                        doc.denominator = Some(ints(denominator));
                    }
                    PointRule::Harmonic { power } => {
                        doc.template = "harmonic".into();
                        doc.power = Some(*power);
                    }
                    PointRule::Geometric { ratio } => {
                        doc.template = "geometric".into();
                        doc.ratio = Some(rat_string(ratio));
                    }
                }
                doc
            })
            .collect();
        let continuous = self
            .continuous
            .iter()
            .map(|c| match c {
                ContinuousPart::Fractional { alpha } => ContinuousDoc::Fractional { alpha: *alpha },
                ContinuousPart::Relativistic { alpha, mass } => ContinuousDoc::Relativistic { alpha: *alpha, mass: *mass },
                ContinuousPart::Convolution { kernel: RadialKernel::Gaussian { sigma, mass } } => {
                    ContinuousDoc::Convolution { kernel: "gaussian".into(), sigma: Some(*sigma), radius: None, mass: *mass }
                }
                ContinuousPart::Convolution { kernel: RadialKernel::UniformBall { radius, mass } } => {
                    ContinuousDoc::Convolution { kernel: "uniform_ball".into(), sigma: None, radius: Some(*radius), mass: *mass }
                }
                ContinuousPart::SurfaceSphere { radius, mass } => ContinuousDoc::SurfaceSphere { radius: *radius, mass: *mass },
                ContinuousPart::AffineSupported { basis: dirs, offset, profile } => {
                    let (profile, alpha, sigma, mass) = match profile {
                        AffineProfile::Fractional { alpha } => ("fractional", Some(*alpha), None, None),
                        AffineProfile::Gaussian { sigma, mass } => ("gaussian", None, Some(*sigma), Some(*mass)),
                    };
                    ContinuousDoc::Affine {
                        basis: dirs.iter().map(|v| v.iter().map(rat_string).collect()).collect(),
                        offset: Some(show(offset)),
                        profile: profile.into(),
                        alpha,
                        sigma,
                        mass,
                    }
                }
                ContinuousPart::CantorStub => ContinuousDoc::CantorStub {},
            })
            .collect();
        MeasureDocument {
            dimension: self.dimension,
            independence_asserted: b.independence_asserted(),
            symmetry_mode: self.symmetry_mode,
            constants,
            atoms,
            sequences,
            continuous,
        }
    }

    /// Serialize to the measure-spec TOML format.
    pub fn to_spec_string(&self) -> String {
        toml::to_string(&self.to_document()).expect("measure documents always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{lebesgue_split, support_of};

    const NS: &str = r#"
dimension = 1

[[constants]]
name = "pi"

[[atoms]]
point = ["1"]
weight = "1/2"

[[atoms]]
point = ["-1"]
weight = "1/2"

[[atoms]]
point = ["pi"]
weight = "0.0506605918211688857219397316048638194521793"
"#;

    #[test]
    fn nonstandard_discretization() {
        let m = parse_measure(NS).unwrap();
        assert_eq!(m.atoms.len(), 4);
        assert_eq!(m.basis.dim(), 2);
        let again = parse_measure(&m.to_spec_string()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn field_context_in_errors() {
        let e = parse_measure("dimension = 1\n[[atoms]]\npoint = [\"tau\"]\nweight = \"1\"\n").unwrap_err();
        assert!(e.to_string().contains("atoms[0].point[0]"), "{e}");
        let e = parse_measure("dimension = 1\n[[atoms]]\npoint = [\"0\"]\nweight = \"1\"\n").unwrap_err();
        assert!(matches!(e, MeasureError::ZeroAtom(_)));
        let e = parse_measure("dimension = 1\nbogus = 3\n").unwrap_err();
        assert!(matches!(e, MeasureError::Schema(_)));
        let e = parse_measure("dimension = 1\n[[atoms]]\npoint = [\"1.5\"]\nweight = \"1\"\n").unwrap_err();
        assert!(e.to_string().contains("floating"), "{e}");
    }

    #[test]
    fn harmonic_sequence_support() {
        let text = r#"
dimension = 1
[[sequences]]
template = "harmonic"
power = 1
weight = { rule = "constant", value = "1" }
truncation = 100
accumulation = true
accumulation_point = ["0"]
"#;
        let m = parse_measure(text).unwrap();
        let s = support_of(&m);
        assert!(s.has_accumulation_point);
        assert_eq!(s.accumulation_points, vec![vec![ExtendedRational::zero(1)]]);
        assert_eq!(s.finite_points.len(), 200);
        assert_eq!(parse_measure(&m.to_spec_string()).unwrap(), m);
    }

    #[test]
    fn continuous_kinds_round_trip() {
        let text = r#"
dimension = 3
[[continuous]]
kind = "affine"
basis = [["1", "0", "0"], ["0", "1", "0"]]
profile = "fractional"
alpha = 1.0

[[continuous]]
kind = "surface_sphere"
radius = 1.0

[[continuous]]
kind = "convolution"
kernel = "gaussian"
sigma = 0.5

[[continuous]]
kind = "affine"
basis = [["1", "0", "0"]]
offset = ["0", "0", "1/2"]
profile = "gaussian"
sigma = 0.25
"#;
        let m = parse_measure(text).unwrap();
        // the mirrored offset piece is inserted
        assert_eq!(m.continuous.len(), 5);
        assert_eq!(parse_measure(&m.to_spec_string()).unwrap(), m);
        assert_eq!(lebesgue_split(&m).presence(), (true, true, false));
        let s = support_of(&m);
        assert!(s.contains_interval_or_ball && s.contains_sphere);
        assert_eq!(s.affine_pieces.len(), 3);
    }

    #[test]
    fn split_examples() {
        let frac = parse_measure("dimension = 1\n[[atoms]]\npoint=[\"1\"]\nweight=\"1\"\n[[continuous]]\nkind=\"fractional\"\nalpha=1.5\n").unwrap();
        assert_eq!(lebesgue_split(&frac).presence(), (true, false, true));
        assert!(support_of(&frac).contains_interval_or_ball);
        let empty = parse_measure("dimension = 2\n").unwrap();
        assert_eq!(lebesgue_split(&empty).presence(), (false, false, false));
        assert!(support_of(&empty).is_empty());
        let sphere = parse_measure("dimension = 2\n[[continuous]]\nkind=\"surface_sphere\"\nradius=1.0\n").unwrap();
        assert_eq!(lebesgue_split(&sphere).presence(), (false, true, false));
    }

    #[test]
    fn duplicate_atoms_deduplicated() {
        let text = "dimension = 1\n[[atoms]]\npoint=[\"1\"]\nweight=\"1\"\n[[atoms]]\npoint=[\"1\"]\nweight=\"1\"\n[[atoms]]\npoint=[\"-1\"]\nweight=\"2\"\n";
        let s = support_of(&parse_measure(text).unwrap());
        assert_eq!(s.finite_points.len(), 2);
    }
}
