//! Catalogue of infinite atom sequences `a_n = c · f(n) · v` with certified
//! integrability and group-theoretic behaviour.
//!
//! Three point rules are supported: `f(n) = p(n)/r(n)` for integer
//! polynomials, `f(n) = n^{-k}` and `f(n) = ρ^n`. Weights follow
//! `ω_n = w`, `ω_n = w·n^{-k}` or `ω_n = w·r^n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{rational_to_f64, ConstantBasis, ExtendedRational};
use crate::linalg;

use super::MeasureError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointRule {
    /// `p(n) / r(n)`, coefficients listed from the constant term upwards.
    PolyRatio { numerator: Vec<BigInt>, denominator: Vec<BigInt> },
    /// `n^{-power}`
    Harmonic { power: u32 },
    /// `ratio^n`
    Geometric { ratio: BigRational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightRule {
    Constant(BigRational),
    Power { scale: BigRational, exponent: u32 },
    Geometric { scale: BigRational, ratio: BigRational },
}

impl WeightRule {
    pub fn weight(&self, n: u64) -> BigRational {
        match self {
            WeightRule::Constant(w) => w.clone(),
            WeightRule::Power { scale, exponent } => {
                scale / BigRational::from_integer(num_traits::pow(BigInt::from(n), *exponent as usize))
            }
            WeightRule::Geometric { scale, ratio } => scale * num_traits::pow(ratio.clone(), n as usize),
        }
    }

    fn scale(&self) -> &BigRational {
        match self {
            WeightRule::Constant(w) => w,
            WeightRule::Power { scale, .. } | WeightRule::Geometric { scale, .. } => scale,
        }
    }

    /// Closed-form bound on `Σ_{n ≥ 1} ω_n`, when finite.
    pub fn total_mass_bound(&self) -> Option<f64> {
        let w = to_f64(self.scale());
        match self {
            WeightRule::Constant(_) => None,
            WeightRule::Power { exponent, .. } if *exponent >= 2 => Some(w * (1.0 + 1.0 / (*exponent as f64 - 1.0))),
            WeightRule::Power { .. } => None,
            WeightRule::Geometric { ratio, .. } => {
                let r = to_f64(ratio);
                (r < 1.0).then(|| w * r / (1.0 - r))
            }
        }
    }
}

/// An infinite symmetric family of atoms `±a_n` with weights `ω_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomSequence {
    pub scale: ExtendedRational,
    pub direction: Vec<BigRational>,
    pub points: PointRule,
    pub weights: WeightRule,
    pub truncation: u64,
    /// Declared accumulation point (checked against the template).
    pub accumulation: Option<Vec<ExtendedRational>>,
}

/// What the generated points do to the closed subgroup they generate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceBehaviour {
    /// The points converge; the closure contains the whole line through the direction.
    Accumulates { at: Vec<ExtendedRational> },
    /// No accumulation, but the reduced denominators of `a_n / a_1` are unbounded:
    /// after cancelling common factors, `gcd(p(n), r(n))` divides `resultant`
    /// while `|r(n)| → ∞`.
    UnboundedDenominators { resultant: BigInt },
    /// Geometric points `ρ^n` with `ρ = u/v`, `v ≥ 2`: `a_n / a_1` has denominator `v^{n-1}`.
    GeometricDenominators { base: BigInt },
    /// Every point is an integer multiple of `generator · scale · direction`, and the
    /// generator is attained as a ℤ-combination of points.
    Discrete { generator: BigRational },
}

impl SequenceBehaviour {
    pub fn is_dense_along_line(&self) -> bool {
        !matches!(self, SequenceBehaviour::Discrete { .. })
    }
}

type Poly = Vec<BigInt>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        p.push(BigInt::zero());
    }
    p
}

fn degree(p: &Poly) -> usize {
    trim(p.clone()).len() - 1
}

fn eval(p: &Poly, n: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * n + c)
}

fn content(p: &Poly) -> BigInt {
    p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

type QPoly = Vec<BigRational>;

fn qtrim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn qpoly_rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &f * c;
        }
        r.pop();
        r = qtrim(r);
    }
    r
}

fn qpoly_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut x, mut y) = (qtrim(a.clone()), qtrim(b.clone()));
    while !y.is_empty() {
        let r = qpoly_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn qpoly_div(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let mut quot = vec![BigRational::zero(); a.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / &b[db];
        for (i, c) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &f * c;
        }
        quot[shift] = f;
        r.pop();
    }
    quot
}

fn to_qpoly(p: &Poly) -> QPoly {
    qtrim(p.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

/// Integer primitive polynomial proportional to `p`.
fn primitive(p: &QPoly) -> Poly {
    let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Poly = p.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = content(&ints);
    trim(ints.into_iter().map(|c| c / &g).collect())
}

/// Cancel the polynomial gcd of `p / r` and normalise to a positive leading
/// coefficient in the denominator; returns `(p', r', k)` with `p/r = k·p'/r'`.
fn reduce_fraction(p: &Poly, r: &Poly) -> (Poly, Poly, BigRational) {
    let (qp, qr) = (to_qpoly(p), to_qpoly(r));
    let g = qpoly_gcd(&qp, &qr);
    let (np, nr) = (qpoly_div(&qp, &g), qpoly_div(&qr, &g));
    let (pp, pr) = (primitive(&np), primitive(&nr));
    // np = cp·pp and nr = cr·pr for rational cp, cr
    let cp = &np[np.len() - 1] / BigRational::from_integer(pp[pp.len() - 1].clone());
    let cr = &nr[nr.len() - 1] / BigRational::from_integer(pr[pr.len() - 1].clone());
    let mut k = cp / cr;
    let mut pr = pr;
    if pr.last().is_some_and(Signed::is_negative) {
        pr.iter_mut().for_each(|c| *c = -&*c);
        k = -k;
    }
    (pp, pr, k)
}

/// Resultant of two integer polynomials via the Sylvester determinant.
fn resultant(p: &Poly, r: &Poly) -> BigInt {
    let (m, n) = (degree(p), degree(r));
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows: linalg::QMat = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![BigRational::zero(); size];
        for (j, c) in p.iter().rev().skip_while(|c| c.is_zero()).enumerate() {
            row[i + j] = BigRational::from_integer(c.clone());
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigRational::zero(); size];
        for (j, c) in r.iter().rev().skip_while(|c| c.is_zero()).enumerate() {
            row[i + j] = BigRational::from_integer(c.clone());
        }
        rows.push(row);
    }
    determinant(rows).to_integer()
}

fn determinant(mut a: linalg::QMat) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = &det * &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            let pivot = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot) {
                *x = &*x - &f * y;
            }
        }
    }
    det
}

fn to_f64(r: &BigRational) -> f64 {
    rational_to_f64(r)
}

/// Positive integer roots of an integer polynomial, found by the rational root
/// theorem on the lowest nonzero coefficient.
fn has_positive_integer_root(p: &Poly) -> bool {
    let p = trim(p.clone());
    if p.iter().all(Zero::is_zero) {
        return true;
    }
    let low = p.iter().find(|c| !c.is_zero()).unwrap().abs();
    // any positive root n divides `low`
    let Some(low_u) = low.to_u64() else {
        // huge constant term: check the first few million candidates only
        return (1..=2_000_000u64).any(|n| eval(&p, &BigInt::from(n)).is_zero());
    };
    let mut d = 1u64;
    while d * d <= low_u {
        if low_u % d == 0 {
            for cand in [d, low_u / d] {
                if eval(&p, &BigInt::from(cand)).is_zero() {
                    return true;
                }
            }
        }
        d += 1;
    }
    false
}

impl AtomSequence {
    /// Rational factor `f(n)` of the `n`-th point.
    pub fn factor(&self, n: u64) -> BigRational {
        let nb = BigInt::from(n);
        match &self.points {
            PointRule::PolyRatio { numerator, denominator } => {
                BigRational::new(eval(numerator, &nb), eval(denominator, &nb))
            }
            PointRule::Harmonic { power } => {
                BigRational::new(BigInt::one(), num_traits::pow(nb, *power as usize))
            }
            PointRule::Geometric { ratio } => num_traits::pow(ratio.clone(), n as usize),
        }
    }

    pub fn point(&self, n: u64) -> Vec<ExtendedRational> {
        let f = self.factor(n);
        self.direction.iter().map(|c| self.scale.scale(&(c * &f))).collect()
    }

    pub fn weight(&self, n: u64) -> BigRational {
        self.weights.weight(n)
    }

    fn poly_form(&self) -> Option<(Poly, Poly)> {
        match &self.points {
            PointRule::PolyRatio { numerator, denominator } => Some((trim(numerator.clone()), trim(denominator.clone()))),
            PointRule::Harmonic { power } => {
                let mut r = vec![BigInt::zero(); *power as usize + 1];
                r[*power as usize] = BigInt::one();
                Some((vec![BigInt::one()], r))
            }
            PointRule::Geometric { .. } => None,
        }
    }

    /// Check the template invariants; `dim` is the coordinate count of the basis.
    pub fn validate(&self, d: usize, basis: &ConstantBasis) -> Result<(), MeasureError> {
        let bad = |m: String| Err(MeasureError::Template(m));
        if self.direction.len() != d {
            return bad(format!("direction has {} entries, dimension is {d}", self.direction.len()));
        }
        if self.direction.iter().all(Zero::is_zero) || self.scale.is_zero() {
            return bad("sequence points are identically zero".into());
        }
        if self.truncation == 0 {
            return bad("truncation must be positive".into());
        }
        match &self.weights {
            WeightRule::Constant(w) | WeightRule::Power { scale: w, .. } if !w.is_positive() => {
                return bad("weights must be positive".into());
            }
            WeightRule::Geometric { scale, ratio } if !scale.is_positive() || !ratio.is_positive() => {
                return bad("geometric weights need positive scale and ratio".into());
            }
            _ => {}
        }
        match &self.points {
            PointRule::Geometric { ratio } => {
                if !ratio.is_positive() || ratio.is_one() {
                    return bad("geometric point ratio must be positive and different from 1".into());
                }
            }
            _ => {
                let (p, r) = self.poly_form().unwrap();
                if has_positive_integer_root(&r) {
                    return bad("denominator polynomial vanishes at a positive integer".into());
                }
                if has_positive_integer_root(&p) {
                    return bad("a generated point is zero".into());
                }
                let (pp, pr, _) = reduce_fraction(&p, &r);
                if degree(&pp) == 0 && degree(&pr) == 0 {
                    return bad("points are constant in n".into());
                }
            }
        }
        if self.levy_bound(basis).is_none() {
            return Err(MeasureError::Divergent(
                "sum of (|a_n|^2 ∧ 1)·ω_n diverges for this template".into(),
            ));
        }
        let computed = self.behaviour();
        let actual = match &computed {
            SequenceBehaviour::Accumulates { at } => Some(at.clone()),
            _ => None,
        };
        if actual != self.accumulation {
            let show = |a: &Option<Vec<ExtendedRational>>| match a {
                None => "none".to_string(),
                Some(v) => format!("[{}]", v.iter().map(|x| x.display(basis).to_string()).collect::<Vec<_>>().join(", ")),
            };
            return bad(format!(
                "declared accumulation {} does not match the template ({})",
                show(&self.accumulation),
                show(&actual)
            ));
        }
        Ok(())
    }

    /// Certified behaviour of the subgroup generated by the sequence.
    pub fn behaviour(&self) -> SequenceBehaviour {
        let line_point = |f: &BigRational| -> Vec<ExtendedRational> {
            self.direction.iter().map(|c| self.scale.scale(&(c * f))).collect()
        };
        match &self.points {
            PointRule::Geometric { ratio } => {
                if ratio < &BigRational::one() {
                    SequenceBehaviour::Accumulates { at: line_point(&BigRational::zero()) }
                } else if ratio.denom() > &BigInt::one() {
                    SequenceBehaviour::GeometricDenominators { base: ratio.denom().clone() }
                } else {
                    // u^n, n ≥ 1: every point is a multiple of u, and u itself is a point
                    SequenceBehaviour::Discrete { generator: ratio.clone() }
                }
            }
            _ => {
                let (p, r) = self.poly_form().unwrap();
                let (pp, pr, k) = reduce_fraction(&p, &r);
                let (dp, dr) = (degree(&pp), degree(&pr));
                if dp < dr {
                    SequenceBehaviour::Accumulates { at: line_point(&BigRational::zero()) }
                } else if dp == dr {
                    let lim = &k * BigRational::new(pp[dp].clone(), pr[dr].clone());
                    SequenceBehaviour::Accumulates { at: line_point(&lim) }
                } else if dr >= 1 {
                    SequenceBehaviour::UnboundedDenominators { resultant: resultant(&pp, &pr) }
                } else {
                    // f(n) = k·pp(n)/c with constant c: the values' gcd is the gcd of
                    // pp(1), …, pp(deg+1), since those determine all finite differences.
                    let g = (1..=(dp as u64 + 1))
                        .map(|n| eval(&pp, &BigInt::from(n)))
                        .fold(BigInt::zero(), |acc, v| acc.gcd(&v));
                    let c = BigRational::from_integer(pr[0].clone());
                    SequenceBehaviour::Discrete { generator: (&k * BigRational::from_integer(g) / c).abs() }
                }
            }
        }
    }

    fn point_norm_f64(&self, basis: &ConstantBasis) -> f64 {
        let s = self.scale.to_f64(basis).abs();
        let v: f64 = self.direction.iter().map(|c| to_f64(c).powi(2)).sum::<f64>().sqrt();
        s * v * (1.0 + 1e-12)
    }

    /// Exact-ish partial sum of `(|a_n|^2 ∧ 1)·ω_n` for `n ≤ upto`.
    pub fn levy_partial_sum(&self, basis: &ConstantBasis, upto: u64) -> f64 {
        let s = self.point_norm_f64(basis);
        (1..=upto)
            .map(|n| {
                let a = s * to_f64(&self.factor(n)).abs();
                (a * a).min(1.0) * to_f64(&self.weight(n))
            })
            .sum()
    }

    /// Closed-form upper bound on `Σ_{n ≥ 1} (|a_n|^2 ∧ 1)·ω_n`; `None` when it diverges.
    pub fn levy_bound(&self, basis: &ConstantBasis) -> Option<f64> {
        let s = self.point_norm_f64(basis);
        let w = to_f64(self.weights.scale());
        // envelope |f(n)| ≤ c·n^{-decay} for n ≥ n1, or geometric ρ^n
        enum Env {
            Power { c: f64, decay: i64, n1: u64 },
            Geo { rho: f64 },
        }
        let env = match &self.points {
            PointRule::Geometric { ratio } => Env::Geo { rho: to_f64(ratio) },
            _ => {
                let (p, r) = self.poly_form().unwrap();
                let lead = to_f64(&BigRational::from_integer(r[degree(&r)].clone())).abs();
                let lower: f64 = r[..degree(&r)].iter().map(|c| to_f64(&BigRational::from_integer(c.clone())).abs()).sum();
                let upper: f64 = p.iter().map(|c| to_f64(&BigRational::from_integer(c.clone())).abs()).sum();
                Env::Power {
                    c: 2.0 * upper / lead,
                    decay: degree(&r) as i64 - degree(&p) as i64,
                    n1: ((2.0 * lower / lead).ceil() as u64).max(1),
                }
            }
        };
        let n0 = match env {
            Env::Power { n1, .. } => n1.max(64),
            Env::Geo { .. } => 64,
        };
        let head = self.levy_partial_sum(basis, n0 - 1);
        let n0f = n0 as f64;
        let zeta_tail = |t: f64| -> Option<f64> { (t > 1.0).then(|| n0f.powf(-t) + n0f.powf(1.0 - t) / (t - 1.0)) };
        let tail = match (env, &self.weights) {
            (Env::Power { c, decay, .. }, weights) => {
                let amp = if decay > 0 { (s * c).powi(2) } else { 1.0 };
                let t_pts = if decay > 0 { 2.0 * decay as f64 } else { 0.0 };
                match weights {
                    WeightRule::Constant(_) => zeta_tail(t_pts).map(|z| amp * w * z),
                    WeightRule::Power { exponent, .. } => zeta_tail(t_pts + *exponent as f64).map(|z| amp * w * z),
                    WeightRule::Geometric { ratio, .. } => {
                        let r = to_f64(ratio);
                        (r < 1.0).then(|| amp * w * r.powf(n0f) / (1.0 - r))
                    }
                }
            }
            (Env::Geo { rho }, weights) if rho < 1.0 => {
                let amp = s * s;
                match weights {
                    WeightRule::Constant(_) | WeightRule::Power { .. } => {
                        Some(amp * w * rho.powf(2.0 * n0f) / (1.0 - rho * rho))
                    }
                    WeightRule::Geometric { ratio, .. } => {
                        let q = rho * rho * to_f64(ratio);
                        (q < 1.0).then(|| amp * w * q.powf(n0f) / (1.0 - q))
                    }
                }
            }
            (Env::Geo { .. }, weights) => match weights {
                WeightRule::Constant(_) => None,
                WeightRule::Power { exponent, .. } => zeta_tail(*exponent as f64).map(|z| w * z),
                WeightRule::Geometric { ratio, .. } => {
                    let r = to_f64(ratio);
                    (r < 1.0).then(|| w * r.powf(n0f) / (1.0 - r))
                }
            },
        }?;
        Some(head + tail)
    }
}
