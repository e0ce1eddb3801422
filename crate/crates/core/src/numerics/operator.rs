//! Quadrature evaluation of
//! `L^μ[u](x) = ∫ (u(x+z) − u(x) − z·∇u(x) 1_{|z|<r0}) μ(dz)`
//! with a reported error bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::{rational_to_f64, ConstantBasis, ExtendedRational};
use crate::measure::{AffineProfile, Atom, ContinuousPart, LevyMeasure, RadialKernel};

use super::functions::{dot, TestFunction};
use super::quadrature::{gauss_legendre, map_rule, sphere_rule};
use super::special::*;
use super::NumericsError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatorConfig {
    /// Compensation radius; the value does not depend on it.
    pub r0: f64,
    /// Gauss–Legendre nodes per radial panel (the error estimate uses `quad_nodes + 4`).
    pub quad_nodes: usize,
    pub panels_per_decade: usize,
    pub max_panel_width: f64,
    /// Outer truncation radius; chosen from `tail_tolerance` when absent.
    pub r_max: Option<f64>,
    pub tail_tolerance: f64,
    pub angular_min: usize,
    /// Fail when the total bound exceeds this.
    pub tolerance: Option<f64>,
}

impl Default for EvaluatorConfig {
    fn default() -> Self {
        EvaluatorConfig {
            r0: 1.0,
            quad_nodes: 8,
            panels_per_decade: 64,
            max_panel_width: 0.5,
            r_max: None,
            tail_tolerance: 1e-5,
            angular_min: 32,
            tolerance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentEvaluation {
    pub name: String,
    pub value: f64,
    pub bound: f64,
}

/// `value` approximates `L^μ[u](x)`; `|L^μ[u](x) − value| ≤ bound` up to the
/// reliability of the quadrature error estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: f64,
    pub bound: f64,
    pub components: Vec<ComponentEvaluation>,
}

/// Largest default truncation radius per intrinsic dimension.
fn r_cap(k: usize) -> f64 {
    match k {
        1 => 1e5,
        2 => 64.0,
        _ => 16.0,
    }
}

#[derive(Debug, Clone, Copy)]
enum Kernel {
    Fractional { alpha: f64, c: f64 },
    Relativistic { alpha: f64, m: f64, c: f64, nu: f64 },
    Gaussian { sigma: f64, norm: f64 },
    Uniform { radius: f64, density: f64 },
}

impl Kernel {
    /// Radial density `ρ(r)` in intrinsic dimension `k`.
    fn density(&self, r: f64, k: usize) -> f64 {
        match *self {
            Kernel::Fractional { alpha, c } => c * r.powf(-(k as f64) - alpha),
            Kernel::Relativistic { m, c, nu, .. } => c * r.powf(-nu) * bessel_k(nu, m * r),
            Kernel::Gaussian { sigma, norm } => norm * (-r * r / (2.0 * sigma * sigma)).exp(),
            Kernel::Uniform { radius, density } => {
                if r <= radius {
                    density
                } else {
                    0.0
                }
            }
        }
    }

    /// Density in polar form `r^{k-1} ρ(r)`, computed stably.
    fn radial(&self, r: f64, k: usize) -> f64 {
        match *self {
            Kernel::Fractional { alpha, c } => c * r.powf(-1.0 - alpha),
            _ => r.powi(k as i32 - 1) * self.density(r, k),
        }
    }

    fn infinite(&self) -> bool {
        matches!(self, Kernel::Fractional { .. } | Kernel::Relativistic { .. })
    }

    /// `∫_0^{r} s^{k+1} ρ(s) ds` bound for the infinite kernels.
    fn near_moment(&self, r: f64) -> f64 {
        match *self {
            Kernel::Fractional { alpha, c } | Kernel::Relativistic { alpha, c, .. } => {
                // x^ν K_ν(x) is decreasing, so the relativistic density is below the fractional one
                c * r.powf(2.0 - alpha) / (2.0 - alpha)
            }
            _ => 0.0,
        }
    }

    /// `μ(|z| > r)` for the radial part in intrinsic dimension `k`.
    fn tail_mass(&self, r: f64, k: usize, gl: &(Vec<f64>, Vec<f64>)) -> f64 {
        let area = sphere_area(k);
        match *self {
            Kernel::Fractional { alpha, c } => area * c * r.powf(-alpha) / alpha,
            Kernel::Relativistic { m, .. } => {
                let len = 60.0 / m;
                let panels = 60;
                let h = len / panels as f64;
                (0..panels)
                    .map(|i| {
                        let a = r + i as f64 * h;
                        map_rule(gl, a, a + h).map(|(s, w)| w * area * s.powi(k as i32 - 1) * self.density(s, k)).sum::<f64>()
                    })
                    .sum()
            }
            Kernel::Gaussian { sigma, norm } => {
                let mass = norm * (2.0 * std::f64::consts::PI * sigma * sigma).powf(k as f64 / 2.0);
                mass * gaussian_tail(k, r / sigma)
            }
            Kernel::Uniform { radius, .. } if r >= radius => 0.0,
            Kernel::Uniform { radius, density } => density * (ball_volume(k, radius) - ball_volume(k, r)),
        }
    }
}

/// One radially parametrised part: `z = center + r·F θ`, `θ ∈ S^{k−1}`.
struct RadialPart {
    name: String,
    k: usize,
    frame: Vec<Vec<f64>>,
    center: Vec<f64>,
    kernel: Kernel,
}

pub struct OperatorEvaluator<'a> {
    mu: &'a LevyMeasure,
    config: EvaluatorConfig,
    lo: (Vec<f64>, Vec<f64>),
    hi: (Vec<f64>, Vec<f64>),
}

impl<'a> OperatorEvaluator<'a> {
    pub fn new(mu: &'a LevyMeasure, config: EvaluatorConfig) -> Result<Self, NumericsError> {
        if !(config.r0 > 0.0) || config.quad_nodes == 0 || config.panels_per_decade == 0 || !(config.max_panel_width > 0.0) {
            return Err(NumericsError::Config("r0, quad_nodes, panels_per_decade and max_panel_width must be positive".into()));
        }
        let lo = gauss_legendre(config.quad_nodes);
        let hi = gauss_legendre(config.quad_nodes + 4);
        Ok(OperatorEvaluator { mu, config, lo, hi })
    }

    pub fn config(&self) -> &EvaluatorConfig {
        &self.config
    }

    pub fn eval(&self, u: &dyn TestFunction, x: &[f64]) -> Result<Evaluation, NumericsError> {
        let d = self.mu.dimension;
        if x.len() != d || u.dim() != d {
            return Err(NumericsError::Dimension(format!("point has {} coordinates, function {}, measure {d}", x.len(), u.dim())));
        }
        let basis = &self.mu.basis;
        let ux = u.value(x);
        let grad = u.gradient(x);
        let sup = u.sup_bound();
        let h = u.hessian_bound(x, self.config.r0.max(1.0));
        let mut components = Vec::new();

        if !self.mu.atoms.is_empty() {
            components.push(self.atoms(u, x, ux, &grad, basis));
        }
        for (i, s) in self.mu.sequences.iter().enumerate() {
            let mut value = 0.0;
            for n in 1..=s.truncation {
                let p = s.point(n);
                value += pair_term(u, x, ux, &grad, &p, rational_to_f64(&s.weight(n)), self.config.r0, basis);
            }
            let rest = (s.levy_bound(basis).unwrap_or(f64::INFINITY) - s.levy_partial_sum(basis, s.truncation)).max(0.0);
            let bound = if rest == 0.0 {
                0.0
            } else {
                let sup = sup.ok_or(NumericsError::UnboundedFunction("sequence atoms".into()))?;
                let r0 = self.config.r0;
                let k = (h / 2.0 * r0.max(1.0).powi(2)).max(2.0 * sup * (1.0 / r0.min(1.0)).powi(2));
                2.0 * k * rest
            };
            components.push(ComponentEvaluation { name: format!("sequence[{i}]"), value, bound });
        }
        for part in &self.mu.continuous {
            match part {
                ContinuousPart::SurfaceSphere { radius, mass } => components.push(self.sphere(u, x, ux, h, *radius, *mass)?),
                ContinuousPart::CantorStub => {
                    return Err(NumericsError::Unsupported("cantor_stub has no quadrature representation".into()))
                }
                other => {
                    let rp = radial_part(other, d, basis)?;
                    components.push(self.radial(u, x, ux, &grad, sup, h, &rp)?);
                }
            }
        }
        let value = components.iter().map(|c| c.value).sum();
        let bound = components.iter().map(|c| c.bound).sum::<f64>() + 4.0 * f64::EPSILON * components.len() as f64 * components.iter().map(|c| c.value.abs()).sum::<f64>();
        if let Some(tol) = self.config.tolerance {
            if !(bound <= tol) {
                return Err(NumericsError::ToleranceExceeded { value, bound, tolerance: tol });
            }
        }
        Ok(Evaluation { value, bound, components })
    }

    fn atoms(&self, u: &dyn TestFunction, x: &[f64], ux: f64, grad: &[f64], basis: &ConstantBasis) -> ComponentEvaluation {
        let mut value = 0.0;
        for Atom { point, weight } in &self.mu.atoms {
            if !positive_representative(point, basis) {
                continue;
            }
            value += pair_term(u, x, ux, grad, point, rational_to_f64(weight), self.config.r0, basis);
        }
        let n = self.mu.atoms.len() as f64;
        let scale: f64 = self.mu.atoms.iter().map(|a| rational_to_f64(&a.weight)).sum::<f64>() * (ux.abs() + 1.0);
        let bound = if value == 0.0 { 0.0 } else { 8.0 * f64::EPSILON * n * scale };
        ComponentEvaluation { name: "atoms".into(), value, bound }
    }

    fn sphere(&self, u: &dyn TestFunction, x: &[f64], ux: f64, h: f64, radius: f64, mass: f64) -> Result<ComponentEvaluation, NumericsError> {
        let d = x.len();
        let area = sphere_area(d);
        let res = self.config.angular_min.max((2.0 * radius * h.sqrt()).ceil() as usize + 32);
        let avg = |res: usize| -> f64 {
            sphere_rule(d, res)
                .iter()
                .map(|(t, w)| {
                    let y: Vec<f64> = x.iter().zip(t).map(|(a, b)| a + radius * b).collect();
                    w * u.value(&y)
                })
                .sum::<f64>()
                / area
        };
        let fine = avg(res);
        let coarse = avg(res / 2);
        let value = mass * (fine - ux);
        let bound = mass * ((fine - coarse).abs() + 8.0 * f64::EPSILON * (fine.abs() + ux.abs()));
        Ok(ComponentEvaluation { name: "surface_sphere".into(), value, bound })
    }

    #[allow(clippy::too_many_arguments)]
    fn radial(
        &self,
        u: &dyn TestFunction,
        x: &[f64],
        ux: f64,
        grad: &[f64],
        sup: Option<f64>,
        h: f64,
        part: &RadialPart,
    ) -> Result<ComponentEvaluation, NumericsError> {
        let cfg = &self.config;
        let k = part.k;
        let compensated = part.kernel.infinite();
        let bounded_support = matches!(part.kernel, Kernel::Uniform { .. });
        if sup.is_none() && !bounded_support {
            return Err(NumericsError::UnboundedFunction(part.name.clone()));
        }
        let sup_u = sup.unwrap_or_else(|| ux.abs() + 1.0);

        // truncation radii
        let r_hi = match part.kernel {
            Kernel::Uniform { radius, .. } => radius,
            Kernel::Gaussian { sigma, .. } => 12.0 * sigma,
            Kernel::Relativistic { m, .. } => cfg.r_max.unwrap_or((40.0 / m).max(2.0 * cfg.r0).min(r_cap(k).max(40.0 / m))),
            Kernel::Fractional { alpha, c } => cfg.r_max.unwrap_or_else(|| {
                let want = (2.0 * sphere_area(k) * c * sup_u / (alpha * cfg.tail_tolerance)).powf(1.0 / alpha);
                want.clamp(2.0 * cfg.r0.max(1.0), r_cap(k))
            }),
        };
        let r_lo = if compensated {
            if h > 0.0 {
                (8.0 * f64::EPSILON * sup_u / h).sqrt().clamp(1e-12, (cfg.r0 / 4.0).min(1e-2))
            } else {
                1e-12
            }
        } else {
            0.0
        };

        // panel breakpoints
        let mut pts = Vec::new();
        if compensated {
            let decades = (r_hi / r_lo).log10();
            let n = (decades * cfg.panels_per_decade as f64).ceil() as usize;
            pts.extend((0..=n).map(|i| r_lo * 10f64.powf(decades * i as f64 / n as f64)));
        } else {
            let width = match part.kernel {
                Kernel::Gaussian { sigma, .. } => (sigma / 2.0).min(cfg.max_panel_width),
                _ => cfg.max_panel_width,
            };
            let n = (r_hi / width).ceil().max(1.0) as usize;
            pts.extend((0..=n).map(|i| r_hi * i as f64 / n as f64));
        }
        if compensated && cfg.r0 > r_lo && cfg.r0 < r_hi {
            pts.push(cfg.r0);
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut panels = Vec::new();
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let m = ((b - a) / cfg.max_panel_width).ceil().max(1.0) as usize;
            panels.extend((0..m).map(|i| (a + (b - a) * i as f64 / m as f64, a + (b - a) * (i + 1) as f64 / m as f64)));
        }

        let freq = h.sqrt();
        let r0 = cfg.r0;
        let results: Vec<(f64, f64, f64)> = panels
            .par_iter()
            .map(|&(a, b)| {
                let rmax = if part.center.iter().any(|c| *c != 0.0) { b + norm(&part.center) } else { b };
                let res = match k {
                    1 => 2,
                    2 => cfg.angular_min.max((2.0 * rmax * freq).ceil() as usize + 32),
                    _ => (cfg.angular_min / 2).max((rmax * freq).ceil() as usize + 16),
                };
                let rule = sphere_rule(k, res);
                let dirs: Vec<(Vec<f64>, f64)> = rule
                    .iter()
                    .map(|(t, w)| {
                        let v: Vec<f64> = (0..x.len()).map(|i| part.frame.iter().zip(t).map(|(f, ti)| f[i] * ti).sum()).collect();
                        (v, *w)
                    })
                    .collect();
                let mut round = 0.0;
                let mut integrand = |r: f64, track: bool| -> f64 {
                    let dens = part.kernel.radial(r, k);
                    let mut acc = 0.0;
                    let mut mag = 0.0;
                    let mut y = vec![0.0; x.len()];
                    for (v, w) in &dirs {
                        for i in 0..x.len() {
                            y[i] = x[i] + part.center[i] + r * v[i];
                        }
                        let uy = u.value(&y);
                        let mut t = uy - ux;
                        if compensated && r < r0 {
                            let zg = r * dot(v, grad);
                            t -= zg;
                            mag += w * zg.abs();
                        }
                        acc += w * t;
                        mag += w * (uy.abs() + ux.abs());
                    }
                    if track {
                        round += dens * mag;
                    }
                    dens * acc
                };
                let q_hi: f64 = map_rule(&self.hi, a, b).map(|(r, w)| w * integrand(r, false)).sum();
                let q_lo: f64 = map_rule(&self.lo, a, b).map(|(r, w)| w * integrand(r, true)).sum();
                (q_hi, (q_hi - q_lo).abs(), round * (b - a) / 2.0 * 4.0 * f64::EPSILON)
            })
            .collect();
        let mut value: f64 = 0.0;
        let mut quad_err = 0.0;
        let mut round = 0.0;
        for (v, e, r) in results {
            value += v;
            quad_err += e;
            round += r;
        }
        let area = sphere_area(k);
        let near = if compensated { h / 2.0 * area * part.kernel.near_moment(r_lo) } else { 0.0 };
        // the outer region is dropped: |∫_{|z|>R} (u(x+z) − u(x)) dμ| ≤ (sup|u| + |u(x)|)·μ(|z|>R)
        let tail_bound = (sup_u + ux.abs()) * part.kernel.tail_mass(r_hi, k, &self.lo);
        let bound = quad_err + round + near + tail_bound;
        Ok(ComponentEvaluation { name: part.name.clone(), value, bound })
    }
}

/// `w·[(u(x+p) − u(x) − p·∇u) + (u(x−p) − u(x) + p·∇u)]`, compensation only inside `r0`.
#[allow(clippy::too_many_arguments)]
fn pair_term(
    u: &dyn TestFunction,
    x: &[f64],
    ux: f64,
    grad: &[f64],
    p: &[ExtendedRational],
    w: f64,
    r0: f64,
    basis: &ConstantBasis,
) -> f64 {
    let pf: Vec<f64> = p.iter().map(|c| c.to_f64(basis)).collect();
    let neg: Vec<ExtendedRational> = p.iter().map(|c| -c).collect();
    let at = |shift: &[ExtendedRational], sign: f64| {
        u.shifted_value(x, shift, basis).unwrap_or_else(|| {
            let y: Vec<f64> = x.iter().zip(&pf).map(|(a, b)| a + sign * b).collect();
            u.value(&y)
        })
    };
    let comp = if norm(&pf) < r0 { dot(&pf, grad) } else { 0.0 };
    let plus = (at(p, 1.0) - ux) - comp;
    let minus = (at(&neg, -1.0) - ux) + comp;
    w * (plus + minus)
}

fn positive_representative(p: &[ExtendedRational], basis: &ConstantBasis) -> bool {
    p.iter().map(|c| c.signum(basis)).find(|s| *s != 0) == Some(1)
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Orthonormal frame of a rational subspace, by Gram–Schmidt in floating point.
fn frame(dirs: &[Vec<num_rational::BigRational>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in dirs {
        let mut w: Vec<f64> = v.iter().map(rational_to_f64).collect();
        for _ in 0..2 {
            for f in &out {
                let c = dot(&w, f);
                w.iter_mut().zip(f).for_each(|(a, b)| *a -= c * b);
            }
        }
        let n = norm(&w);
        out.push(w.into_iter().map(|a| a / n).collect());
    }
    out
}

fn radial_part(part: &ContinuousPart, d: usize, basis: &ConstantBasis) -> Result<RadialPart, NumericsError> {
    let ambient = |name: &str, kernel: Kernel| -> Result<RadialPart, NumericsError> {
        if d > 3 {
            return Err(NumericsError::Dimension(format!("{name} quadrature is implemented for d ≤ 3")));
        }
        Ok(RadialPart {
            name: name.into(),
            k: d,
            frame: (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect(),
            center: vec![0.0; d],
            kernel,
        })
    };
    match part {
        ContinuousPart::Fractional { alpha } => ambient("fractional", Kernel::Fractional { alpha: *alpha, c: fractional_constant(d, *alpha) }),
        ContinuousPart::Relativistic { alpha, mass } => {
            let nu = (d as f64 + alpha) / 2.0;
            ambient("relativistic", Kernel::Relativistic { alpha: *alpha, m: *mass, c: relativistic_constant(d, *alpha, *mass), nu })
        }
        ContinuousPart::Convolution { kernel: RadialKernel::Gaussian { sigma, mass } } => {
            let norm = mass * (2.0 * std::f64::consts::PI * sigma * sigma).powf(-(d as f64) / 2.0);
            ambient("convolution", Kernel::Gaussian { sigma: *sigma, norm })
        }
        ContinuousPart::Convolution { kernel: RadialKernel::UniformBall { radius, mass } } => {
            ambient("convolution", Kernel::Uniform { radius: *radius, density: mass / ball_volume(d, *radius) })
        }
        ContinuousPart::AffineSupported { basis: dirs, offset, profile } => {
            let k = dirs.len();
            if k > 3 {
                return Err(NumericsError::Dimension("affine pieces of dimension > 3 are not supported".into()));
            }
            let kernel = match profile {
                AffineProfile::Fractional { alpha } => Kernel::Fractional { alpha: *alpha, c: fractional_constant(k, *alpha) },
                AffineProfile::Gaussian { sigma, mass } => {
                    Kernel::Gaussian { sigma: *sigma, norm: mass * (2.0 * std::f64::consts::PI * sigma * sigma).powf(-(k as f64) / 2.0) }
                }
            };
            Ok(RadialPart {
                name: "affine".into(),
                k,
                frame: frame(dirs),
                center: offset.iter().map(|c| c.to_f64(basis)).collect(),
                kernel,
            })
        }
        other => Err(NumericsError::Unsupported(other.kind_name().into())),
    }
}

/// Convenience wrapper around [`OperatorEvaluator`].
pub fn eval_operator(mu: &LevyMeasure, u: &dyn TestFunction, x: &[f64], config: &EvaluatorConfig) -> Result<Evaluation, NumericsError> {
    OperatorEvaluator::new(mu, config.clone())?.eval(u, x)
}

/// `ψ(ξ)` with `L^μ[cos(ξ·x + φ)] = ψ(ξ) cos(ξ·x + φ)`; sequences are truncated.
/// `None` for parts without a closed form.
pub fn fourier_symbol(mu: &LevyMeasure, xi: &[f64]) -> Option<f64> {
    let basis = &mu.basis;
    let d = mu.dimension;
    let xin = norm(xi);
    let mut s = 0.0;
    for a in &mu.atoms {
        let p: Vec<f64> = a.point.iter().map(|c| c.to_f64(basis)).collect();
        s += rational_to_f64(&a.weight) * (dot(xi, &p).cos() - 1.0);
    }
    for q in &mu.sequences {
        for n in 1..=q.truncation {
            let p: Vec<f64> = q.point(n).iter().map(|c| c.to_f64(basis)).collect();
            s += 2.0 * rational_to_f64(&q.weight(n)) * (dot(xi, &p).cos() - 1.0);
        }
    }
    for part in &mu.continuous {
        s += match part {
            ContinuousPart::Fractional { alpha } => -xin.powf(*alpha),
            ContinuousPart::Relativistic { alpha, mass } => mass.powf(*alpha) - (mass * mass + xin * xin).powf(alpha / 2.0),
            ContinuousPart::Convolution { kernel: RadialKernel::Gaussian { sigma, mass } } => mass * ((-sigma * sigma * xin * xin / 2.0).exp() - 1.0),
            ContinuousPart::Convolution { kernel: RadialKernel::UniformBall { radius, mass } } => mass * (ball_characteristic(d, radius * xin) - 1.0),
            ContinuousPart::SurfaceSphere { radius, mass } => mass * (sphere_characteristic(d, radius * xin) - 1.0),
            ContinuousPart::AffineSupported { basis: dirs, offset, profile } => {
                let f = frame(dirs);
                let pxi = f.iter().map(|v| dot(v, xi).powi(2)).sum::<f64>().sqrt();
                match profile {
                    AffineProfile::Fractional { alpha } => -pxi.powf(*alpha),
                    AffineProfile::Gaussian { sigma, mass } => {
                        let o: Vec<f64> = offset.iter().map(|c| c.to_f64(basis)).collect();
                        mass * ((-sigma * sigma * pxi * pxi / 2.0).exp() * dot(xi, &o).cos() - 1.0)
                    }
                }
            }
            ContinuousPart::CantorStub => return None,
        };
    }
    Some(s)
}
