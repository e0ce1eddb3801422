//! Normalising constants and special functions for the radial kernels.

use std::f64::consts::PI;

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Surface area of the unit sphere `S^{k-1} ⊂ ℝ^k`.
pub fn sphere_area(k: usize) -> f64 {
    2.0 * PI.powf(k as f64 / 2.0) / gamma(k as f64 / 2.0)
}

pub fn ball_volume(d: usize, r: f64) -> f64 {
    sphere_area(d) / d as f64 * r.powi(d as i32)
}

/// `c_{d,α}` with `−(−Δ)^{α/2} u = c_{d,α} P.V.∫ (u(x+z) − u(x)) |z|^{−d−α} dz`.
pub fn fractional_constant(d: usize, alpha: f64) -> f64 {
    let d = d as f64;
    alpha * 2f64.powf(alpha - 1.0) * gamma((d + alpha) / 2.0) / (PI.powf(d / 2.0) * gamma(1.0 - alpha / 2.0))
}

/// Prefactor `C` of the relativistic density `C · |z|^{−ν} K_ν(m|z|)`, `ν = (d+α)/2`,
/// whose symbol is `m^α − (m² + |ξ|²)^{α/2}`.
pub fn relativistic_constant(d: usize, alpha: f64, m: f64) -> f64 {
    let df = d as f64;
    let nu = (df + alpha) / 2.0;
    2f64.powf((alpha - df) / 2.0) * alpha * m.powf(nu) / (PI.powf(df / 2.0) * gamma(1.0 - alpha / 2.0))
}

/// Modified Bessel function of the second kind, `K_ν(x) = ∫_0^∞ e^{−x cosh t} cosh(νt) dt`,
/// by the trapezoid rule (exponentially convergent for this analytic integrand).
pub fn bessel_k(nu: f64, x: f64) -> f64 {
    if x > 700.0 {
        return 0.0;
    }
    let h: f64 = 0.02;
    let mut sum = 0.5 * (-x).exp();
    let mut t = h;
    loop {
        let term = (-x * t.cosh() + nu * t).exp() * 0.5 * (1.0 + (-2.0 * nu * t).exp());
        sum += term;
        if (term < 1e-18 * sum && x * t.cosh() > 1.0) || t > 60.0 {
            break;
        }
        t += h;
    }
    sum * h
}

/// Radial characteristic function of the uniform probability on the unit ball, at `t = r|ξ|`.
pub fn ball_characteristic(d: usize, t: f64) -> f64 {
    if t.abs() < 1e-6 {
        return 1.0 - t * t / (2.0 * (d as f64 + 2.0));
    }
    match d {
        1 => t.sin() / t,
        2 => 2.0 * libm::j1(t) / t,
        3 => 3.0 * (t.sin() - t * t.cos()) / t.powi(3),
        _ => f64::NAN,
    }
}

/// Radial characteristic function of the uniform probability on the unit sphere.
pub fn sphere_characteristic(d: usize, t: f64) -> f64 {
    match d {
        2 => libm::j0(t),
        3 if t.abs() < 1e-8 => 1.0,
        3 => t.sin() / t,
        _ => f64::NAN,
    }
}

/// `P(|Z| > r)` bound for a standard Gaussian vector in `ℝ^k` (union bound over coordinates).
pub fn gaussian_tail(k: usize, r: f64) -> f64 {
    (k as f64 * libm::erfc(r / (2.0 * k as f64).sqrt())).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        // c_{1,1} = 1/π
        assert!((fractional_constant(1, 1.0) - 1.0 / PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-12);
        assert!((ball_volume(2, 2.0) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn bessel_values() {
        // reference values from the integral representation at high resolution
        assert!((bessel_k(0.5, 1.0) - (PI / 2.0).sqrt() * (-1.0f64).exp()).abs() < 1e-13);
        assert!((bessel_k(1.5, 2.0) - (PI / 4.0).sqrt() * (-2.0f64).exp() * (1.0 + 0.5)).abs() < 1e-13);
        // small-argument asymptotics K_ν(x) ~ Γ(ν) 2^{ν−1} x^{−ν}
        let x: f64 = 1e-6;
        let asym = gamma(1.5) * 2f64.powf(0.5) * x.powf(-1.5);
        assert!((bessel_k(1.5, x) / asym - 1.0).abs() < 1e-5);
    }
}
