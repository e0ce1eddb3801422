use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// A rule on `[a, b]` built from Gauss–Legendre nodes.
pub fn map_rule(rule: &(Vec<f64>, Vec<f64>), a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    let (c, h) = ((a + b) / 2.0, (b - a) / 2.0);
    rule.0.iter().zip(&rule.1).map(move |(x, w)| (c + h * x, h * w))
}

/// Quadrature on the unit sphere `S^{k-1}` (k = 1, 2, 3): unit directions and
/// weights summing to the sphere's area. The rules are centrally symmetric.
pub fn sphere_rule(k: usize, resolution: usize) -> Vec<(Vec<f64>, f64)> {
    match k {
        1 => vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)],
        2 => {
            let m = resolution.max(4).next_multiple_of(2);
            (0..m)
                .map(|j| {
                    let t = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                    (vec![t.cos(), t.sin()], 2.0 * PI / m as f64)
                })
                .collect()
        }
        3 => {
            let nt = resolution.max(4).next_multiple_of(2);
            let np = 2 * nt;
            let (ct, wt) = gauss_legendre(nt);
            let mut out = Vec::with_capacity(nt * np);
            for (c, w) in ct.iter().zip(&wt) {
                let s = (1.0 - c * c).sqrt();
                for j in 0..np {
                    let p = 2.0 * PI * (j as f64 + 0.5) / np as f64;
                    out.push((vec![s * p.cos(), s * p.sin(), *c], w * 2.0 * PI / np as f64));
                }
            }
            out
        }
        _ => Vec::new(),
    }
}
