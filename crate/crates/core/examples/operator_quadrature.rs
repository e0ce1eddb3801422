//! Evaluate `L^μ[u](x)` by quadrature with a rigorous-style error bound and
//! compare against closed forms: plane waves against the Fourier symbol,
//! and harmonic polynomials against zero.
//!
//!     cargo run --release --example operator_quadrature

use liouville::numerics::{eval_operator, fourier_symbol, Cosine, EvaluatorConfig, HarmonicPolynomial, TestFunction};
use liouville::parse_measure;

const CASES: &[(&str, &str)] = &[
    ("fractional 1d", include_str!("../data/fractional_1d.toml")),
    ("relativistic 1d", include_str!("../data/relativistic_1d.toml")),
    ("convolution 1d", include_str!("../data/convolution_1d.toml")),
    ("mean value 2d", include_str!("../data/mean_value_2d.toml")),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, src) in CASES {
        let mu = parse_measure(src)?;
        let d = mu.dimension;
        let mut freq = vec![0.0; d];
        freq[0] = 1.3;
        let u = Cosine { frequency: freq.clone(), phase: 0.0 };
        let x: Vec<f64> = (0..d).map(|i| 0.4 + 0.1 * i as f64).collect();
        println!("{name}");
        for r0 in [0.5, 1.0, 2.0] {
            let config = EvaluatorConfig { r0, ..Default::default() };
            let e = eval_operator(&mu, &u, &x, &config)?;
            let exact = fourier_symbol(&mu, &freq).map(|psi| psi * u.value(&x));
            let err = exact.map_or(f64::NAN, |y| (e.value - y).abs());
            println!("    r0 = {r0}: L cos = {:+.10} ± {:.1e}, error {err:.1e}", e.value, e.bound);
        }
        let h = if d == 1 {
            HarmonicPolynomial::Affine { constant: 2.0, linear: vec![1.0] }
        } else {
            HarmonicPolynomial::SquareDifference { d, i: 0, j: 1 }
        };
        let e = eval_operator(&mu, &h, &x, &EvaluatorConfig::default())?;
        println!("    {}: L h = {:+.2e} ± {:.1e}", h.describe(), e.value, e.bound);
    }
    Ok(())
}
