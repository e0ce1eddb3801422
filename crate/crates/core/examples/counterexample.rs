//! Bounded nonconstant solutions for measures whose closure is not ℝ^d:
//! `U = cos(2π λ_x)` is annihilated exactly by the operator and invariant
//! under the closure.
//!
//!     cargo run --example counterexample

use liouville::numerics::{eval_operator, sample_points, EvaluatorConfig, TestFunction};
use liouville::{check_periodicity_exact, decide, parse_measure, DecideConfig};

const CASES: &[(&str, &str)] = &[
    ("{±1/2, ±3/2}", "dimension = 1\n[[atoms]]\npoint = [\"1/2\"]\nweight = \"1\"\n[[atoms]]\npoint = [\"3/2\"]\nweight = \"1\"\n"),
    ("checkerboard", include_str!("../data/checkerboard_2d.toml")),
    ("rho = 3/2 grid", include_str!("../data/nonstandard_2d_three_halves.toml")),
    ("line x_2 = 0", include_str!("../data/diffuse_hyperplane_2d.toml")),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, src) in CASES {
        let mu = parse_measure(src)?;
        let v = decide(&mu, &DecideConfig::default());
        let Some(u) = &v.counterexample else {
            println!("{name}: {} (no counterexample)", v.status());
            continue;
        };
        println!("{name}: {}", u.closed_form());
        let xs = sample_points(mu.dimension, 20, 5.0, 1);
        let mut worst: f64 = 0.0;
        for x in &xs {
            let e = eval_operator(&mu, u, x, &EvaluatorConfig::default())?;
            worst = worst.max(e.value.abs());
        }
        println!("    max |L U| over {} points: {worst:e}", xs.len());
        let range = xs.iter().map(|x| u.value(x)).fold((f64::MAX, f64::MIN), |(lo, hi), y| (lo.min(y), hi.max(y)));
        println!("    U ranges over [{:.3}, {:.3}]", range.0, range.1);
        let gens: Vec<_> = mu.atoms.iter().map(|a| a.point.clone()).collect();
        let p = check_periodicity_exact(u, &gens, &xs, &mu.basis, 1e-12);
        println!("    periodic under the support: {} (max deviation {:e})", p.passed, p.max_deviation);
    }
    Ok(())
}
