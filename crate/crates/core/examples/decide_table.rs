//! The holds/fails decision on a table of one- and two-dimensional measures.
//!
//!     cargo run --example decide_table

use std::time::Instant;

use liouville::{decide, parse_measure, DecideConfig};

const CASES: &[(&str, &str)] = &[
    ("discrete Laplacian", include_str!("../data/discrete_laplacian_1d.toml")),
    ("{±1, ±pi}", include_str!("../data/nonstandard_1d.toml")),
    ("{±1/n}", include_str!("../data/harmonic_1d.toml")),
    ("{±(n²+1)/n}", include_str!("../data/poly_ratio_1d.toml")),
    ("{±1, ±355/113}", include_str!("../data/near_rational_355_113.toml")),
    ("fractional", include_str!("../data/fractional_1d.toml")),
    ("relativistic", include_str!("../data/relativistic_1d.toml")),
    ("convolution", include_str!("../data/convolution_1d.toml")),
    ("checkerboard", include_str!("../data/checkerboard_2d.toml")),
    ("rho = pi grid", include_str!("../data/nonstandard_2d_pi.toml")),
    ("rho = 3/2 grid", include_str!("../data/nonstandard_2d_three_halves.toml")),
    ("mean value", include_str!("../data/mean_value_2d.toml")),
    ("line x_2 = 0", include_str!("../data/diffuse_hyperplane_2d.toml")),
    ("mixed irrational", include_str!("../data/mixed_irrational_2d.toml")),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:<20} {:<12} {:<22} {:>9}", "measure", "verdict", "route", "ms");
    for (name, src) in CASES {
        let mu = parse_measure(src)?;
        let t = Instant::now();
        let v = decide(&mu, &DecideConfig::default());
        let ms = t.elapsed().as_secs_f64() * 1e3;
        println!("{name:<20} {:<12} {:<22} {ms:>9.2}", v.status(), v.route.name());
        if let Some(q) = &v.sup_q {
            println!("{:<20} sup Q = {q}", "");
        }
        if let Some(u) = &v.counterexample {
            println!("{:<20} {}", "", u.closed_form());
        }
    }
    Ok(())
}
