//! Propagate A_{n+1} = A_n ∪ (A_n + S) from A_0 = {0} and classify the
//! covering-radius history.
//!
//!     cargo run --release --example density_probe [spec.toml]

use liouville::measure::support_of;
use liouville::numerics::{density_probe, ProbeConfig};
use liouville::parse_measure;

const CASES: &[(&str, &str)] = &[
    ("{±1}", "dimension = 1\n[[atoms]]\npoint = [\"1\"]\nweight = \"1\"\n"),
    ("{±1, ±√2}", include_str!("../data/propagate_sqrt2.toml")),
    ("{±1, ±355/113}", include_str!("../data/near_rational_355_113.toml")),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let owned;
    let cases: Vec<(&str, &str)> = match std::env::args().nth(1) {
        Some(path) => {
            owned = std::fs::read_to_string(&path)?;
            vec![("input", owned.as_str())]
        }
        None => CASES.to_vec(),
    };
    let config = ProbeConfig::default();
    for (name, src) in cases {
        let mu = parse_measure(src)?;
        let support = support_of(&mu);
        let r = density_probe(&support.finite_points, mu.dimension, &mu.basis, &config);
        println!("{name}: {} after {} steps", r.verdict.name(), r.history.len() - 1);
        for (n, (d, s)) in r.history.iter().zip(&r.sizes).enumerate() {
            println!("  n = {n:2}  |A_n| = {s:6}  delta = {d:.6}");
        }
    }
    Ok(())
}
