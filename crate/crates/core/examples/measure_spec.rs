//! Parse a measure spec, show its support descriptor and Lebesgue split, and
//! print it back in canonical form.
//!
//!     cargo run --example measure_spec [spec.toml]

use liouville::measure::{lebesgue_split, show_point, support_of};
use liouville::parse_measure;

const DEFAULT: &str = r#"
dimension = 1

[[constants]]
name = "sqrt2"

[[atoms]]
point = ["1"]
weight = "1/2"

[[atoms]]
point = ["sqrt2"]
weight = "1/4"

[[sequences]]
template = "harmonic"
power = 2
weight = { rule = "constant", value = "1" }
accumulation = true
truncation = 8

[[continuous]]
kind = "fractional"
alpha = 0.5
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    let mu = parse_measure(&text)?;
    println!("d = {}, {}", mu.dimension, mu.basis.assertion_echo());
    for a in &mu.atoms {
        println!("  atom {} weight {}", show_point(&a.point, &mu.basis), a.weight);
    }
    for c in &mu.continuous {
        println!("  continuous part: {}", c.kind_name());
    }

    let s = support_of(&mu);
    println!("support: {} finite points", s.finite_points.len());
    println!("  accumulation: {}", s.has_accumulation_point);
    println!("  interval or ball: {}", s.contains_interval_or_ball);
    for p in &s.accumulation_points {
        println!("  accumulates at {}", show_point(p, &mu.basis));
    }

    let split = lebesgue_split(&mu);
    println!("absolutely continuous: {:?}", split.absolutely_continuous);
    println!("singular diffuse:      {:?}", split.singular_diffuse);
    println!("atomic:                {:?}", split.atomic);

    println!("\ncanonical form:\n{}", mu.to_spec_string());
    Ok(())
}
