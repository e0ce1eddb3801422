//! Split a measure along the cosets `V + a` of its closure and check the
//! pieces: mirror symmetry, separation from the origin, reassembly.
//!
//!     cargo run --example decompose

use liouville::closure::{closure_multid, decompose_measure, ClosureConfig};
use liouville::measure::{show_point, support_of};
use liouville::parse_measure;

const SPEC: &str = r#"
dimension = 2

[[continuous]]
kind = "affine"
basis = [["1", "0"]]
profile = "fractional"
alpha = 1.0

[[atoms]]
point = ["0", "1"]
weight = "1"

[[atoms]]
point = ["5/2", "1"]
weight = "1/2"

[[atoms]]
point = ["3", "2"]
weight = "1/4"
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mu = parse_measure(SPEC)?;
    let g = closure_multid(&support_of(&mu), &mu.basis, &ClosureConfig::default());
    println!("closure: {}", g.describe(&mu.basis));
    let d = decompose_measure(&mu, &g)?;
    for part in d.parts.values() {
        let idx: Vec<String> = part.index.iter().map(|i| i.to_string()).collect();
        println!("coset a = {} [{}]: mass {}", show_point(&part.offset, &mu.basis), idx.join(", "), part.mass);
        for c in &part.continuous {
            println!("    continuous {c}");
        }
        for a in &part.atoms {
            println!("    atom {} weight {}", show_point(&a.point, &mu.basis), a.weight);
        }
    }
    println!("symmetric: {}", d.is_symmetric());
    println!("separation: {}", d.separation);
    println!("mass off V: {}", d.off_zero_mass);
    println!("reassembles: {}", d.reassembled_atoms().len() == mu.atoms.len());
    Ok(())
}
