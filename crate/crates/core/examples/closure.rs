//! Closed subgroups `V ⊕ Λ` generated by supports in ℝ^d: lattices in Hermite
//! normal form, Kronecker density and the orthogonal projection of `Λ`.
//!
//!     cargo run --example closure

use liouville::closure::{closure_1d, closure_multid, kronecker_check, ClosureConfig};
use liouville::exact::{parse_expr, ConstantBasis};
use liouville::measure::support_of;
use liouville::parse_measure;

const CASES: &[(&str, &str)] = &[
    ("{±1/2, ±3/4}", "dimension = 1\n[[atoms]]\npoint = [\"1/2\"]\nweight = \"1\"\n[[atoms]]\npoint = [\"3/4\"]\nweight = \"1\"\n"),
    ("checkerboard", include_str!("../data/checkerboard_2d.toml")),
    ("rho = 3/2", include_str!("../data/nonstandard_2d_three_halves.toml")),
    ("rho = pi", include_str!("../data/nonstandard_2d_pi.toml")),
    ("(sqrt2, sqrt3)", include_str!("../data/kronecker_sqrt2_sqrt3.toml")),
    ("(sqrt2, sqrt2)", include_str!("../data/kronecker_sqrt2_sqrt2.toml")),
    ("line x_2 = 0", include_str!("../data/diffuse_hyperplane_2d.toml")),
    ("mixed irrational", include_str!("../data/mixed_irrational_2d.toml")),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, src) in CASES {
        let mu = parse_measure(src)?;
        let s = support_of(&mu);
        let g = if mu.dimension == 1 {
            closure_1d(&s, &mu.basis)
        } else {
            closure_multid(&s, &mu.basis, &ClosureConfig::default())
        };
        let status = if g.is_certified() { "exact" } else { "probe only" };
        println!("{name:<18} {:<40} via {} ({status})", g.describe(&mu.basis), g.route.name());
    }

    // Kronecker on a bare vector: is {n c mod Z^2} dense?
    let b = ConstantBasis::with_known(&["sqrt2", "sqrt3"])?;
    for c in [["sqrt2", "sqrt3"], ["sqrt2", "2*sqrt2"], ["1/3", "sqrt2"]] {
        let v: Vec<_> = c.iter().map(|s| parse_expr(s, &b)).collect::<Result<_, _>>()?;
        println!("kronecker({}, {}): {:?}", c[0], c[1], kronecker_check(&v));
    }
    Ok(())
}
