//! Exact arithmetic over a basis of independent constants: `Q(a, b)`,
//! rational gcds and small-fractional-part witnesses.
//!
//!     cargo run --example exact_numbers

use liouville::exact::{density_witness, parse_expr, q_of, rational_gcd, ConstantBasis, DEFAULT_WITNESS_CAP};
use liouville::parse_measure;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let basis = ConstantBasis::with_known(&["pi", "sqrt2"])?;
    println!("basis: {}", basis.assertion_echo());

    let pairs = [("1", "3/2"), ("2/3", "5/7"), ("1", "pi"), ("sqrt2", "3*sqrt2/4"), ("1 + pi", "2 + 2*pi")];
    for (a, b) in pairs {
        let (x, y) = (parse_expr(a, &basis)?, parse_expr(b, &basis)?);
        println!("Q({a}, {b}) = {}", q_of(&x, &y)?);
    }

    let g = rational_gcd(&"3/4".parse()?, &"5/6".parse()?)?;
    println!("gcd(3/4, 5/6) = {g}");

    let one = parse_expr("1", &basis)?;
    for b in ["pi", "sqrt2"] {
        let y = parse_expr(b, &basis)?;
        for eps in [1e-2, 1e-4] {
            let w = density_witness(&one, &y, eps, &basis, DEFAULT_WITNESS_CAP)?;
            println!("smallest n with {{n {b}}} < {eps:e}: n = {} (value {:.3e} ± {:.1e})", w.n, w.value, w.error_bound);
        }
    }

    // the same numbers typed into a measure spec
    let mu = parse_measure("dimension = 1\n[[constants]]\nname = \"pi\"\n[[atoms]]\npoint = [\"(1 + pi)/2\"]\nweight = \"1\"\n")?;
    for a in &mu.atoms {
        println!("atom at {} (weight {})", a.point[0].display(&mu.basis), a.weight);
    }
    Ok(())
}
