use liouville::closure::{closure_multid, decompose_measure, orthogonalize, ClosedSubgroup, ClosureConfig};
use liouville::exact::{parse_expr, ConstantBasis, ExtendedRational};
use liouville::measure::{parse_measure, support_of};
use num_rational::BigRational;
use liouville::{decide, DecideConfig, LevyMeasure};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec(name: &str) -> LevyMeasure {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name);
    parse_measure(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn closure(mu: &LevyMeasure) -> ClosedSubgroup {
    closure_multid(&support_of(mu), &mu.basis, &ClosureConfig::default())
}

fn vecs(rows: &[&[&str]], basis: &ConstantBasis) -> Vec<Vec<ExtendedRational>> {
    rows.iter().map(|r| r.iter().map(|s| parse_expr(s, basis).unwrap()).collect()).collect()
}

#[test]
fn checkerboard_lattice() {
    let mu = spec("checkerboard_2d.toml");
    let g = closure(&mu);
    assert!(g.is_certified() && g.v_basis.is_empty());
    assert_eq!(g.lambda_basis, vecs(&[&["1", "1"], &["0", "2"]], &mu.basis));
    let v = decide(&mu, &DecideConfig::default());
    let cert = v.certificate.expect("certificate");
    assert_eq!(cert.normal, [1, 0].map(|n| BigRational::from_integer(n.into())));
    assert_eq!(cert.c, vecs(&[&["1", "1"]], &mu.basis)[0]);
}

#[test]
fn rho_pi_is_dense_rho_three_halves_is_half_lattice() {
    let mu = spec("nonstandard_2d_pi.toml");
    let g = closure(&mu);
    assert!(g.is_dense() && g.is_certified());

    let mu = spec("nonstandard_2d_three_halves.toml");
    let g = closure(&mu);
    assert!(g.is_certified() && !g.is_dense());
    assert_eq!(g.lambda_basis, vecs(&[&["1/2", "0"], &["0", "1/2"]], &mu.basis));
}

#[test]
fn diffuse_hyperplane_closure_is_the_axis() {
    let mu = spec("diffuse_hyperplane_2d.toml");
    let g = closure(&mu);
    assert!(g.is_certified());
    assert_eq!(g.v_basis, vecs(&[&["1", "0"]], &mu.basis));
    assert!(g.lambda_basis.is_empty());
    assert_eq!(decide(&mu, &DecideConfig::default()).status(), "fails");
}

#[test]
fn orthogonalize_projects_lattice_off_the_subspace() {
    let mu = spec("diffuse_hyperplane_2d.toml");
    let mut g = closure(&mu);
    g.lambda_basis = vecs(&[&["1", "1"]], &mu.basis);
    g.orthogonal = false;
    let g = orthogonalize(g).unwrap();
    assert!(g.orthogonal);
    assert_eq!(g.lambda_basis, vecs(&[&["0", "1"]], &mu.basis));
}

#[test]
fn decomposition_independent_of_atom_order() {
    let atoms = [("0", "1", "1"), ("3", "1", "1/2"), ("0", "2", "1/4"), ("-5/2", "3", "1/8"), ("7", "0", "2")];
    let head = "dimension = 2\n[[continuous]]\nkind = \"affine\"\nbasis = [[\"1\", \"0\"]]\nprofile = \"fractional\"\nalpha = 1.0\n";
    let build = |order: &[usize]| {
        let mut s = head.to_string();
        for &i in order {
            let (x, y, w) = atoms[i];
            s += &format!("[[atoms]]\npoint = [\"{x}\", \"{y}\"]\nweight = \"{w}\"\n");
        }
        parse_measure(&s).unwrap()
    };
    let mut order: Vec<usize> = (0..atoms.len()).collect();
    let mu = build(&order);
    let g = closure(&mu);
    assert_eq!(g.v_basis, vecs(&[&["1", "0"]], &mu.basis));
    assert_eq!(g.lambda_basis, vecs(&[&["0", "1"]], &mu.basis));
    let reference = decompose_measure(&mu, &g).unwrap();
    assert!(reference.is_symmetric());
    // cosets x_2 = 0, ±1, ±2, ±3
    assert_eq!(reference.parts.len(), 7);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        order.shuffle(&mut rng);
        let mu = build(&order);
        let g2 = closure(&mu);
        assert_eq!(g2, g);
        let d = decompose_measure(&mu, &g2).unwrap();
        assert_eq!(d.parts, reference.parts);
        assert_eq!(d.reassembled_atoms(), reference.reassembled_atoms());
    }
}
