use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liouville")).args(args).output().expect("binary runs")
}

fn run_spec(cmd: &str, spec: &str, extra: &[&str]) -> Output {
    let path = data(spec);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(o: &Output) -> toml::Table {
    stdout(o).parse().expect("report parses as TOML")
}

#[test]
fn decide_exit_codes() {
    let cases = [
        ("discrete_laplacian_1d.toml", 10, "fails"),
        ("nonstandard_1d.toml", 0, "holds"),
        ("harmonic_1d.toml", 0, "holds"),
        ("kronecker_sqrt2_sqrt3.toml", 0, "holds"),
        ("checkerboard_2d.toml", 10, "fails"),
        ("mixed_irrational_2d.toml", 20, "uncertified"),
    ];
    for (spec, code, verdict) in cases {
        let o = run_spec("decide", spec, &[]);
        assert_eq!(o.status.code(), Some(code), "{spec}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(report(&o)["verdict"].as_str(), Some(verdict), "{spec}");
    }
}

#[test]
fn uncertified_spec_from_tempfile() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixed.toml");
    std::fs::write(
        &path,
        "dimension = 2\n[[constants]]\nname = \"sqrt3\"\n[[atoms]]\npoint = [\"1\", \"sqrt3\"]\nweight = \"1\"\n[[atoms]]\npoint = [\"sqrt3\", \"1\"]\nweight = \"1\"\n",
    )
    .unwrap();
    let o = run(&["decide", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(20));
    let r = report(&o);
    assert_eq!(r["certified"].as_bool(), Some(false));
    assert_eq!(r["closure"]["provenance"].as_str(), Some("numerical_probe"));
}

#[test]
fn input_errors_exit_2() {
    let o = run_spec("decide", "malformed.toml", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"), "{}", String::from_utf8_lossy(&o.stderr));

    let o = run(&["decide", "/nonexistent/spec.toml"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run_spec("verify", "fractional_1d.toml", &["--function", "no_such_function"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run_spec("decide", "poly_ratio_1d.toml", &["--truncation-N", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn strict_symmetry_rejects_one_sided_atoms() {
    assert_eq!(run_spec("decide", "discrete_laplacian_1d.toml", &[]).status.code(), Some(10));
    assert_eq!(run_spec("decide", "discrete_laplacian_1d.toml", &["--strict-symmetry"]).status.code(), Some(2));
}

#[test]
fn truncation_override_changes_digest_not_verdict() {
    let a = run_spec("decide", "poly_ratio_1d.toml", &[]);
    let b = run_spec("decide", "poly_ratio_1d.toml", &["--truncation-N", "16"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let (ra, rb) = (report(&a), report(&b));
    assert_eq!(ra["route"]["name"].as_str(), Some("unbounded_q_sequence"));
    assert_eq!(rb["route"]["name"].as_str(), Some("unbounded_q_sequence"));
    assert_ne!(ra["header"]["input_digest"], rb["header"]["input_digest"]);
}

#[test]
fn propagate_csv_is_nonincreasing() {
    let o = run_spec("propagate", "propagate_sqrt2.toml", &["--n-max", "30"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let col = headers.iter().position(|h| h == "delta").expect("delta column");
    let deltas: Vec<f64> = rdr.records().map(|r| r.unwrap()[col].parse().unwrap()).collect();
    // stops once delta drops below the default target 0.05
    assert!(deltas.len() <= 31);
    assert!(*deltas.last().unwrap() < 0.05, "{deltas:?}");
    assert!(deltas.windows(2).all(|w| w[1] <= w[0]), "{deltas:?}");
}

#[test]
fn verify_fractional_cosine() {
    let o = run_spec("verify", "fractional_1d.toml", &["--points", "3", "--tolerance", "1e-4"]);
    assert_eq!(o.status.code(), Some(0), "{}\n{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let r = report(&o);
    let residual: f64 = r["max_abs_residual"].as_str().unwrap().parse().unwrap();
    assert!(residual < 1e-4, "{residual}");
    assert_eq!(r["within_tolerance"].as_bool(), Some(true));
}

#[test]
fn verify_tolerance_exceeded_exits_1() {
    // a tolerance far below the quadrature error
    let o = run_spec("verify", "fractional_1d.toml", &["--points", "2", "--tolerance", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn counterexample_csv_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("ce.csv");
    let o = run_spec("counterexample", "checkerboard_2d.toml", &["--samples", "20", "--csv", csv_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(10));
    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(headers, ["x1", "x2", "lambda", "U", "LU", "bound"]);
    let mut n = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        assert_eq!(rec[4].parse::<f64>().unwrap(), 0.0);
        n += 1;
    }
    assert_eq!(n, 20);

    let o = run_spec("counterexample", "nonstandard_1d.toml", &[]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn json_like_format_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run_spec("closure", "checkerboard_2d.toml", &["--format", "json-like", "--out", out.to_str().unwrap()]);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["closure"]["dense"], serde_json::Value::Bool(false));
    assert_eq!(v["header"]["command"], "closure");
}

#[test]
fn repeated_runs_are_identical() {
    let strip = |o: &Output| liouville::cli::strip_timestamp(&stdout(o));
    for spec in ["nonstandard_2d_three_halves.toml", "mixed_irrational_2d.toml"] {
        let a = run_spec("decide", spec, &[]);
        let b = run_spec("decide", spec, &[]);
        assert_eq!(strip(&a), strip(&b), "{spec}");
    }
    let a = run_spec("decompose", "checkerboard_2d.toml", &["--format", "json"]);
    let b = run_spec("decompose", "checkerboard_2d.toml", &["--format", "json"]);
    assert_eq!(strip(&a), strip(&b));
}
