//! Drive the command layer in-process: the same reports the `liouville`
//! binary prints, with exit codes.
//!
//!     cargo run --example verdict_report [decide|closure|decompose|counterexample|propagate|verify] [spec.toml]

use clap::Parser;
use liouville::cli::{execute, strip_timestamp, Cli};

fn main() {
    let mut args = std::env::args().skip(1);
    let command = args.next().unwrap_or_else(|| "decide".into());
    let spec = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/checkerboard_2d.toml").into());
    for format in ["report", "json-like"] {
        let cli = Cli::parse_from(["liouville", command.as_str(), spec.as_str(), "--format", format]);
        match execute(&cli) {
            Ok(out) => {
                println!("--- {format}, exit {} ---", out.code);
                print!("{}", strip_timestamp(&out.output));
            }
            Err(e) => {
                eprintln!("error: {e} (exit {})", e.exit_code());
                std::process::exit(e.exit_code());
            }
        }
    }
}
