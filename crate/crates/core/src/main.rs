use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("LIOUVILLE_LOG")).init();
    let cli = liouville::cli::Cli::parse();
    std::process::exit(liouville::cli::run(&cli));
}
