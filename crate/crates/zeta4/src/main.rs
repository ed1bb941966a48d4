use clap::Parser;
use zeta4::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    if let Err(e) = run(&config) {
        eprintln!("zeta4 {}: {e}", config.command.name());
        std::process::exit(e.exit_code());
    }
}
