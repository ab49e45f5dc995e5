use std::process::ExitCode;

use clap::Parser;
use dirichlet_cli::args::Cli;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match dirichlet_cli::run(cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dirichlet: {e}");
            e.exit_code()
        }
    }
}
