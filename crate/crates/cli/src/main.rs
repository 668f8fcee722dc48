use std::process::ExitCode;

use clap::Parser;
use eabp_cli::{run, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("eabp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
