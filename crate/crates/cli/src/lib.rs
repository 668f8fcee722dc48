//! Command-line front-end for the `eabp` engine: reads a run configuration,
//! executes one mode and renders the result as JSON or CSV.

pub mod config;
pub mod error;
pub mod model;
pub mod modes;
pub mod render;

use serde::Serialize;

pub use config::{Args, Format, Mode, RunConfig};
pub use error::CliError;

use model::ModelEcho;

#[derive(Serialize)]
struct Envelope {
    mode: &'static str,
    seed: u64,
    model: Option<ModelEcho>,
    result: serde_json::Value,
}

/// Runs `cfg` and returns the rendered output.
pub fn execute(cfg: &RunConfig) -> error::Result<String> {
    let out = modes::run_mode(cfg)?;
    match cfg.format {
        Format::Csv => Ok(out.csv.expect("csv availability is checked when the config is resolved")),
        Format::Json => {
            let env = Envelope {
                mode: cfg.mode.as_str(),
                seed: cfg.seed,
                model: cfg.model.as_ref().map(model::Model::echo),
                result: out.json,
            };
            let mut text = serde_json::to_string_pretty(&env)
                .map_err(|e| CliError::Validation(format!("cannot serialise output: {e}")))?;
            text.push('\n');
            Ok(text)
        }
    }
}

/// Resolves `args`, runs and writes the output to `--out` or stdout.
pub fn run(args: &Args) -> error::Result<()> {
    let cfg = RunConfig::resolve(args)?;
    let text = execute(&cfg)?;
    match &cfg.output_path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))
        }
    }
}
