use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use eabp::dynamics::PopulationState;
use eabp::scalar::{parse_rational, rational_from_decimal_f64};
use eabp::structure::Anchor;
use eabp::Rational;
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::model::Model;

pub const DEFAULT_MAX_STEPS: usize = 100_000;
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Simulate,
    Fixpoints,
    Classify,
    Limit,
    Periodic,
    Sweep,
    Structure,
    Quotient,
    Bernstein,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::Fixpoints => "fixpoints",
            Mode::Classify => "classify",
            Mode::Limit => "limit",
            Mode::Periodic => "periodic",
            Mode::Sweep => "sweep",
            Mode::Structure => "structure",
            Mode::Quotient => "quotient",
            Mode::Bernstein => "bernstein",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axes {
    /// Symmetric model `a = c`, `b = d` on an `(a, b)` grid.
    #[default]
    Ab,
    /// Full `(a, b, c, d)` grid.
    Abcd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnchorArg {
    Female,
    Male,
}

impl From<AnchorArg> for Anchor {
    fn from(a: AnchorArg) -> Self {
        match a {
            AnchorArg::Female => Anchor::Female,
            AnchorArg::Male => Anchor::Male,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "eabp", version, about = "Evolution algebras of bisexual populations")]
pub struct Args {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// 2×2 parameters `a,b,c,d` (decimals or fractions, read exactly).
    #[arg(long, conflicts_with = "hard")]
    pub params: Option<String>,
    /// Hard-constrained model `n,nu`.
    #[arg(long)]
    pub hard: Option<String>,
    /// Initial state: the `n` female shares followed by the `nu` male shares.
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<String>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Sample count for closure and Bernstein checks.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Grid points per axis in sweep mode.
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long, value_enum)]
    pub axes: Option<Axes>,
    /// Which type-1 vector the quotient basis keeps.
    #[arg(long, value_enum)]
    pub anchor: Option<AnchorArg>,
}

/// A number in a config file: a JSON number or a string such as `"9/50"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Text(String),
    Float(f64),
}

impl Num {
    pub fn rational(&self) -> Result<Rational> {
        match self {
            Num::Text(s) => Ok(parse_rational(s)?),
            Num::Float(v) => Ok(rational_from_decimal_f64(*v)?),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    Hard {
        n: usize,
        nu: usize,
    },
    #[serde(rename = "2x2")]
    TwoByTwo {
        a: Num,
        b: Num,
        c: Num,
        d: Num,
    },
    StochasticPair {
        a: Vec<Vec<Num>>,
        b: Vec<Vec<Num>>,
    },
    Tensor {
        n: usize,
        nu: usize,
        pf: Vec<Vec<Vec<Num>>>,
        pm: Vec<Vec<Vec<Num>>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub mode: Option<Mode>,
    pub model: Option<ModelSpec>,
    pub initial_state: Option<StateSpec>,
    pub max_steps: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
    pub samples: Option<usize>,
    pub resolution: Option<usize>,
    pub axes: Option<Axes>,
    pub anchor: Option<AnchorArg>,
    /// Generators of the ideal for quotient mode, in full coordinates.
    pub ideal: Option<Vec<Vec<Num>>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved run settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub model: Option<Model>,
    pub initial_state: Option<PopulationState>,
    pub max_steps: usize,
    pub tol: f64,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub samples: usize,
    pub resolution: usize,
    pub axes: Axes,
    pub anchor: Anchor,
    pub ideal: Option<Vec<Vec<Rational>>>,
}

fn split_list(text: &str) -> Vec<&str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn parse_params(text: &str) -> Result<ModelSpec> {
    let parts = split_list(text);
    let [a, b, c, d] = &parts[..] else {
        return Err(CliError::Config(format!("--params needs four values, got {}", parts.len())));
    };
    let num = |s: &&str| Num::Text(s.to_string());
    Ok(ModelSpec::TwoByTwo { a: num(a), b: num(b), c: num(c), d: num(d) })
}

fn parse_hard(text: &str) -> Result<ModelSpec> {
    let parts = split_list(text);
    let sizes: Vec<usize> = parts
        .iter()
        .map(|s| s.parse().map_err(|e| CliError::Config(format!("--hard: {s:?}: {e}"))))
        .collect::<Result<_>>()?;
    let [n, nu] = sizes[..] else {
        return Err(CliError::Config(format!("--hard needs n,nu, got {} values", sizes.len())));
    };
    Ok(ModelSpec::Hard { n, nu })
}

fn parse_z0(text: &str, model: Option<&Model>) -> Result<StateSpec> {
    let values: Vec<f64> = split_list(text)
        .iter()
        .map(|s| s.parse().map_err(|e| CliError::Config(format!("--z0: {s:?}: {e}"))))
        .collect::<Result<_>>()?;
    let Some(model) = model else {
        return Err(CliError::Config("--z0 needs a model to split female and male shares".into()));
    };
    let (n, nu) = model.dims();
    if values.len() != n + nu {
        return Err(CliError::Validation(format!("--z0 has {} values, the model needs {}", values.len(), n + nu)));
    }
    let (x, y) = values.split_at(n);
    Ok(StateSpec { x: x.to_vec(), y: y.to_vec() })
}

impl RunConfig {
    pub fn resolve(args: &Args) -> Result<Self> {
        let file = match &args.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let mode = args
            .mode
            .or(file.mode)
            .ok_or_else(|| CliError::Config("no mode given (use --mode or the config's \"mode\")".into()))?;

        let spec = match (&args.params, &args.hard) {
            (Some(p), _) => Some(parse_params(p)?),
            (None, Some(h)) => Some(parse_hard(h)?),
            (None, None) => file.model,
        };
        let model = spec.map(|s| Model::from_spec(&s)).transpose()?;

        let state_spec = match &args.z0 {
            Some(text) => Some(parse_z0(text, model.as_ref())?),
            None => file.initial_state,
        };
        let initial_state = match state_spec {
            Some(s) => {
                if let Some(m) = &model {
                    let (n, nu) = m.dims();
                    if s.x.len() != n || s.y.len() != nu {
                        return Err(CliError::Validation(format!(
                            "initial state has {}+{} shares, the model needs {n}+{nu}",
                            s.x.len(),
                            s.y.len()
                        )));
                    }
                }
                Some(PopulationState::new(s.x, s.y)?)
            }
            None => None,
        };

        let ideal = file
            .ideal
            .map(|gens| {
                gens.iter()
                    .map(|g| g.iter().map(Num::rational).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;

        let cfg = RunConfig {
            mode,
            model,
            initial_state,
            max_steps: args.max_steps.or(file.max_steps).unwrap_or(DEFAULT_MAX_STEPS),
            tol: args.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            seed: args.seed.or(file.seed).unwrap_or(0),
            output_path: args.out.clone().or(file.output_path),
            format: args.format.or(file.format).unwrap_or_default(),
            samples: args.samples.or(file.samples).unwrap_or(1000),
            resolution: args.resolution.or(file.resolution).unwrap_or(50),
            axes: args.axes.or(file.axes).unwrap_or_default(),
            anchor: args.anchor.or(file.anchor).map(Anchor::from).unwrap_or(Anchor::Female),
            ideal,
        };
        cfg.check_required()?;
        Ok(cfg)
    }

    fn check_required(&self) -> Result<()> {
        let needs_model = !matches!(self.mode, Mode::Sweep);
        if needs_model && self.model.is_none() {
            return Err(CliError::Config(format!("mode {} needs a model", self.mode.as_str())));
        }
        let needs_state = match self.mode {
            Mode::Simulate | Mode::Limit => true,
            Mode::Periodic => !self.model.as_ref().is_some_and(Model::is_symmetric_2x2),
            _ => false,
        };
        if needs_state && self.initial_state.is_none() {
            return Err(CliError::Config(format!("mode {} needs an initial state", self.mode.as_str())));
        }
        if self.max_steps == 0 {
            return Err(CliError::Config("max_steps must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(CliError::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if self.samples == 0 {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        if self.format == Format::Csv && !matches!(self.mode, Mode::Simulate | Mode::Fixpoints | Mode::Sweep) {
            return Err(CliError::Config(format!(
                "csv output is available for simulate, fixpoints and sweep, not {}",
                self.mode.as_str()
            )));
        }
        Ok(())
    }
}
