//! JSON config files and their merge with command-line flags.
//!
//! A config file is the base layer; any flag given explicitly on the command
//! line replaces the corresponding file value.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use iontrap_teleport::protocol::DEFAULT_MODE_DIM;
use iontrap_teleport::{ProtocolParams, RawParams, C64};

use crate::amplitude::parse_complex;
use crate::args::{Format, InputArgs, Mode, OutputArgs, RunArgs, SweepArgs};
use crate::{CliError, SCHEMA_VERSION};

const DEFAULT_SHOTS: u64 = 100_000;
const DEFAULT_GRID_STEPS: usize = 10;
const DEFAULT_GRID_MAX: f64 = 0.5;

/// An amplitude as written in a config file: text, a real number or `[re, im]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AmplitudeValue {
    Real(f64),
    Pair([f64; 2]),
    Text(String),
}

impl AmplitudeValue {
    fn resolve(&self, field: &str) -> Result<C64, CliError> {
        match self {
            AmplitudeValue::Real(x) => Ok(C64::new(*x, 0.0)),
            AmplitudeValue::Pair([re, im]) => Ok(C64::new(*re, *im)),
            AmplitudeValue::Text(s) => {
                parse_complex(s).map_err(|e| CliError::Parse(format!("{field}: {e}")))
            }
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub alpha: Option<AmplitudeValue>,
    pub beta: Option<AmplitudeValue>,
    pub gamma: Option<AmplitudeValue>,
    pub delta: Option<AmplitudeValue>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub a: Option<AmplitudeValue>,
    pub b: Option<AmplitudeValue>,
    pub c: Option<AmplitudeValue>,
    pub d: Option<AmplitudeValue>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub schema_version: u32,
    #[serde(default)]
    pub input: InputFile,
    #[serde(default)]
    pub channels: ChannelFile,
    pub mode: Option<Mode>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub mode_dim: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub max: Option<f64>,
    pub steps: Option<usize>,
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub schema_version: u32,
    #[serde(default)]
    pub input: InputFile,
    pub thetas: Option<[f64; 4]>,
    #[serde(default)]
    pub b2: GridFile,
    #[serde(default)]
    pub d2: GridFile,
    pub mode: Option<Mode>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub mode_dim: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

/// Sampling settings shared by `run` and `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Enumerate,
    Sample { shots: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct OutputTarget {
    pub format: Format,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ProtocolParams,
    pub execution: Execution,
    pub mode_dim: usize,
    pub output: OutputTarget,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub input: [C64; 4],
    pub thetas: [f64; 4],
    pub b2: Vec<f64>,
    pub d2: Vec<f64>,
    pub execution: Execution,
    pub mode_dim: usize,
    pub output: OutputTarget,
}

fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("config {}: {e}", path.display())))
}

fn check_schema(found: u32) -> Result<(), CliError> {
    if found != SCHEMA_VERSION {
        return Err(CliError::Parse(format!(
            "unsupported schema_version {found} (expected {SCHEMA_VERSION})"
        )));
    }
    Ok(())
}

/// Flag text first, then the file value, then `default`.
fn amplitude(
    flag: &Option<String>,
    file: &Option<AmplitudeValue>,
    name: &str,
    default: C64,
) -> Result<C64, CliError> {
    if let Some(text) = flag {
        return parse_complex(text).map_err(|e| CliError::Parse(format!("--{name}: {e}")));
    }
    match file {
        Some(v) => v.resolve(name),
        None => Ok(default),
    }
}

/// Default input `(|ee⟩ + i|eg⟩ + |ge⟩ − |gg⟩)/2`.
pub fn default_input() -> [C64; 4] {
    [
        C64::new(0.5, 0.0),
        C64::new(0.0, 0.5),
        C64::new(0.5, 0.0),
        C64::new(-0.5, 0.0),
    ]
}

fn resolve_input(flags: &InputArgs, file: &InputFile) -> Result<[C64; 4], CliError> {
    let d = default_input();
    Ok([
        amplitude(&flags.alpha, &file.alpha, "alpha", d[0])?,
        amplitude(&flags.beta, &file.beta, "beta", d[1])?,
        amplitude(&flags.gamma, &file.gamma, "gamma", d[2])?,
        amplitude(&flags.delta, &file.delta, "delta", d[3])?,
    ])
}

fn resolve_execution(
    mode: Option<Mode>,
    shots: Option<u64>,
    seed: Option<u64>,
) -> Result<Execution, CliError> {
    match mode.unwrap_or(Mode::Enumerate) {
        Mode::Enumerate => Ok(Execution::Enumerate),
        Mode::Sample => {
            let shots = shots.unwrap_or(DEFAULT_SHOTS);
            if shots == 0 {
                return Err(CliError::Parse("--shots must be at least 1".into()));
            }
            Ok(Execution::Sample { shots, seed: seed.unwrap_or(0) })
        }
    }
}

fn resolve_output(flags: &OutputArgs, format: Option<Format>, out: Option<PathBuf>) -> OutputTarget {
    OutputTarget {
        format: flags.format.or(format).unwrap_or(Format::Csv),
        out: flags.out.clone().or(out),
    }
}

pub fn resolve_run(args: &RunArgs) -> Result<RunConfig, CliError> {
    let file = match &args.config {
        Some(path) => {
            let f: RunFile = load(path)?;
            check_schema(f.schema_version)?;
            f
        }
        None => RunFile::default(),
    };
    let input = resolve_input(&args.input, &file.input)?;
    let max = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ch = &file.channels;
    let raw = RawParams {
        alpha: input[0],
        beta: input[1],
        gamma: input[2],
        delta: input[3],
        a: amplitude(&args.a, &ch.a, "a", max)?,
        b: amplitude(&args.b, &ch.b, "b", max)?,
        c: amplitude(&args.c, &ch.c, "c", max)?,
        d: amplitude(&args.d, &ch.d, "d", max)?,
    };
    Ok(RunConfig {
        params: raw.validate()?,
        execution: resolve_execution(
            args.mode.or(file.mode),
            args.shots.or(file.shots),
            args.seed.or(file.seed),
        )?,
        mode_dim: resolve_mode_dim(args.mode_dim.or(file.mode_dim))?,
        output: resolve_output(&args.output, file.format, file.out),
    })
}

fn resolve_mode_dim(n: Option<usize>) -> Result<usize, CliError> {
    let n = n.unwrap_or(DEFAULT_MODE_DIM);
    if n < 2 {
        return Err(CliError::Validation(format!("--mode-dim must be at least 2, got {n}")));
    }
    Ok(n)
}

/// Explicit values win; otherwise `max·i/steps` for `i = 1..=steps`.
fn resolve_grid(
    name: &str,
    values: Option<Vec<f64>>,
    max: Option<f64>,
    steps: Option<usize>,
) -> Result<Vec<f64>, CliError> {
    if let Some(v) = values {
        if v.is_empty() {
            return Err(CliError::Parse(format!("--{name}-values is empty")));
        }
        return Ok(v);
    }
    let max = max.unwrap_or(DEFAULT_GRID_MAX);
    let steps = steps.unwrap_or(DEFAULT_GRID_STEPS);
    if steps == 0 {
        return Err(CliError::Parse(format!("--{name}-steps must be at least 1")));
    }
    if !max.is_finite() || max <= 0.0 {
        return Err(CliError::Validation(format!("--{name}-max must be positive, got {max}")));
    }
    Ok((1..=steps).map(|i| max * i as f64 / steps as f64).collect())
}

fn check_weights(name: &str, grid: &[f64]) -> Result<(), CliError> {
    for &w in grid {
        if !(w.is_finite() && w > 0.0 && w <= 0.5) {
            return Err(CliError::Validation(format!(
                "{name} = {w} outside (0, 0.5]"
            )));
        }
    }
    Ok(())
}

pub fn resolve_sweep(args: &SweepArgs) -> Result<SweepConfig, CliError> {
    let file = match &args.config {
        Some(path) => {
            let f: SweepFile = load(path)?;
            check_schema(f.schema_version)?;
            f
        }
        None => SweepFile::default(),
    };
    let input = resolve_input(&args.input, &file.input)?;
    let base = file.thetas.unwrap_or_default();
    let thetas = [
        args.theta1.unwrap_or(base[0]),
        args.theta2.unwrap_or(base[1]),
        args.theta3.unwrap_or(base[2]),
        args.theta4.unwrap_or(base[3]),
    ];
    let b2 = resolve_grid(
        "b2",
        args.b2_values.clone().or(file.b2.values),
        args.b2_max.or(file.b2.max),
        args.b2_steps.or(file.b2.steps),
    )?;
    let d2 = resolve_grid(
        "d2",
        args.d2_values.clone().or(file.d2.values),
        args.d2_max.or(file.d2.max),
        args.d2_steps.or(file.d2.steps),
    )?;
    check_weights("b2", &b2)?;
    check_weights("d2", &d2)?;
    // Validate input and phases once up front.
    ProtocolParams::from_weights(input, b2[0], d2[0], thetas)?;
    Ok(SweepConfig {
        input,
        thetas,
        b2,
        d2,
        execution: resolve_execution(
            args.mode.or(file.mode),
            args.shots.or(file.shots),
            args.seed.or(file.seed),
        )?,
        mode_dim: resolve_mode_dim(args.mode_dim.or(file.mode_dim))?,
        output: resolve_output(&args.output, file.format, file.out),
    })
}
