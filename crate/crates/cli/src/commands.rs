//! The `run`, `sweep` and `verify` commands.

use rayon::prelude::*;
use serde::Serialize;

use iontrap_teleport::measure::RngSeed;
use iontrap_teleport::protocol::{pulse_times, random_params, run_enumerate, run_sampled};
use iontrap_teleport::{ProtocolParams, ProtocolResult, PulseSchedule};

use crate::amplitude::format_complex;
use crate::config::{Execution, RunConfig, SweepConfig};
use crate::{CliError, SCHEMA_VERSION};

/// Tolerance for every `verify` invariant.
pub const VERIFY_TOL: f64 = 1e-10;

/// z-score of the reported sampling interval.
pub const CI_Z: f64 = 1.96;

fn execute(params: &ProtocolParams, execution: Execution, mode_dim: usize) -> Result<ProtocolResult, CliError> {
    Ok(match execution {
        Execution::Enumerate => run_enumerate(params, mode_dim)?,
        Execution::Sample { shots, seed } => run_sampled(params, shots, seed, mode_dim)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsView {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub delta: String,
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
}

impl From<&ProtocolParams> for ParamsView {
    fn from(p: &ProtocolParams) -> Self {
        let r = p.raw();
        Self {
            alpha: format_complex(r.alpha),
            beta: format_complex(r.beta),
            gamma: format_complex(r.gamma),
            delta: format_complex(r.delta),
            a: format_complex(r.a),
            b: format_complex(r.b),
            c: format_complex(r.c),
            d: format_complex(r.d),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub mode_dim: usize,
    pub params: ParamsView,
    pub schedule: PulseSchedule,
    pub abs_dev: f64,
    pub empirical_rate: Option<f64>,
    pub ci95: Option<(f64, f64)>,
    pub result: ProtocolResult,
}

pub fn run(cfg: &RunConfig) -> Result<RunReport, CliError> {
    let result = execute(&cfg.params, cfg.execution, cfg.mode_dim)?;
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        command: "run",
        mode_dim: cfg.mode_dim,
        params: ParamsView::from(&cfg.params),
        schedule: pulse_times(&cfg.params),
        abs_dev: result.abs_deviation(),
        empirical_rate: result.empirical_rate(),
        ci95: result.confidence_interval(CI_Z),
        result,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub b2: f64,
    pub d2: f64,
    pub success_enum: f64,
    pub success_analytic: f64,
    pub abs_dev: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_sampled: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub mode_dim: usize,
    pub input: [String; 4],
    pub thetas: [f64; 4],
    #[serde(skip)]
    pub sampled: bool,
    pub rows: Vec<SweepRow>,
}

/// Grid point `i` (row-major) samples with seed `seed + i`.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepReport, CliError> {
    let points: Vec<(f64, f64)> = cfg
        .b2
        .iter()
        .flat_map(|&b2| cfg.d2.iter().map(move |&d2| (b2, d2)))
        .collect();
    let rows = points
        .par_iter()
        .enumerate()
        .map(|(i, &(b2, d2))| sweep_point(cfg, i as u64, b2, d2))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepReport {
        schema_version: SCHEMA_VERSION,
        command: "sweep",
        mode_dim: cfg.mode_dim,
        input: cfg.input.map(format_complex),
        thetas: cfg.thetas,
        sampled: matches!(cfg.execution, Execution::Sample { .. }),
        rows,
    })
}

fn sweep_point(cfg: &SweepConfig, index: u64, b2: f64, d2: f64) -> Result<SweepRow, CliError> {
    let params = ProtocolParams::from_weights(cfg.input, b2, d2, cfg.thetas)?;
    let exact = run_enumerate(&params, cfg.mode_dim)?;
    let (success_sampled, shots) = match cfg.execution {
        Execution::Enumerate => (None, None),
        Execution::Sample { shots, seed } => {
            let r = run_sampled(&params, shots, seed.wrapping_add(index), cfg.mode_dim)?;
            (r.empirical_rate(), Some(shots))
        }
    };
    Ok(SweepRow {
        b2,
        d2,
        success_enum: exact.total_success,
        success_analytic: exact.analytic_success,
        abs_dev: exact.abs_deviation(),
        success_sampled,
        shots,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub trial: u64,
    pub b2: f64,
    pub d2: f64,
    pub total_success: Option<f64>,
    pub analytic_success: f64,
    pub abs_dev: Option<f64>,
    pub branch_sum_dev: Option<f64>,
    /// Smallest fidelity over branches that can succeed.
    pub min_fidelity: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub seed: u64,
    pub trials: u64,
    pub mode_dim: usize,
    pub tolerance: f64,
    pub passed: u64,
    pub failed: u64,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn summary(&self) -> String {
        format!("verify: {} passed, {} failed", self.passed, self.failed)
    }
}

/// Trial `k` draws its parameters from stream `(seed, k)`.
pub fn verify(seed: u64, trials: u64, mode_dim: usize) -> Result<VerifyReport, CliError> {
    if trials == 0 {
        return Err(CliError::Parse("--trials must be at least 1".into()));
    }
    if mode_dim < 2 {
        return Err(CliError::Validation(format!("--mode-dim must be at least 2, got {mode_dim}")));
    }
    let rows: Vec<VerifyRow> = (0..trials)
        .into_par_iter()
        .map(|k| verify_trial(seed, k, mode_dim))
        .collect();
    let passed = rows.iter().filter(|r| r.pass).count() as u64;
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        seed,
        trials,
        mode_dim,
        tolerance: VERIFY_TOL,
        passed,
        failed: trials - passed,
        rows,
    })
}

fn verify_trial(seed: u64, trial: u64, mode_dim: usize) -> VerifyRow {
    let params: ProtocolParams = random_params(&mut RngSeed::new(seed, trial).rng());
    let mut row = VerifyRow {
        trial,
        b2: params.b2(),
        d2: params.d2(),
        total_success: None,
        analytic_success: params.b2() * params.d2() * 4.0,
        abs_dev: None,
        branch_sum_dev: None,
        min_fidelity: None,
        pass: false,
        error: None,
    };
    let result = match run_enumerate(&params, mode_dim) {
        Ok(r) => r,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.analytic_success = result.analytic_success;
    row.total_success = Some(result.total_success);
    row.abs_dev = Some(result.abs_deviation());
    row.branch_sum_dev = Some((result.branch_probability_sum() - 1.0).abs());

    let mut fidelity_ok = true;
    for b in result.per_branch.iter().filter(|b| b.joint_success > 0.0) {
        match b.fidelity {
            Some(f) => {
                row.min_fidelity = Some(row.min_fidelity.map_or(f, |m: f64| m.min(f)));
                fidelity_ok &= 1.0 - f <= VERIFY_TOL;
            }
            None => {
                fidelity_ok = false;
                row.error = Some(format!("branch {} has no output state", b.outcome));
            }
        }
    }
    row.pass = fidelity_ok
        && result.abs_deviation() <= VERIFY_TOL
        && (result.branch_probability_sum() - 1.0).abs() <= VERIFY_TOL;
    row
}

