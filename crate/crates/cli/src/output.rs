//! CSV and JSON rendering. Floats use the shortest round-trip form,
//! switching to exponent notation for very small or large magnitudes.

use serde::Serialize;

use iontrap_teleport::protocol::RunMode;

use crate::args::Format;
use crate::commands::{RunReport, SweepReport, VerifyReport, CI_Z};
use crate::CliError;

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt<T: std::fmt::Debug>(x: Option<T>) -> String {
    x.map(|v| format!("{v:?}")).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.into()))?;
    s.push('\n');
    Ok(s)
}

/// Summary block (`quantity,value`), a blank line, then one row per Alice outcome.
pub fn run_csv(r: &RunReport) -> Result<String, CliError> {
    let res = &r.result;
    let mut summary: Vec<(&str, String)> = vec![
        ("mode", String::new()),
        ("mode_dim", r.mode_dim.to_string()),
        ("gt1", num(r.schedule.gt1)),
        ("gt2", num(r.schedule.gt2)),
        ("phi", num(r.schedule.phi)),
        ("total_success", num(res.total_success)),
        ("analytic_success", num(res.analytic_success)),
        ("abs_dev", num(r.abs_dev)),
    ];
    match res.mode {
        RunMode::Enumerate => summary[0].1 = "enumerate".into(),
        RunMode::Sampled { shots, seed, successes } => {
            summary[0].1 = "sample".into();
            let (lo, hi) = r.ci95.unwrap_or_default();
            summary.extend([
                ("shots", shots.to_string()),
                ("seed", seed.to_string()),
                ("successes", successes.to_string()),
                ("empirical_rate", opt(r.empirical_rate)),
                ("ci_z", num(CI_Z)),
                ("ci_low", num(lo)),
                ("ci_high", num(hi)),
            ]);
        }
    }

    let mut head = csv::Writer::from_writer(Vec::new());
    head.write_record(["quantity", "value"]).map_err(csv_err)?;
    for (k, v) in &summary {
        head.write_record([*k, v.as_str()]).map_err(csv_err)?;
    }
    let mut out = finish(head)?;
    out.push('\n');

    let sampled = matches!(res.mode, RunMode::Sampled { .. });
    let mut table = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "outcome",
        "branch_probability",
        "success_probability",
        "joint_success",
        "fidelity",
        "residual_phase",
    ];
    if sampled {
        header.extend(["shots", "successes"]);
    }
    table.write_record(&header).map_err(csv_err)?;
    for b in &res.per_branch {
        let mut row = vec![
            b.outcome.to_string(),
            num(b.probability),
            num(b.success_probability),
            num(b.joint_success),
            opt(b.fidelity),
            opt(b.residual_phase),
        ];
        if sampled {
            row.extend([opt(b.shots), opt(b.successes)]);
        }
        table.write_record(&row).map_err(csv_err)?;
    }
    out.push_str(&finish(table)?);
    Ok(out)
}

pub fn sweep_csv(r: &SweepReport) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["b2", "d2", "success_enum", "success_analytic", "abs_dev"];
    if r.sampled {
        header.extend(["success_sampled", "shots"]);
    }
    w.write_record(&header).map_err(csv_err)?;
    for row in &r.rows {
        let mut rec = vec![
            num(row.b2),
            num(row.d2),
            num(row.success_enum),
            num(row.success_analytic),
            num(row.abs_dev),
        ];
        if r.sampled {
            rec.extend([opt(row.success_sampled), opt(row.shots)]);
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    finish(w)
}

pub fn verify_csv(r: &VerifyReport) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "trial",
        "b2",
        "d2",
        "total_success",
        "analytic_success",
        "abs_dev",
        "branch_sum_dev",
        "min_fidelity",
        "pass",
        "error",
    ])
    .map_err(csv_err)?;
    for row in &r.rows {
        w.write_record([
            row.trial.to_string(),
            num(row.b2),
            num(row.d2),
            opt(row.total_success),
            num(row.analytic_success),
            opt(row.abs_dev),
            opt(row.branch_sum_dev),
            opt(row.min_fidelity),
            row.pass.to_string(),
            row.error.clone().unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

pub fn render_run(r: &RunReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => run_csv(r),
        Format::Json => json(r),
    }
}

pub fn render_sweep(r: &SweepReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => sweep_csv(r),
        Format::Json => json(r),
    }
}

pub fn render_verify(r: &VerifyReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => verify_csv(r),
        Format::Json => json(r),
    }
}
