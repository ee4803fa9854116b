use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use iontrap_teleport_cli::args::{Cli, Command, Format};
use iontrap_teleport_cli::{commands, config, output, CliError};

fn emit(body: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run(args) => {
            let cfg = config::resolve_run(&args)?;
            let report = commands::run(&cfg)?;
            emit(&output::render_run(&report, cfg.output.format)?, cfg.output.out.as_deref())
        }
        Command::Sweep(args) => {
            let cfg = config::resolve_sweep(&args)?;
            let report = commands::sweep(&cfg)?;
            emit(&output::render_sweep(&report, cfg.output.format)?, cfg.output.out.as_deref())
        }
        Command::Verify(args) => {
            let report = commands::verify(args.seed, args.trials, args.mode_dim)?;
            let format = args.output.format.unwrap_or(Format::Csv);
            emit(&output::render_verify(&report, format)?, args.output.out.as_deref())?;
            eprintln!("{}", report.summary());
            if report.failed > 0 {
                return Err(CliError::Invariant(format!(
                    "{} of {} trials violated an invariant",
                    report.failed, report.trials
                )));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(CliError::Io(std::io::Error::other(e))),
        },
        None => dispatch(cli.command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
