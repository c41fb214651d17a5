mod args;
mod error;
mod job;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;
use job::Job;
use output::RunManifest;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }

    let (name, job, out) = match (cli.command, cli.manifest) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("--manifest replaces the subcommand; give one or the other".into()))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "expected a subcommand (gate, entangle, feasibility, sweep) or --manifest".into(),
            ))
        }
        (None, Some(path)) => {
            let m = RunManifest::read(&path)?;
            let out = cli.out.or_else(|| m.outputs.first().cloned());
            (m.command, m.job, out)
        }
        (Some(cmd), None) => {
            let (name, job): (String, Job) = match &cmd {
                Command::Gate(a) => ("gate".into(), job::gate_job(a)?),
                Command::Entangle(a) => ("entangle".into(), job::ent_job(a)?),
                Command::Feasibility { preset } => {
                    ("feasibility".into(), Job::Feasibility { preset: *preset })
                }
                Command::Sweep {
                    figure,
                    common,
                    estimator,
                } => {
                    let name = format!("sweep {}", clap::ValueEnum::to_possible_value(figure)
                        .map(|v| v.get_name().to_string())
                        .unwrap_or_default());
                    (name, job::figure_job(*figure, common, *estimator)?)
                }
            };
            (name, job, cli.out)
        }
    };

    let outcome = job.run()?;
    let report = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    let mut stdout = std::io::stdout().lock();
    match &out {
        Some(path) => {
            let body = match &outcome.csv {
                Some(csv) => csv.clone(),
                None => report.clone() + "\n",
            };
            std::fs::write(path, body)?;
            RunManifest::new(&name, job, path).write(&RunManifest::path_for(path))?;
            writeln!(stdout, "{report}")?;
        }
        None if outcome.is_table => {
            stdout.write_all(outcome.csv.as_deref().unwrap_or_default().as_bytes())?;
        }
        None => writeln!(stdout, "{report}")?,
    }
    Ok(())
}
