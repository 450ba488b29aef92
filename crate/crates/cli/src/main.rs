//! Batch front-end for the dispersion-force library: parse a run
//! configuration, sweep the independent variable, and write CSV or JSON
//! output deterministically.

mod config;
mod error;
mod explain;
mod sweep;
mod tasks;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::{CliError, Result};

/// Dispersion-force calculator for a two-level atom pair in an absorbing
/// dilute gas: pair potentials, radial forces, and geometry-integrated
/// forces with brute-force quadrature cross-checks.
#[derive(Parser)]
#[command(name = "dispersion-kernel", version, arg_required_else_help = true)]
struct Cli {
    /// Print what a task computes, with its governing formulas, and exit.
    #[arg(long, value_name = "TASK")]
    explain: Option<String>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run configuration and write its output file.
    Run {
        /// Path to the run configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Output path, overriding output.path from the configuration.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    if let Some(task) = cli.explain {
        let text = explain::text(&task).ok_or_else(|| {
            CliError::Config(format!(
                "unknown task '{task}' (expected one of {})",
                explain::TASKS.join(", ")
            ))
        })?;
        print_stdout(text);
        print_stdout("\n");
        return Ok(());
    }
    match cli.command {
        Some(Command::Run { config, output }) => run(&config, output),
        None => Err(CliError::Config(
            "nothing to do: pass the run subcommand or --explain <task>".to_string(),
        )),
    }
}

fn run(config_path: &Path, output_flag: Option<PathBuf>) -> Result<()> {
    let text =
        std::fs::read_to_string(config_path).map_err(|e| CliError::io(config_path, e))?;
    let parsed = config::RunConfig::parse(&text)?;
    let path = output_flag
        .or_else(|| parsed.output_path.clone())
        .ok_or_else(|| {
            CliError::Config(
                "no output path: set output.path in the config or pass --output".to_string(),
            )
        })?;
    let threads = sweep::thread_budget(parsed.point_count())?;
    let rendered = tasks::execute(&parsed, threads)?;
    for note in &rendered.notes {
        eprintln!("warning: {note}");
    }
    write_atomic(&path, &rendered.body)?;
    print_stdout(&format!("{}; wrote {}\n", rendered.summary, path.display()));
    Ok(())
}

/// Prints to stdout, swallowing broken-pipe errors so piping through
/// `head` does not abort the process.
fn print_stdout(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

/// Writes the whole body to a sibling temp file, then renames it into
/// place, so a crash never leaves a half-written output.
fn write_atomic(path: &Path, body: &str) -> Result<()> {
    let file_name = path.file_name().ok_or_else(|| {
        CliError::Config(format!("output path '{}' has no file name", path.display()))
    })?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, body).map_err(|e| CliError::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}
