//! Command-line front end for `qwplab-core`: uncertainty histories as CSV,
//! seeded oracle verification, parameter scans and figure data.

pub mod cases;
pub mod config;
pub mod csvfmt;
pub mod error;
pub mod evolve;
pub mod figures;
pub mod oracles;
pub mod scan;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{load_defaults, RunArgs, RunConfig};
use error::{CliError, CliResult, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
use scan::{ScanParam, ScanSpec};
use verify::Suite;

#[derive(Debug, Parser)]
#[command(name = "qwplab", version, about = "Uncertainty dynamics of wave packets in quadratic potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve (Δx², Δp², Δ_xp) and write a CSV time series
    #[command(allow_negative_numbers = true)]
    Evolve(RunArgs),
    /// Run a seeded verification suite
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Tabulate narrowing times and chirp extrema over a parameter range
    #[command(allow_negative_numbers = true)]
    Scan {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum)]
        param: ScanParam,
        /// Range start; a trailing U scales by the invariant U (e.g. 1.1U)
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Write the three figure data sets and gnuplot scripts
    Figures {
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

const DEFAULT_SEED: u64 = 42;

fn merged(mut args: RunArgs) -> CliResult<RunArgs> {
    let defaults = load_defaults(args.config.as_deref())?;
    args.merge_defaults(&defaults)?;
    Ok(args)
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Evolve(args) => {
            evolve::cmd_evolve(&RunConfig::from_args(&merged(args)?)?)?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite, seed, config } => {
            let seed = match seed {
                Some(s) => s,
                None => match load_defaults(config.as_deref())?.get("seed") {
                    Some(raw) => raw.parse().map_err(|_| CliError::Usage(format!("bad seed {raw:?}")))?,
                    None => DEFAULT_SEED,
                },
            };
            let checks = verify::run_suite(suite, seed)?;
            writeln!(stdout, "suite {suite:?} seed {seed}")?;
            verify::write_report(&checks, &mut *stdout)?;
            Ok(if checks.iter().all(verify::Check::passed) { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Scan { run, param, from, to, points } => {
            let run = merged(run)?;
            let spec = ScanSpec::from_args(&run, param, &from, &to, points)?;
            let rows = scan::scan_rows(&spec)?;
            csvfmt::with_output(run.out.as_deref(), |w| scan::write_scan(param, &rows, w))?;
            Ok(EXIT_OK)
        }
        Command::Figures { out } => {
            for p in figures::cmd_figures(&out)? {
                writeln!(stdout, "wrote {}", p.display())?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code; diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    match dispatch(cli.command, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qwplab: {e}");
            e.exit_code()
        }
    }
}
