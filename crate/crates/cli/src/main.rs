use std::io::Write as _;
use std::path::PathBuf;
use std::process;

use clap::{Args, Parser, Subcommand};
use pontryagin::spectral::parse_endpoint;
use pontryagin::{Interval, Tolerance};
use pontryagin_cli::commands::{self, Flags};
use pontryagin_cli::sweep::{self, SweepConfig};
use pontryagin_cli::{instance, json, ExitCode, Outcome};

#[derive(Parser)]
#[command(
    name = "pontryagin",
    version,
    about = "Eigenvalue counts in spectral gaps of J-selfadjoint matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Relative rank tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_rel: f64,
    /// Absolute rank tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_abs: f64,
}

#[derive(Args)]
struct IntervalArgs {
    /// Open interval `a,b`; `-inf`/`+inf` allowed. Repeatable; replaces the file's intervals.
    #[arg(long = "interval", value_parser = parse_interval, allow_hyphen_values = true)]
    intervals: Vec<Interval>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectra and per-interval eig/sig/inertia of the operators in an instance file.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        intervals: IntervalArgs,
    },
    /// Check the gap bounds (and embedded expectations) for an instance file.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        intervals: IntervalArgs,
        /// Append the subspace-level witness of the counting argument.
        #[arg(long)]
        witness: bool,
    },
    /// Verify the bounds on a seeded random ensemble and write one CSV row per instance and interval.
    Sweep {
        #[arg(long, default_value = "2-8")]
        dims: String,
        #[arg(long, default_value = "0-2")]
        kappas: String,
        #[arg(long, default_value = "0-3")]
        ranks: String,
        /// Instances per (d, kappa, n) cell.
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        /// Base seed of the ensemble.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination; without it the CSV goes to stdout and the summary to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the built-in fixtures, or print one as an instance file.
    Examples {
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_interval(s: &str) -> Result<Interval, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `a,b`, got {s:?}"))?;
    let end = |t: &str| parse_endpoint(t).ok_or_else(|| format!("invalid endpoint {t:?}"));
    Interval::new(end(a)?, end(b)?).map_err(|e| e.to_string())
}

fn read(path: &PathBuf) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| {
        Outcome::fail(
            ExitCode::Input,
            format!("input error: cannot read {}: {e}", path.display()),
        )
    })
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Outcome> {
    std::fs::write(path, text).map_err(|e| {
        Outcome::fail(
            ExitCode::Input,
            format!("error: cannot write {}: {e}", path.display()),
        )
    })
}

fn run_sweep(cfg: SweepConfig, out: Option<PathBuf>, tol: &Tolerance) -> Outcome {
    let result = sweep::run(&cfg, tol);
    let summary = json::render(&result.summary(&cfg, tol));
    let mut stderr = String::new();
    for v in &result.violations {
        stderr.push_str(&instance::emit(v));
    }
    let code = if result.violations.is_empty() {
        ExitCode::Ok
    } else {
        ExitCode::Violation
    };
    match out {
        Some(path) => {
            if let Err(o) = write_file(&path, &result.csv()) {
                return o;
            }
            Outcome {
                stdout: summary,
                stderr,
                code,
            }
        }
        None => Outcome {
            stdout: result.csv(),
            stderr: summary + &stderr,
            code,
        },
    }
}

fn dispatch(cli: Cli) -> Outcome {
    let tol = match Tolerance::new(cli.tol_rel, cli.tol_abs) {
        Ok(t) => t,
        Err(e) => return Outcome::fail(ExitCode::Input, format!("input error: {e}")),
    };
    match cli.command {
        Command::Analyze { file, intervals } => match read(&file) {
            Ok(text) => commands::analyze(
                &text,
                &Flags {
                    tol,
                    intervals: intervals.intervals,
                    witness: false,
                },
            ),
            Err(o) => o,
        },
        Command::Verify {
            file,
            intervals,
            witness,
        } => match read(&file) {
            Ok(text) => commands::verify(
                &text,
                &Flags {
                    tol,
                    intervals: intervals.intervals,
                    witness,
                },
            ),
            Err(o) => o,
        },
        Command::Sweep {
            dims,
            kappas,
            ranks,
            seeds,
            seed,
            out,
        } => {
            let parsed = (|| {
                Ok::<_, String>(SweepConfig {
                    dims: sweep::parse_range(&dims)?,
                    kappas: sweep::parse_range(&kappas)?,
                    ranks: sweep::parse_range(&ranks)?,
                    seeds,
                    base_seed: seed,
                })
            })();
            match parsed {
                Ok(cfg) => run_sweep(cfg, out, &tol),
                Err(e) => Outcome::fail(ExitCode::Input, format!("input error: {e}")),
            }
        }
        Command::Examples { name, out } => {
            let outcome = commands::examples(name.as_deref(), &tol);
            match (out, outcome.code) {
                (Some(path), ExitCode::Ok) => match write_file(&path, &outcome.stdout) {
                    Ok(()) => Outcome::ok(String::new()),
                    Err(o) => o,
                },
                _ => outcome,
            }
        }
    }
}

fn main() {
    let outcome = dispatch(Cli::parse());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    process::exit(outcome.code as i32);
}
