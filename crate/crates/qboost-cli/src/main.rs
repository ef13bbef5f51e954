//! `qboost` command-line front end.

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{FileValues, GlobalFlags, RunConfig, PRECISION_ENV};
use qboost::coupling::tables::Variant;
use std::path::PathBuf;
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn lib(e: impl std::fmt::Display) -> Self {
        CliError::Compute(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "qboost", version, about = "Quantum Lorentz boosts: metrics, representations and q-Clebsch-Gordan tables")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Deformation parameter, exact rational ("3/2") or decimal.
    #[arg(long, global = true, allow_hyphen_values = true)]
    q: Option<String>,
    /// Working precision in bits (default from QBOOST_PRECISION, else 128).
    #[arg(long, global = true)]
    precision: Option<String>,
    /// Replaces every nonzero numeric tolerance.
    #[arg(long, global = true)]
    tolerance: Option<String>,
    /// Largest block label.
    #[arg(long, global = true)]
    lmax: Option<String>,
    /// json, csv or pretty.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Directory for artifact files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// File of key=value lines; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Sign convention tag.
    #[arg(long, global = true)]
    convention: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Spinor metric, R-matrices, Pauli matrices, Minkowski metric and Lorentz R-matrices.
    Metrics,
    /// Generator matrices on one block and the relation checks.
    Rep {
        #[arg(long)]
        l: Option<String>,
        #[arg(long)]
        generator: Option<String>,
        /// relations or none.
        #[arg(long)]
        suite: Option<String>,
    },
    /// q-Clebsch-Gordan table of l2 x l1.
    Cg {
        #[arg(long)]
        l2: Option<String>,
        #[arg(long)]
        l1: Option<String>,
        /// Extrapolate to q = 1.
        #[arg(long)]
        limit: bool,
    },
    /// Full suite across q samples and blocks.
    Verify {
        /// Comma-separated q values.
        #[arg(long)]
        q_samples: Option<String>,
        /// Largest l2, l1 in coupling checks.
        #[arg(long)]
        coupling_lmax: Option<String>,
        /// Treat printed-form deviations as failures.
        #[arg(long)]
        strict_literal: bool,
        #[arg(long)]
        golden_dir: Option<PathBuf>,
    },
    /// Comparison with the golden coupling tables.
    Tables {
        /// corrected or literal.
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        check_normalization: bool,
        #[arg(long)]
        golden_dir: Option<PathBuf>,
    },
}

fn required(v: Option<String>, name: &str) -> Result<String, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{}", name)))
}

fn run(cli: Cli) -> Result<(output::Artifacts, bool), CliError> {
    let file = match &cli.global.config {
        Some(p) => FileValues::load(p)?,
        None => FileValues::default(),
    };
    let g = cli.global;
    let flags = GlobalFlags { q: g.q, precision: g.precision, tolerance: g.tolerance, lmax: g.lmax, format: g.format, out: g.out, convention: g.convention };
    let cfg = RunConfig::resolve(flags, &file, std::env::var(PRECISION_ENV).ok())?;
    let mut strict = false;
    let art = match cli.command {
        Command::Metrics => commands::metrics(&cfg)?,
        Command::Rep { l, generator, suite } => commands::rep(
            &cfg,
            commands::RepArgs {
                l: required(file.pick(l, "l"), "l")?,
                generator: file.pick(generator, "generator"),
                suite: file.pick(suite, "suite").unwrap_or_else(|| "relations".into()),
            },
        )?,
        Command::Cg { l2, l1, limit } => commands::cg(
            &cfg,
            commands::CgArgs { l2: required(file.pick(l2, "l2"), "l2")?, l1: required(file.pick(l1, "l1"), "l1")?, limit: limit || file.flag("limit")? },
        )?,
        Command::Verify { q_samples, coupling_lmax, strict_literal, golden_dir } => {
            strict = strict_literal || file.flag("strict-literal")?;
            commands::verify(
                &cfg,
                commands::VerifyArgs {
                    q_samples: file.pick(q_samples, "q-samples"),
                    coupling_lmax: file.pick(coupling_lmax, "coupling-lmax"),
                    golden_dir: golden_dir.or_else(|| file.get("golden-dir").map(PathBuf::from)),
                },
            )?
        }
        Command::Tables { variant, check_normalization, golden_dir } => {
            let variant: Variant = file.pick(variant, "variant").unwrap_or_else(|| "corrected".into()).parse().map_err(CliError::Usage)?;
            commands::tables(
                &cfg,
                commands::TablesArgs {
                    variant,
                    check_normalization: check_normalization || file.flag("check-normalization")?,
                    golden_dir: golden_dir.or_else(|| file.get("golden-dir").map(PathBuf::from)),
                },
            )?
        }
    };
    if let Some(dir) = &cfg.out {
        output::write_files(dir, &art.files)?;
    }
    Ok((art, strict))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((art, strict)) => {
            print!("{}", art.stdout);
            if art.report.passed(strict) {
                ExitCode::SUCCESS
            } else {
                let groups = art.report.deviation_groups();
                if strict && !groups.is_empty() {
                    eprintln!("literal-form deviations ({}):", groups.len());
                    for (g, entries) in &groups {
                        eprintln!("  {} ({} entries)", g, entries.len());
                    }
                }
                let fails = art.report.summary().fail;
                if fails > 0 {
                    eprintln!("{} check(s) failed", fails);
                }
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
