//! Command-line front end: TOML configs in, CSV/JSON files and a
//! `manifest.json` out.
//!
//! Exit codes: [`EXIT_OK`], [`EXIT_VERIFICATION`] when a run completed but an
//! internal check failed, [`EXIT_CONFIG`] for anything wrong with the input.
//! Nothing is written when the config is rejected.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};

pub use commands::{
    run_approx, run_gap, run_report, run_sieve, run_strongapprox, run_walk, ApproxOutput, Execution, GapOutput, GapRow,
    LarsenPinkRow, ReportOutput, SieveOutput, TargetFit, WalkOutput,
};
pub use config::{
    ApproxParams, BatterySpec, Command, ExperimentConfig, GapParams, Generators, MethodChoice, ReportParams,
    ScanParams, Schedule, SetSpec, SieveParams, TargetSpec, VarietySpec, WalkParams,
};
pub use output::{fmt_f64, sha256_hex, write_files, FileDigest, OutputFile, RunManifest, StageTiming, MANIFEST_FILE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cayley-sieve",
    version,
    about = "Expansion and sieve experiments over SL_d(F_p)"
)]
pub struct Cli {
    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (0 or absent: one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Overrides the output directory in the config.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ConfigArg {
    /// TOML experiment config.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Spectral gap of Cayley graphs mod p.
    Gap(ConfigArg),
    /// Monte Carlo walk with per-prime target frequencies.
    Walk(ConfigArg),
    /// Product sets, covering constant, tripling and energy.
    Approx(ConfigArg),
    /// Group sieve over a battery of primes.
    Sieve(ConfigArg),
    /// Surjectivity of reductions over a prime range.
    Strongapprox(ConfigArg),
    /// Re-checks the digests in an output directory.
    Report(ConfigArg),
}

impl Sub {
    fn parts(&self) -> (Command, Option<&Path>) {
        let (c, a) = match self {
            Sub::Gap(a) => (Command::Gap, a),
            Sub::Walk(a) => (Command::Walk, a),
            Sub::Approx(a) => (Command::Approx, a),
            Sub::Sieve(a) => (Command::Sieve, a),
            Sub::Strongapprox(a) => (Command::Strongapprox, a),
            Sub::Report(a) => (Command::Report, a),
        };
        (c, a.config.as_deref())
    }
}

/// Result of a complete run, after files are on disk.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub execution: Execution,
    pub manifest: Option<RunManifest>,
}

/// Runs one command against an already parsed config. `base` resolves
/// relative paths inside the config.
pub fn execute(command: Command, cfg: &ExperimentConfig, base: &Path, out_dir: &Path) -> Result<Execution> {
    if let Some(c) = cfg.command {
        if c != command {
            return Err(Error::InvalidParameter(format!(
                "config is for {:?} but the subcommand is {:?}",
                c.as_str(),
                command.as_str()
            )));
        }
    }
    match command {
        Command::Gap => run_gap(cfg, base),
        Command::Walk => run_walk(cfg, base),
        Command::Approx => run_approx(cfg, base),
        Command::Sieve => run_sieve(cfg, base),
        Command::Strongapprox => run_strongapprox(cfg, base),
        Command::Report => run_report(cfg, base, out_dir),
    }
}

/// Executes, then writes outputs and (except for `report`) the manifest.
pub fn run_to_dir(command: Command, cfg: &ExperimentConfig, base: &Path, out_dir: &Path) -> Result<RunOutcome> {
    let start = Instant::now();
    let execution = execute(command, cfg, base, out_dir)?;
    let outputs = write_files(out_dir, &execution.files)?;
    let manifest = if command == Command::Report {
        None
    } else {
        let m = RunManifest {
            command: command.as_str().into(),
            config_hash: sha256_hex(cfg.canonical().as_bytes()),
            version: env!("CARGO_PKG_VERSION").into(),
            wall_millis: start.elapsed().as_secs_f64() * 1e3,
            stages: execution.stages.clone(),
            outputs,
        };
        write_files(out_dir, &[OutputFile::json(MANIFEST_FILE, &m)?])?;
        Some(m)
    };
    Ok(RunOutcome {
        out_dir: out_dir.to_path_buf(),
        execution,
        manifest,
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) => EXIT_VERIFICATION,
        _ => EXIT_CONFIG,
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let (command, config_path) = cli.command.parts();
    let (mut cfg, base) = match config_path {
        Some(path) => match ExperimentConfig::load(path) {
            Ok(cfg) => (cfg, path.parent().map(Path::to_path_buf).unwrap_or_default()),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_CONFIG;
            }
        },
        None if command == Command::Report => (
            ExperimentConfig::parse("").expect("empty config parses"),
            PathBuf::from("."),
        ),
        None => {
            eprintln!("error: {} needs --config", command.as_str());
            return EXIT_CONFIG;
        }
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| cfg.out_dir.as_ref().map(|d| base.join(d)))
        .unwrap_or_else(|| PathBuf::from("out"));
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    match pool.install(|| run_to_dir(command, &cfg, &base, &out_dir)) {
        Ok(outcome) => {
            for w in &outcome.execution.warnings {
                eprintln!("warning: {w}");
            }
            if outcome.execution.verified {
                EXIT_OK
            } else {
                eprintln!("verification failed; see {}", out_dir.display());
                EXIT_VERIFICATION
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
