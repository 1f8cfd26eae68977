//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a campaign finds violations, 2 on usage,
//! input or I/O errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::channels::{chi_monotonicity_slack, QuantumChannel};
use crate::entropy::holevo_chi;
use crate::error::{Error, Result};
use crate::harness::{run_campaign_with, CampaignConfig, Execution};
use crate::matrix::ComplexMatrix;
use crate::measurements::{default_outcomes, optimize_accessible_info};
use crate::no_go::{cloning_chi_gain, controlled_unitary, disentangle_chi_gain, extract_pointer_state, schmidt_state};
use crate::random::Rng;
use crate::states::{DensityMatrix, Ensemble, PureState};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "holevo", version, about = "Holevo chi, channels and accessible information")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run seeded verification campaigns and write a JSON report.
    Verify(VerifyArgs),
    /// Print the Holevo chi of an ensemble file.
    Chi {
        file: PathBuf,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Apply a channel file to a density-matrix file.
    Apply {
        channel: PathBuf,
        state: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a POVM maximizing the mutual information of an ensemble.
    OptimizePovm(OptimizeArgs),
    /// Print reference values of the built-in demonstrations.
    Demo {
        #[arg(value_enum, default_value_t = Demo::All)]
        name: Demo,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// JSON file with campaign settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    check: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    ensemble_size: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Report file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run every trial on the calling thread.
    #[arg(long)]
    serial: bool,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    file: PathBuf,
    /// Number of POVM outcomes (default: min(d², 2·ensemble size), at least d).
    #[arg(long)]
    outcomes: Option<usize>,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Demo {
    All,
    Bb84Chi,
    AccessibleInfo,
    DepolarizingSlack,
    CloningGain,
    DisentangleGain,
    CnotFactorization,
}

/// Parses `args` (program name first) and runs the command with the process streams.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Like [`cli_main`] but writing to the given streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Verify(args) => verify(args, out),
        Command::Chi { file, json } => {
            let ensemble: Ensemble = read_json(&file)?;
            let report = holevo_chi(&ensemble)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                writeln!(out, "chi = {:.6}", report.chi)?;
                writeln!(out, "mixture_entropy = {:.6}", report.mixture_entropy)?;
                for (i, s) in report.member_entropies.iter().enumerate() {
                    writeln!(out, "member_entropy[{i}] = {s:.6}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Apply { channel, state, out: path } => {
            let channel: QuantumChannel = read_json(&channel)?;
            let rho: DensityMatrix = read_json(&state)?;
            emit(&channel.apply(&rho)?, path.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::OptimizePovm(args) => {
            let ensemble: Ensemble = read_json(&args.file)?;
            let outcomes = args.outcomes.unwrap_or_else(|| default_outcomes(&ensemble));
            let result =
                optimize_accessible_info(&ensemble, outcomes, args.restarts, args.iters, &Rng::new(args.seed, 0))?;
            emit(&result, args.out.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Demo { name } => {
            demo(name, out)?;
            Ok(EXIT_OK)
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => fs::write(p, text + "\n")?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let mut cfg = match &args.config {
        Some(path) => read_json(path)?,
        None => CampaignConfig::default(),
    };
    if let Some(v) = args.check {
        cfg.check = v;
    }
    if let Some(v) = args.dim {
        cfg.dim = v;
    }
    if let Some(v) = args.trials {
        cfg.trials = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.ensemble_size {
        cfg.ensemble_size = v;
    }
    if let Some(v) = args.tolerance {
        cfg.tolerance = v;
    }
    let report = run_campaign_with(&cfg, Execution { serial: args.serial, jobs: args.jobs })?;
    match &args.out {
        Some(path) => {
            emit(&report, Some(path), out)?;
            for c in &report.checks {
                writeln!(
                    out,
                    "{:<28} trials={:<6} min_slack={:+.3e} violations={} errors={}",
                    c.check.name(),
                    c.trials,
                    c.min_slack,
                    c.violations.len(),
                    c.errors.len()
                )?;
            }
        }
        None => emit(&report, None, out)?,
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_VIOLATIONS })
}

fn bb84() -> Ensemble {
    Ensemble::uniform(vec![DensityMatrix::basis(2, 0), PureState::plus().density()]).expect("valid ensemble")
}

fn demo(name: Demo, out: &mut dyn Write) -> Result<()> {
    let all = name == Demo::All;
    let e = bb84();
    if all || name == Demo::Bb84Chi {
        writeln!(out, "bb84_chi = {:.6}", holevo_chi(&e)?.chi)?;
    }
    if all || name == Demo::AccessibleInfo {
        let r = optimize_accessible_info(&e, default_outcomes(&e), 20, 2000, &Rng::new(0, 0))?;
        writeln!(out, "bb84_accessible_info = {:.6}", r.best_mutual_info)?;
        writeln!(out, "bb84_holevo_gap = {:.6}", r.chi_upper_bound - r.best_mutual_info)?;
    }
    if all || name == Demo::DepolarizingSlack {
        let slack = chi_monotonicity_slack(&QuantumChannel::depolarizing(2, 0.5)?, &e)?;
        writeln!(out, "depolarizing_0.5_slack = {slack:.6}")?;
    }
    if all || name == Demo::CloningGain {
        writeln!(out, "bb84_cloning_gain = {:.6}", cloning_chi_gain(&e)?)?;
    }
    if all || name == Demo::DisentangleGain {
        let psi = schmidt_state(2, &[0.9, 0.1])?;
        writeln!(out, "disentangle_gain_0.9 = {:.6}", disentangle_chi_gain(&psi, (2, 2))?)?;
    }
    if all || name == Demo::CnotFactorization {
        let cnot = controlled_unitary(2, &[ComplexMatrix::identity(2), ComplexMatrix::pauli_x()])?;
        for (label, phi) in [("|0>", PureState::basis(2, 0)), ("|+>", PureState::plus())] {
            let r = extract_pointer_state(&cnot, &phi, &PureState::basis(2, 0), (2, 2))?;
            writeln!(out, "cnot_on_{label}: factorizes = {}, fidelity = {:.6}", r.factorizes, r.fidelity)?;
        }
    }
    Ok(())
}
