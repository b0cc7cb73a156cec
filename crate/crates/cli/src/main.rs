use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jqf_cli::{analytic_table, execute, parse_config, CliError, Command};

/// Driven transmon with a Josephson quantum filter: simulations and calibrations.
#[derive(Parser)]
#[command(name = "jqf-sim", version)]
struct Cli {
    /// Worker threads for sweeps (default: number of logical cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration
    #[arg(long)]
    config: PathBuf,

    /// Output directory (overrides `output.dir` in the config)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// One time evolution, written as a trajectory CSV
    Simulate(RunArgs),
    /// cw drive frequency maximizing the peak excited population
    Resonance(RunArgs),
    /// Resonance or optimal pulse across anharmonicities
    ScanAlpha(RunArgs),
    /// Optimal Gaussian pi pulse (frequency and amplitude)
    OptimizePulse(RunArgs),
    /// Optimal pulse across pulse widths, full and two-level models
    SweepSigma(RunArgs),
    /// cw ramp against Gaussian pulse at equal amplitude
    Compare(RunArgs),
    /// Fixed pulse replayed at several filter truncations
    Njqf(RunArgs),
    /// Closed-form calibration table
    Analytic {
        /// Qubit frequency (GHz)
        #[arg(long)]
        omega: f64,
        /// Anharmonicity (GHz, negative for a transmon)
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Rabi frequency sqrt(2 gamma1) E / 2pi (GHz)
        #[arg(long)]
        rabi: f64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--jobs {n}: {e}")))?;
    }
    let (cmd, args) = match cli.command {
        Cmd::Analytic { omega, alpha, rabi } => {
            print!("{}", analytic_table(omega, alpha, rabi)?);
            return Ok(());
        }
        Cmd::Simulate(a) => (Command::Simulate, a),
        Cmd::Resonance(a) => (Command::Resonance, a),
        Cmd::ScanAlpha(a) => (Command::ScanAlpha, a),
        Cmd::OptimizePulse(a) => (Command::OptimizePulse, a),
        Cmd::SweepSigma(a) => (Command::SweepSigma, a),
        Cmd::Compare(a) => (Command::Compare, a),
        Cmd::Njqf(a) => (Command::Njqf, a),
    };
    let cfg = parse_config(&args.config)?;
    let out = args
        .out
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| Path::new("out").join(cmd.name()));
    log::info!("{} -> {}", cmd.name(), out.display());
    let outcome = execute(cmd, &cfg, &out)?;
    println!("{}", outcome.summary);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("JQF_SIM_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.machine_line());
            ExitCode::FAILURE
        }
    }
}
