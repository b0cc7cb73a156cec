//! Subcommand runners. Each writes its CSVs into the output directory and
//! returns a one-line summary; [`execute`] adds the run manifest.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use jqf_core::analytic::calibration_table;
use jqf_core::experiments::{
    compare_cw_pulse, cw_horizon, default_freq_bracket, find_resonance_cw, gaussian_pulse, measurement_time,
    njqf_study, optimize_pulse, scan_alpha_cw, scan_alpha_pulse, sweep_sigma, two_level_baseline, Provenance,
    PulseBrackets, ScanResult, ScanRow, STATIONARITY_WINDOW,
};
use jqf_core::integrator::{evolve, max_p1, suggest_dt};
use jqf_core::units::{angular_to_ghz, angular_to_mhz, ghz_to_angular};
use jqf_core::{SystemModel, Trajectory};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Resonance,
    ScanAlpha,
    OptimizePulse,
    SweepSigma,
    Compare,
    Njqf,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Resonance => "resonance",
            Command::ScanAlpha => "scan-alpha",
            Command::OptimizePulse => "optimize-pulse",
            Command::SweepSigma => "sweep-sigma",
            Command::Compare => "compare",
            Command::Njqf => "njqf",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Single line of `key=value` pairs for stdout.
    pub summary: String,
    pub files: Vec<PathBuf>,
}

/// Runs `cmd` and writes its outputs plus `manifest.txt` into `out_dir`.
///
/// A sweep with failed points still writes the rows that succeeded and the
/// manifest before returning [`CliError::PartialSweep`].
pub fn execute(cmd: Command, cfg: &RunConfig, out_dir: &Path) -> Result<Outcome, CliError> {
    if let Some(name) = &cfg.experiment.name {
        if name != cmd.name() {
            return Err(CliError::Usage(format!(
                "config describes experiment \"{name}\" but subcommand is \"{}\"",
                cmd.name()
            )));
        }
    }
    fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let start = Instant::now();
    let mut files = Vec::new();
    let result = match cmd {
        Command::Simulate => simulate(cfg, out_dir, &mut files),
        Command::Resonance => resonance(cfg, out_dir, &mut files),
        Command::ScanAlpha => scan_alpha(cfg, out_dir, &mut files),
        Command::OptimizePulse => optimize(cfg, out_dir, &mut files),
        Command::SweepSigma => sigma_sweep(cfg, out_dir, &mut files),
        Command::Compare => compare(cfg, out_dir, &mut files),
        Command::Njqf => njqf(cfg, out_dir, &mut files),
    };
    let wall = start.elapsed().as_secs_f64();
    let status = match &result {
        Ok(_) => "ok".to_string(),
        Err(e) => e.machine_line(),
    };
    let manifest = out_dir.join("manifest.txt");
    write_manifest(&manifest, cmd, cfg, wall, &status, &files)?;
    let summary = result?;
    files.push(manifest);
    Ok(Outcome { summary, files })
}

fn write_manifest(path: &Path, cmd: Command, cfg: &RunConfig, wall: f64, status: &str, files: &[PathBuf]) -> Result<(), CliError> {
    let mut m = String::new();
    let _ = writeln!(m, "tool = jqf-sim {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(m, "command = {}", cmd.name());
    let _ = writeln!(m, "status = {status}");
    let _ = writeln!(m, "wall_time_s = {wall:.3}");
    let _ = writeln!(m, "config_sha256 = {}", Provenance::of(&cfg.source).config_hash);
    for f in files {
        let _ = writeln!(m, "output = {}", f.file_name().map_or_else(|| f.display().to_string(), |n| n.to_string_lossy().into_owned()));
    }
    let _ = writeln!(m, "--- config ---");
    m.push_str(&cfg.source);
    if !cfg.source.ends_with('\n') {
        m.push('\n');
    }
    fs::write(path, m).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_trajectory(traj: &Trajectory, path: PathBuf, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let mut w = create(&path)?;
    traj.write_csv(&mut w).and_then(|_| w.flush())?;
    files.push(path);
    Ok(())
}

/// Writes the rows that succeeded, then reports any failed points.
fn write_scan(scan: &ScanResult, path: PathBuf, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let mut w = create(&path)?;
    scan.write_csv(&mut w).and_then(|_| w.flush())?;
    files.push(path);
    match scan.first_failure() {
        Some((param, err)) => Err(CliError::PartialSweep {
            failed: scan.failures.len(),
            total: scan.failures.len() + scan.rows.len(),
            param: *param,
            source: err.clone(),
        }),
        None => Ok(()),
    }
}

fn single_row(cfg: &RunConfig, row: ScanRow) -> ScanResult {
    ScanResult { rows: vec![row], failures: vec![], provenance: Provenance::of(&cfg.source) }
}

fn require_rabi(cfg: &RunConfig, cmd: &str) -> Result<f64, CliError> {
    if cfg.drive.rabi > 0.0 {
        Ok(cfg.drive.rabi)
    } else {
        Err(CliError::Usage(format!("{cmd} needs drive.amplitude_mhz > 0")))
    }
}

fn rabi_of(model: &SystemModel, e_amp: f64) -> f64 {
    (2.0 * model.specs()[0].gamma).sqrt() * e_amp
}

fn simulate(cfg: &RunConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<String, CliError> {
    let model = cfg.model()?;
    let drive = cfg.drive.envelope;
    let omega_d = match cfg.drive.omega_d {
        Some(w) => w,
        None if drive.amplitude() == 0.0 => model.omega_q(),
        None => return Err(CliError::Usage("simulate needs drive.frequency_ghz".into())),
    };
    let mut sim = cfg.sim;
    sim.dt = cfg.dt_override.unwrap_or_else(|| suggest_dt(&model, &drive, sim.frame));
    let traj = evolve(&model, &drive, omega_d, &sim)?;
    let peak = max_p1(&traj)?;
    write_trajectory(&traj, out.join("trajectory.csv"), files)?;
    Ok(format!(
        "p1_final={:.6} p1_max={:.6} t_max_ns={:.3} samples={}",
        traj.final_p1().unwrap_or(0.0),
        peak.p1,
        peak.t,
        traj.len()
    ))
}

fn resonance(cfg: &RunConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<String, CliError> {
    let model = cfg.model()?;
    let rabi = require_rabi(cfg, "resonance")?;
    let opts = cfg.run_options();
    let bracket = cfg.experiment.bracket.unwrap_or_else(|| default_freq_bracket(&model, rabi));
    let r = find_resonance_cw(&model, rabi, bracket, &opts)?;
    let e_amp = model.amplitude_for_rabi(rabi)?;

    let row = ScanRow {
        param: angular_to_mhz(model.specs()[0].alpha),
        omega_d_opt: r.omega_d,
        e_amp,
        rabi: rabi_of(&model, e_amp),
        p1_opt: r.p1_max,
        boundary_flag: false,
    };
    write_scan(&single_row(cfg, row), out.join("resonance.csv"), files)?;

    let scan_path = out.join("resonance_scan.csv");
    let mut w = create(&scan_path)?;
    writeln!(w, "omega_d_GHz,max_p1")?;
    for (x, p) in &r.scan {
        writeln!(w, "{:.9},{:.12}", angular_to_ghz(*x), p)?;
    }
    w.flush()?;
    files.push(scan_path);

    let drive = jqf_core::DriveEnvelope::Cw { e_amp };
    let traj = opts.run(&model, &drive, r.omega_d, cw_horizon(rabi))?;
    write_trajectory(&traj, out.join("trajectory.csv"), files)?;
    Ok(format!("omega_d_res_GHz={:.4} p1_max={:.6}", angular_to_ghz(r.omega_d), r.p1_max))
}

fn sigma_or_default(cfg: &RunConfig) -> f64 {
    cfg.experiment.sigma.unwrap_or(10.0)
}

fn scan_alpha(cfg: &RunConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<String, CliError> {
    let model = cfg.model()?;
    let alphas = cfg
        .experiment
        .alphas
        .as_ref()
        .ok_or_else(|| CliError::Usage("scan-alpha needs experiment.alphas_mhz".into()))?;
    let opts = cfg.run_options();
    let variant = cfg.experiment.variant.as_deref().unwrap_or("cw");
    let (scan, name) = match variant {
        "cw" => (scan_alpha_cw(&model, alphas, require_rabi(cfg, "scan-alpha")?, &opts), "scan_alpha_cw.csv"),
        "pulse" => (scan_alpha_pulse(&model, alphas, sigma_or_default(cfg), &opts), "scan_alpha_pulse.csv"),
        other => {
            return Err(CliError::Usage(format!("experiment.variant = \"{other}\": expected cw or pulse")));
        }
    };
    write_scan(&scan, out.join(name), files)?;
    Ok(scan_summary(&scan))
}

fn scan_summary(scan: &ScanResult) -> String {
    let flagged = scan.rows.iter().filter(|r| r.boundary_flag).count();
    let mut s = format!("points={} boundary={flagged}", scan.rows.len());
    for r in &scan.rows {
        let _ = write!(s, " p1[{}]={:.6}", r.param, r.p1_opt);
    }
    s
}

fn optimize(cfg: &RunConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<String, CliError> {
    let model = cfg.model()?;
    let sigma = cfg
        .experiment
        .sigma
        .ok_or_else(|| CliError::Usage("optimize-pulse needs experiment.sigma_ns".into()))?;
    let opts = cfg.run_options();
    let seed = PulseBrackets::around_seed(&model, sigma)?;
    let brackets = PulseBrackets {
        freq: cfg.experiment.bracket.unwrap_or(seed.freq),
        amp: cfg.experiment.amp_bracket.map_or(seed.amp, |(lo, hi)| {
            let k = (2.0 * model.specs()[0].gamma).sqrt();
            (lo / k, hi / k)
        }),
    };
    let o = optimize_pulse(&model, sigma, brackets, &opts)?;
    let row = ScanRow {
        param: sigma,
        omega_d_opt: o.omega_d,
        e_amp: o.e_amp,
        rabi: rabi_of(&model, o.e_amp),
        p1_opt: o.p1,
        boundary_flag: false,
    };
    write_scan(&single_row(cfg, row), out.join("optimize_pulse.csv"), files)?;
    let traj = opts.run(&model, &gaussian_pulse(sigma, o.e_amp), o.omega_d, measurement_time(sigma) + STATIONARITY_WINDOW)?;
    write_trajectory(&traj, out.join("trajectory.csv"), files)?;
    Ok(format!(
        "omega_d_opt_GHz={:.4} e_amp_MHz={:.3} p1_opt={:.6} rounds={} converged={} stationary={}",
        angular_to_ghz(o.omega_d),
        angular_to_mhz(row.rabi),
        o.p1,
        o.rounds,
        o.converged,
        o.stationary()
    ))
}

fn sigma_sweep(cfg: &RunConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<String, CliError> {
    let model = cfg.model()?;
    let sigmas = cfg
        .experiment
        .sigmas
        .as_ref()
        .ok_or_else(|| CliError::Usage("sweep-sigma needs experiment.sigmas_ns".into()))?;
    let opts = cfg.run_options();
    let full = sweep_sigma(&model, sigmas, &opts);
    let full_result = write_scan(&full, out.join("sweep_sigma.csv"), files);
    let two = sweep_sigma(&two_level_baseline(&model)?, sigmas, &opts);
    let two_result = write_scan(&two, out.join("sweep_sigma_two_level.csv"), files);
    full_result?;
    two_result?;
    let best = full.rows.iter().fold(None::<&ScanRow>, |b, r| match b {
        Some(b) if b.p1_opt >= r.p1_opt => Some(b),
        _ => Some(r),
    });
    Ok(match best {
        Some(b) => format!("best_sigma_ns={} p1_opt={:.6} {}", b.param, b.p1_opt, scan_summary(&full)),
        None => "points=0".into(),
    })
}

fn compare(cfg: &RunConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<String, CliError> {
    let model = cfg.model()?;
    require_rabi(cfg, "compare")?;
    let e_amp = cfg.drive.envelope.amplitude();
    let c = compare_cw_pulse(&model, sigma_or_default(cfg), e_amp, &cfg.run_options())?;
    write_trajectory(&c.cw, out.join("compare_cw.csv"), files)?;
    write_trajectory(&c.pulse, out.join("compare_pulse.csv"), files)?;
    Ok(format!(
        "cw_omega_d_GHz={:.4} cw_max_p1={:.6} pulse_omega_d_GHz={:.4} pulse_max_p1={:.6}",
        angular_to_ghz(c.cw_omega_d),
        c.cw_max_p1,
        angular_to_ghz(c.pulse_omega_d),
        c.pulse_max_p1
    ))
}

fn njqf(cfg: &RunConfig, out: &Path, files: &mut Vec<PathBuf>) -> Result<String, CliError> {
    let model = cfg.model()?;
    let levels = cfg.experiment.n_jqf.clone().unwrap_or_else(|| vec![2, 3, 4]);
    let scan = njqf_study(&model, &levels, sigma_or_default(cfg), &cfg.run_options())?;
    write_scan(&scan, out.join("njqf.csv"), files)?;
    Ok(scan_summary(&scan))
}

/// Closed-form calibration table for a qubit at `omega` with anharmonicity
/// `alpha` under a drive of Rabi frequency `rabi`, all in GHz (linear).
pub fn analytic_table(omega_ghz: f64, alpha_ghz: f64, rabi_ghz: f64) -> Result<String, CliError> {
    for (name, v) in [("omega", omega_ghz), ("alpha", alpha_ghz), ("rabi", rabi_ghz)] {
        if !v.is_finite() {
            return Err(CliError::Usage(format!("--{name} must be finite")));
        }
    }
    if rabi_ghz <= 0.0 {
        return Err(CliError::Usage("--rabi must be positive".into()));
    }
    let (w, a, r) = (ghz_to_angular(omega_ghz), ghz_to_angular(alpha_ghz), ghz_to_angular(rabi_ghz));
    let t = calibration_table(w, a, r)?;
    let mhz = angular_to_mhz;
    let mut s = String::new();
    let _ = writeln!(s, "omega_GHz={omega_ghz}");
    let _ = writeln!(s, "alpha_MHz={}", alpha_ghz * 1e3);
    let _ = writeln!(s, "rabi_MHz={}", rabi_ghz * 1e3);
    let _ = writeln!(s, "shift_MHz={:.3}", mhz(t.shift));
    let _ = writeln!(s, "exact_resonance_GHz={:.7}", angular_to_ghz(t.exact_resonance));
    let _ = writeln!(s, "p1_max={:.4}", t.p1_max_approx);
    let _ = writeln!(s, "p1_max_exact={:.6}", t.p1_max_exact);
    let _ = writeln!(s, "E_plus_MHz={:.4}", mhz(t.dressed.e_plus));
    let _ = writeln!(s, "E_minus_MHz={:.4}", mhz(t.dressed.e_minus));
    let _ = writeln!(s, "sw_E_plus_MHz={:.4}", mhz(t.sw_energies.0));
    let _ = writeln!(s, "sw_E_minus_MHz={:.4}", mhz(t.sw_energies.1));
    let _ = writeln!(s, "sw_deficit={:.6e}", t.sw_deficit);
    Ok(s)
}
