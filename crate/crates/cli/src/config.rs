//! Run configuration: TOML in user units, converted once to the angular
//! units used by `jqf-core`.
//!
//! User-facing units: frequencies in GHz, anharmonicity and coupling in MHz,
//! qubit position as a phase in units of π, drive amplitude as the Rabi
//! frequency `√(2γ₁)E/2π` in MHz, times in ns.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use jqf_core::experiments::{Bracket, RunOptions};
use jqf_core::units::{ghz_to_angular, mhz_to_angular};
use jqf_core::{DriveEnvelope, Frame, SimConfig, SystemModel, TransmonSpec};
use serde::Deserialize;

use crate::CliError;

/// The only schema this build reads.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: u32,
    qubits: RawQubits,
    #[serde(default)]
    drive: RawDrive,
    #[serde(default)]
    sim: RawSim,
    #[serde(default)]
    experiment: RawExperiment,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQubits {
    dq: RawQubit,
    jqf: RawQubit,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQubit {
    omega_ghz: f64,
    alpha_mhz: f64,
    gamma_mhz: f64,
    phase_pi: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDrive {
    shape: String,
    amplitude_mhz: f64,
    frequency_ghz: Option<f64>,
    t0_ns: Option<f64>,
    sigma_ns: Option<f64>,
    t0p_ns: Option<f64>,
}

impl Default for RawDrive {
    fn default() -> Self {
        Self { shape: "cw".into(), amplitude_mhz: 0.0, frequency_ghz: None, t0_ns: None, sigma_ns: None, t0p_ns: None }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSim {
    #[serde(default)]
    t_start_ns: f64,
    #[serde(default = "default_t_end")]
    t_end_ns: f64,
    dt_ns: Option<f64>,
    #[serde(default = "default_stride")]
    record_stride: usize,
    #[serde(default = "default_frame")]
    frame: String,
    #[serde(default = "default_dq_levels")]
    dq_levels: usize,
    #[serde(default = "default_jqf_levels")]
    jqf_levels: usize,
    #[serde(default = "default_true")]
    include_jqf: bool,
}

fn default_t_end() -> f64 {
    100.0
}
fn default_stride() -> usize {
    10
}
fn default_frame() -> String {
    "rotating-rwa".into()
}
fn default_dq_levels() -> usize {
    4
}
fn default_jqf_levels() -> usize {
    2
}
fn default_true() -> bool {
    true
}

impl Default for RawSim {
    fn default() -> Self {
        Self {
            t_start_ns: 0.0,
            t_end_ns: default_t_end(),
            dt_ns: None,
            record_stride: default_stride(),
            frame: default_frame(),
            dq_levels: default_dq_levels(),
            jqf_levels: default_jqf_levels(),
            include_jqf: true,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    name: Option<String>,
    variant: Option<String>,
    bracket_ghz: Option<[f64; 2]>,
    amp_bracket_mhz: Option<[f64; 2]>,
    alphas_mhz: Option<Vec<f64>>,
    sigma_ns: Option<f64>,
    sigmas_ns: Option<Vec<f64>>,
    n_jqf: Option<Vec<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
}

/// Drive block after unit conversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSettings {
    pub envelope: DriveEnvelope,
    /// Rabi rate `√(2γ₁)E`, angular.
    pub rabi: f64,
    pub omega_d: Option<f64>,
}

/// Experiment block after unit conversion; fields are only checked by the
/// subcommands that need them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentSettings {
    pub name: Option<String>,
    pub variant: Option<String>,
    pub bracket: Option<Bracket>,
    pub amp_bracket: Option<Bracket>,
    pub alphas: Option<Vec<f64>>,
    pub sigma: Option<f64>,
    pub sigmas: Option<Vec<f64>>,
    pub n_jqf: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Untruncated specs; levels come from `sim`.
    pub dq: TransmonSpec,
    pub jqf: TransmonSpec,
    pub drive: DriveSettings,
    pub sim: SimConfig,
    /// Explicit step from the file, if any.
    pub dt_override: Option<f64>,
    pub experiment: ExperimentSettings,
    pub output: Option<PathBuf>,
    /// The file as read, echoed into run manifests.
    pub source: String,
}

impl RunConfig {
    pub fn model(&self) -> Result<SystemModel, CliError> {
        Ok(self.sim.build_model(self.dq, self.jqf)?)
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions { frame: self.sim.frame, dt: self.dt_override, record_stride: self.sim.record_stride }
    }
}

fn schema(msg: String) -> CliError {
    CliError::Config(msg)
}

fn require(cond: bool, key: &str, value: f64, what: &str) -> Result<(), CliError> {
    if cond && value.is_finite() {
        Ok(())
    } else {
        Err(schema(format!("{key} = {value}: {what}")))
    }
}

fn qubit(raw: &RawQubit, key: &str) -> Result<TransmonSpec, CliError> {
    require(raw.omega_ghz > 0.0, &format!("qubits.{key}.omega_ghz"), raw.omega_ghz, "must be positive")?;
    require(raw.alpha_mhz != 0.0, &format!("qubits.{key}.alpha_mhz"), raw.alpha_mhz, "must be nonzero")?;
    require(raw.gamma_mhz >= 0.0, &format!("qubits.{key}.gamma_mhz"), raw.gamma_mhz, "must be non-negative")?;
    require(true, &format!("qubits.{key}.phase_pi"), raw.phase_pi, "must be finite")?;
    Ok(TransmonSpec::new(
        ghz_to_angular(raw.omega_ghz),
        mhz_to_angular(raw.alpha_mhz),
        mhz_to_angular(raw.gamma_mhz),
        raw.phase_pi * PI,
        2,
    )?)
}

fn bracket(b: Option<[f64; 2]>, key: &str, to_angular: fn(f64) -> f64) -> Result<Option<Bracket>, CliError> {
    match b {
        None => Ok(None),
        Some([lo, hi]) if lo < hi && lo.is_finite() && hi.is_finite() => Ok(Some((to_angular(lo), to_angular(hi)))),
        Some([lo, hi]) => Err(schema(format!("{key} = [{lo}, {hi}]: needs lo < hi"))),
    }
}

fn drive(raw: &RawDrive, gamma1: f64) -> Result<DriveSettings, CliError> {
    require(raw.amplitude_mhz >= 0.0, "drive.amplitude_mhz", raw.amplitude_mhz, "must be non-negative")?;
    let rabi = mhz_to_angular(raw.amplitude_mhz);
    let e_amp = if rabi == 0.0 {
        0.0
    } else if gamma1 > 0.0 {
        rabi / (2.0 * gamma1).sqrt()
    } else {
        return Err(schema("drive.amplitude_mhz: a nonzero amplitude needs qubits.dq.gamma_mhz > 0".into()));
    };
    let need = |v: Option<f64>, key: &str| v.ok_or_else(|| schema(format!("drive.{key} is required for shape \"{}\"", raw.shape)));
    let envelope = match raw.shape.as_str() {
        "cw" => DriveEnvelope::Cw { e_amp },
        "step" => DriveEnvelope::Step { e_amp, t0p: need(raw.t0p_ns, "t0p_ns")? },
        "gaussian-ramp" => DriveEnvelope::GaussianRamp { e_amp, t0: need(raw.t0_ns, "t0_ns")?, sigma: need(raw.sigma_ns, "sigma_ns")? },
        "gaussian" => DriveEnvelope::Gaussian { e_amp, t0: need(raw.t0_ns, "t0_ns")?, sigma: need(raw.sigma_ns, "sigma_ns")? },
        other => {
            return Err(schema(format!(
                "drive.shape = \"{other}\": expected one of cw, step, gaussian-ramp, gaussian"
            )))
        }
    };
    envelope.validate()?;
    if let Some(f) = raw.frequency_ghz {
        require(f > 0.0, "drive.frequency_ghz", f, "must be positive")?;
    }
    Ok(DriveSettings { envelope, rabi, omega_d: raw.frequency_ghz.map(ghz_to_angular) })
}

/// Parses and validates a configuration from TOML text.
pub fn parse_config_str(text: &str) -> Result<RunConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| schema(e.to_string().trim_end().to_string()))?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(schema(format!(
            "schema_version = {}: this build reads version {SCHEMA_VERSION}",
            raw.schema_version
        )));
    }
    let dq = qubit(&raw.qubits.dq, "dq")?;
    let jqf = qubit(&raw.qubits.jqf, "jqf")?;
    let drive = drive(&raw.drive, dq.gamma)?;

    let s = &raw.sim;
    let frame: Frame = s
        .frame
        .parse()
        .map_err(|_| schema(format!("sim.frame = \"{}\": expected rotating-rwa or lab", s.frame)))?;
    if let Some(dt) = s.dt_ns {
        require(dt > 0.0, "sim.dt_ns", dt, "must be positive")?;
    }
    let sim = SimConfig {
        t_start: s.t_start_ns,
        t_end: s.t_end_ns,
        dt: s.dt_ns.unwrap_or(jqf_core::integrator::DEFAULT_DT),
        record_stride: s.record_stride,
        frame,
        dq_levels: s.dq_levels,
        jqf_levels: s.jqf_levels,
        include_jqf: s.include_jqf,
    };
    sim.validate().map_err(|e| schema(format!("sim: {e}")))?;

    let x = &raw.experiment;
    if let Some(a) = x.alphas_mhz.as_ref().and_then(|v| v.iter().find(|a| !(**a != 0.0 && a.is_finite()))) {
        return Err(schema(format!("experiment.alphas_mhz contains {a}: every alpha must be nonzero")));
    }
    if let Some(s) = x.sigma_ns {
        require(s > 0.0, "experiment.sigma_ns", s, "must be positive")?;
    }
    if let Some(s) = x.sigmas_ns.as_ref().and_then(|v| v.iter().find(|s| !(**s > 0.0 && s.is_finite()))) {
        return Err(schema(format!("experiment.sigmas_ns contains {s}: every sigma must be positive")));
    }
    if let Some(n) = x.n_jqf.as_ref().and_then(|v| v.iter().find(|n| **n < 2)) {
        return Err(schema(format!("experiment.n_jqf contains {n}: the filter needs at least 2 levels")));
    }
    let experiment = ExperimentSettings {
        name: x.name.clone(),
        variant: x.variant.clone(),
        bracket: bracket(x.bracket_ghz, "experiment.bracket_ghz", ghz_to_angular)?,
        amp_bracket: bracket(x.amp_bracket_mhz, "experiment.amp_bracket_mhz", mhz_to_angular)?,
        alphas: x.alphas_mhz.as_ref().map(|v| v.iter().map(|&a| mhz_to_angular(a)).collect()),
        sigma: x.sigma_ns,
        sigmas: x.sigmas_ns.clone(),
        n_jqf: x.n_jqf.clone(),
    };

    Ok(RunConfig {
        dq,
        jqf,
        drive,
        sim,
        dt_override: s.dt_ns,
        experiment,
        output: raw.output.dir.clone(),
        source: text.to_string(),
    })
}

/// Reads and validates a configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config_str(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}
