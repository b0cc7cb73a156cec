//! Resonance searches, pulse optimization and parameter sweeps.
//!
//! Every search runs the full master equation; the closed forms in
//! [`crate::analytic`] only seed brackets. Sweep points are independent and
//! run on the rayon pool, results come back in input order.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::analytic::resonance_shift;
use crate::drives::{matched_step_onset, pi_pulse_amplitude, DriveEnvelope};
use crate::error::{Error, Result};
use crate::integrator::{evolve, max_p1, p1_slope, suggest_dt, SimConfig, Trajectory};
use crate::model::{Frame, SystemModel};
use crate::optimize::{bracketed_max, golden_section_max};
use crate::units::{angular_to_ghz, angular_to_mhz, mhz_to_angular};

/// Nodes in every coarse pre-scan.
pub const SCAN_POINTS: usize = 21;
/// Golden-section tolerance on the drive frequency: 0.01 MHz.
pub const FREQ_TOL: f64 = 2.0 * PI * 1e-5;
/// Relative golden-section tolerance on the pulse amplitude.
pub const AMP_REL_TOL: f64 = 1e-4;
/// Coordinate descent stops once a round improves `p1` by less than this.
pub const DESCENT_TOL: f64 = 1e-6;
pub const MAX_DESCENT_ROUNDS: usize = 8;
/// Stationarity window after the pulsed measurement time (ns).
pub const STATIONARITY_WINDOW: f64 = 20.0;
/// Largest `|dp1/dt|` (1/ns) accepted as stationary.
pub const STATIONARITY_SLOPE: f64 = 1e-6;

/// Knobs shared by every experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub frame: Frame,
    /// Fixed step; `None` picks [`suggest_dt`] per run.
    pub dt: Option<f64>,
    pub record_stride: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { frame: Frame::RotatingRwa, dt: None, record_stride: 10 }
    }
}

impl RunOptions {
    /// Simulation settings for `model` driven by `drive` up to `t_end`.
    pub fn sim_config(&self, model: &SystemModel, drive: &DriveEnvelope, t_end: f64) -> SimConfig {
        let dims = model.dims();
        SimConfig {
            t_start: 0.0,
            t_end,
            dt: self.dt.unwrap_or_else(|| suggest_dt(model, drive, self.frame)),
            record_stride: self.record_stride,
            frame: self.frame,
            dq_levels: dims[0],
            jqf_levels: dims.get(1).copied().unwrap_or(2),
            include_jqf: model.has_filter(),
        }
    }

    pub fn run(&self, model: &SystemModel, drive: &DriveEnvelope, omega_d: f64, t_end: f64) -> Result<Trajectory> {
        evolve(model, drive, omega_d, &self.sim_config(model, drive, t_end))
    }
}

/// Closed interval of angular frequencies or amplitudes.
pub type Bracket = (f64, f64);

fn check_bracket(b: Bracket, what: &str) -> Result<()> {
    if !(b.0 < b.1) || !b.0.is_finite() || !b.1.is_finite() {
        return Err(Error::InvalidArgument(format!("{what} bracket [{}, {}] is empty", b.0, b.1)));
    }
    Ok(())
}

/// Horizon of the cw objective: three Rabi periods `3π/Ω`.
pub fn cw_horizon(rabi: f64) -> f64 {
    3.0 * PI / rabi
}

/// Drive-frequency bracket around the bare qubit, stretched toward the
/// expected dispersive shift for a drive of Rabi rate `rabi`.
pub fn default_freq_bracket(model: &SystemModel, rabi: f64) -> Bracket {
    let omega = model.specs()[0].omega;
    let shift = if model.dq_levels() > 2 {
        resonance_shift(rabi, model.specs()[0].alpha).unwrap_or(0.0)
    } else {
        0.0
    };
    let pad = mhz_to_angular(1.0);
    if shift >= 0.0 {
        (omega - pad, omega + 1.5 * shift + pad)
    } else {
        (omega + 1.5 * shift - pad, omega + pad)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resonance {
    pub omega_d: f64,
    pub p1_max: f64,
    /// Time of the maximum at the optimal frequency (ns).
    pub t_at_max: f64,
    pub scan: Vec<(f64, f64)>,
}

/// Largest `p1` within three Rabi periods of a cw drive of Rabi rate `rabi`.
pub fn cw_peak(model: &SystemModel, rabi: f64, omega_d: f64, opts: &RunOptions) -> Result<(f64, f64)> {
    let drive = DriveEnvelope::Cw { e_amp: model.amplitude_for_rabi(rabi)? };
    let traj = opts.run(model, &drive, omega_d, cw_horizon(rabi))?;
    let peak = max_p1(&traj)?;
    Ok((peak.t, peak.p1))
}

/// Drive frequency maximizing the cw peak population.
pub fn find_resonance_cw(model: &SystemModel, rabi: f64, bracket: Bracket, opts: &RunOptions) -> Result<Resonance> {
    check_bracket(bracket, "frequency")?;
    if !(rabi > 0.0) {
        return Err(Error::InvalidArgument(format!("Rabi rate must be positive, got {rabi}")));
    }
    let f = |w: f64| cw_peak(model, rabi, w, opts).map(|(_, p)| p);
    let m = bracketed_max(&f, bracket.0, bracket.1, SCAN_POINTS, FREQ_TOL)?;
    let (t_at_max, p1_max) = cw_peak(model, rabi, m.x, opts)?;
    log::info!(
        "cw resonance {:.6} GHz, p1_max {p1_max:.6}",
        angular_to_ghz(m.x)
    );
    Ok(Resonance { omega_d: m.x, p1_max, t_at_max, scan: m.scan })
}

/// `p1` at `t_meas = t0 + 3σ` after a Gaussian pulse centred at `t0 = 2σ`.
pub fn pulse_p1(model: &SystemModel, sigma: f64, omega_d: f64, e_amp: f64, opts: &RunOptions) -> Result<f64> {
    let drive = gaussian_pulse(sigma, e_amp);
    let traj = opts.run(model, &drive, omega_d, measurement_time(sigma))?;
    traj.final_p1().ok_or_else(|| Error::InvalidArgument("empty trajectory".into()))
}

pub fn gaussian_pulse(sigma: f64, e_amp: f64) -> DriveEnvelope {
    DriveEnvelope::Gaussian { e_amp, t0: 2.0 * sigma, sigma }
}

pub fn measurement_time(sigma: f64) -> f64 {
    5.0 * sigma
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseBrackets {
    pub freq: Bracket,
    pub amp: Bracket,
}

impl PulseBrackets {
    /// Amplitude within ±30 % of the ideal π pulse; frequency around the
    /// shift expected at the pulse's peak Rabi rate.
    pub fn around_seed(model: &SystemModel, sigma: f64) -> Result<Self> {
        let e0 = pi_pulse_amplitude(sigma, model.specs()[0].gamma)?;
        let rabi = model.rabi_rate(e0);
        Ok(Self { freq: default_freq_bracket(model, rabi), amp: (0.7 * e0, 1.3 * e0) })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseOptimum {
    pub sigma: f64,
    pub omega_d: f64,
    pub e_amp: f64,
    /// `p1` at the measurement time.
    pub p1: f64,
    pub rounds: usize,
    /// Descent met [`DESCENT_TOL`] within [`MAX_DESCENT_ROUNDS`].
    pub converged: bool,
    pub grid_fallback: bool,
    /// Least-squares `dp1/dt` over the window after the measurement time.
    pub post_slope: f64,
}

impl PulseOptimum {
    pub fn stationary(&self) -> bool {
        self.post_slope.abs() < STATIONARITY_SLOPE
    }
}

/// Coordinate descent over drive frequency and amplitude of a Gaussian π
/// pulse of FWHM `sigma`, maximizing `p1` at `t_meas = 5σ`.
///
/// The first round pre-scans each axis over its whole bracket; later rounds
/// refine by golden section within two scan steps of the current point.
pub fn optimize_pulse(model: &SystemModel, sigma: f64, brackets: PulseBrackets, opts: &RunOptions) -> Result<PulseOptimum> {
    check_bracket(brackets.freq, "frequency")?;
    check_bracket(brackets.amp, "amplitude")?;
    let e_seed = pi_pulse_amplitude(sigma, model.specs()[0].gamma)?;
    let amp_tol = AMP_REL_TOL * e_seed;
    let objective = |w: f64, e: f64| pulse_p1(model, sigma, w, e, opts);

    let (wf, af) = (brackets.freq, brackets.amp);
    let freq_step = (wf.1 - wf.0) / (SCAN_POINTS - 1) as f64;
    let amp_step = (af.1 - af.0) / (SCAN_POINTS - 1) as f64;

    let mut e = e_seed.clamp(af.0, af.1);
    let fm = bracketed_max(&|w| objective(w, e), wf.0, wf.1, SCAN_POINTS, FREQ_TOL)?;
    let mut w = fm.x;
    let am = bracketed_max(&|x| objective(w, x), af.0, af.1, SCAN_POINTS, amp_tol)?;
    e = am.x;
    let mut best = am.value;
    let mut prev = fm.value;
    let mut rounds = 1;
    let mut converged = best - prev < DESCENT_TOL;
    while !converged && rounds < MAX_DESCENT_ROUNDS {
        rounds += 1;
        prev = best;
        let lo = (w - 2.0 * freq_step).max(wf.0);
        let hi = (w + 2.0 * freq_step).min(wf.1);
        let (w_new, p) = golden_section_max(|x| objective(x, e), lo, hi, FREQ_TOL)?;
        if p > best {
            w = w_new;
            best = p;
        }
        let lo = (e - 2.0 * amp_step).max(af.0);
        let hi = (e + 2.0 * amp_step).min(af.1);
        let (e_new, p) = golden_section_max(|x| objective(w, x), lo, hi, amp_tol)?;
        if p > best {
            e = e_new;
            best = p;
        }
        converged = best - prev < DESCENT_TOL;
        log::debug!("sigma {sigma}: round {rounds} p1 {best:.9}");
    }

    let mut grid_fallback = false;
    if !converged {
        log::warn!("pulse descent at sigma {sigma} ns did not settle in {MAX_DESCENT_ROUNDS} rounds; trying 5x5 grid");
        let mut grid = Vec::with_capacity(25);
        for i in -2..=2 {
            for j in -2..=2 {
                grid.push((w + i as f64 * 0.5 * freq_step, e + j as f64 * 0.5 * amp_step));
            }
        }
        let vals: Vec<Result<f64>> = grid.par_iter().map(|&(x, y)| objective(x, y)).collect();
        for (&(x, y), v) in grid.iter().zip(vals) {
            let v = v?;
            if v > best {
                best = v;
                w = x;
                e = y;
                grid_fallback = true;
            }
        }
    }

    let t_meas = measurement_time(sigma);
    let drive = gaussian_pulse(sigma, e);
    let traj = opts.run(model, &drive, w, t_meas + STATIONARITY_WINDOW)?;
    let post_slope = p1_slope(&traj, t_meas, t_meas + STATIONARITY_WINDOW)?;
    if model.has_filter() && post_slope.abs() >= STATIONARITY_SLOPE {
        log::warn!("p1 not stationary after pulse at sigma {sigma} ns: slope {post_slope:.3e}/ns");
    }
    Ok(PulseOptimum { sigma, omega_d: w, e_amp: e, p1: best, rounds, converged, grid_fallback, post_slope })
}

/// One row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    /// Swept parameter in user units (α in MHz, σ in ns, level count).
    pub param: f64,
    pub omega_d_opt: f64,
    pub e_amp: f64,
    /// `√(2γ₁)·E_amp`, angular.
    pub rabi: f64,
    pub p1_opt: f64,
    pub boundary_flag: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    /// SHA-256 of the canonical description of the sweep inputs.
    pub config_hash: String,
    pub created_unix: u64,
}

impl Provenance {
    pub fn of(description: &str) -> Self {
        let config_hash = hex::encode(Sha256::digest(description.as_bytes()));
        let created_unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self { config_hash, created_unix }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    /// Successful points, in input order.
    pub rows: Vec<ScanRow>,
    /// Points that failed, with their parameter.
    pub failures: Vec<(f64, Error)>,
    pub provenance: Provenance,
}

impl ScanResult {
    fn collect(params: &[f64], outcomes: Vec<Result<ScanRow>>, description: String) -> Self {
        let mut rows = Vec::new();
        let mut failures = Vec::new();
        for (&p, o) in params.iter().zip(outcomes) {
            match o {
                Ok(r) => rows.push(r),
                Err(e) => failures.push((p, e)),
            }
        }
        Self { rows, failures, provenance: Provenance::of(&description) }
    }

    /// First failure in input order, if any.
    pub fn first_failure(&self) -> Option<&(f64, Error)> {
        self.failures.first()
    }

    /// Writes `param,omega_d_opt_GHz,e_amp_MHz,p1_opt,boundary_flag`, with
    /// the amplitude given as `√(2γ₁)E/2π`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "param,omega_d_opt_GHz,e_amp_MHz,p1_opt,boundary_flag")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{:.9},{:.6},{:.9},{}",
                r.param,
                angular_to_ghz(r.omega_d_opt),
                angular_to_mhz(r.rabi),
                r.p1_opt,
                u8::from(r.boundary_flag)
            )?;
        }
        Ok(())
    }
}

fn describe(kind: &str, model: &SystemModel, params: &[f64], extra: &str, opts: &RunOptions) -> String {
    let mut s = String::new();
    let _ = write!(s, "{kind};specs={:?};params={params:?};{extra};opts={opts:?}", model.specs());
    s
}

/// Rabi rate `√(2γ₁)E`, independent of the data qubit's position.
fn rabi_of(model: &SystemModel, e_amp: f64) -> f64 {
    (2.0 * model.specs()[0].gamma).sqrt() * e_amp
}

/// Turns a boundary error into a flagged row at the scan's best edge point.
fn boundary_row(param: f64, e_amp: f64, rabi: f64, err: Error) -> Result<ScanRow> {
    match err {
        Error::Boundary { edge, scan, .. } => {
            let p1 = scan.iter().find(|p| p.0 == edge).map_or(f64::NAN, |p| p.1);
            log::warn!("sweep point {param}: optimum on bracket edge {edge}");
            Ok(ScanRow { param, omega_d_opt: edge, e_amp, rabi, p1_opt: p1, boundary_flag: true })
        }
        other => Err(other),
    }
}

/// The same model with the anharmonicity of every qubit set to `alpha`.
pub fn with_alpha(model: &SystemModel, alpha: f64) -> Result<SystemModel> {
    if alpha == 0.0 {
        return Err(Error::InvalidArgument("alpha must be nonzero".into()));
    }
    let specs = model.specs().iter().map(|s| crate::model::TransmonSpec { alpha, ..*s }).collect();
    SystemModel::new(specs)
}

/// cw resonance for each anharmonicity in `alphas` (angular), with
/// brackets from [`default_freq_bracket`]. Rows carry α in MHz.
pub fn scan_alpha_cw(template: &SystemModel, alphas: &[f64], rabi: f64, opts: &RunOptions) -> ScanResult {
    let params: Vec<f64> = alphas.iter().map(|&a| angular_to_mhz(a)).collect();
    let outcomes = alphas
        .par_iter()
        .map(|&alpha| {
            let param = angular_to_mhz(alpha);
            let model = with_alpha(template, alpha)?;
            let e_amp = model.amplitude_for_rabi(rabi)?;
            let bracket = default_freq_bracket(&model, rabi);
            match find_resonance_cw(&model, rabi, bracket, opts) {
                Ok(r) => Ok(ScanRow {
                    param,
                    omega_d_opt: r.omega_d,
                    e_amp,
                    rabi: rabi_of(&model, e_amp),
                    p1_opt: r.p1_max,
                    boundary_flag: false,
                }),
                Err(err) => boundary_row(param, e_amp, rabi_of(&model, e_amp), err),
            }
        })
        .collect();
    ScanResult::collect(&params, outcomes, describe("scan-alpha-cw", template, &params, &format!("rabi={rabi}"), opts))
}

fn pulse_row(model: &SystemModel, param: f64, sigma: f64, opts: &RunOptions) -> Result<ScanRow> {
    let brackets = PulseBrackets::around_seed(model, sigma)?;
    let seed = pi_pulse_amplitude(sigma, model.specs()[0].gamma)?;
    match optimize_pulse(model, sigma, brackets, opts) {
        Ok(o) => Ok(ScanRow {
            param,
            omega_d_opt: o.omega_d,
            e_amp: o.e_amp,
            rabi: rabi_of(model, o.e_amp),
            p1_opt: o.p1,
            boundary_flag: false,
        }),
        Err(err) => boundary_row(param, seed, rabi_of(model, seed), err),
    }
}

/// Optimized π pulse for each anharmonicity (angular) at fixed `sigma`.
pub fn scan_alpha_pulse(template: &SystemModel, alphas: &[f64], sigma: f64, opts: &RunOptions) -> ScanResult {
    let params: Vec<f64> = alphas.iter().map(|&a| angular_to_mhz(a)).collect();
    let outcomes = alphas
        .par_iter()
        .map(|&alpha| pulse_row(&with_alpha(template, alpha)?, angular_to_mhz(alpha), sigma, opts))
        .collect();
    ScanResult::collect(&params, outcomes, describe("scan-alpha-pulse", template, &params, &format!("sigma={sigma}"), opts))
}

/// Optimized π pulse for each FWHM in `sigmas` (ns).
pub fn sweep_sigma(model: &SystemModel, sigmas: &[f64], opts: &RunOptions) -> ScanResult {
    let outcomes = sigmas.par_iter().map(|&s| pulse_row(model, s, s, opts)).collect();
    ScanResult::collect(sigmas, outcomes, describe("sweep-sigma", model, sigmas, "", opts))
}

/// The same model with both qubits truncated to two levels.
pub fn two_level_baseline(model: &SystemModel) -> Result<SystemModel> {
    model.with_levels(2, 2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub cw: Trajectory,
    pub pulse: Trajectory,
    pub cw_omega_d: f64,
    pub pulse_omega_d: f64,
    pub cw_max_p1: f64,
    pub pulse_max_p1: f64,
}

/// cw (Gaussian ramp) against Gaussian pulse at the same amplitude, each at
/// its own optimal frequency. The ramp's objective is the peak within three
/// Rabi periods after the ramp; the pulse's is `p1` at `5σ`.
pub fn compare_cw_pulse(model: &SystemModel, sigma: f64, e_amp: f64, opts: &RunOptions) -> Result<Comparison> {
    let rabi = model.rabi_rate(e_amp);
    if !(rabi > 0.0) {
        return Err(Error::InvalidArgument(format!("amplitude must be positive, got {e_amp}")));
    }
    let t0 = 2.0 * sigma;
    let ramp = DriveEnvelope::GaussianRamp { e_amp, t0, sigma };
    let ramp_end = t0 + cw_horizon(rabi);
    let bracket = default_freq_bracket(model, rabi);

    let ramp_peak = |w: f64| opts.run(model, &ramp, w, ramp_end).and_then(|t| max_p1(&t)).map(|p| p.p1);
    let cw_opt = bracketed_max(&ramp_peak, bracket.0, bracket.1, SCAN_POINTS, FREQ_TOL)?;
    let pulse_obj = |w: f64| pulse_p1(model, sigma, w, e_amp, opts);
    let pulse_opt = bracketed_max(&pulse_obj, bracket.0, bracket.1, SCAN_POINTS, FREQ_TOL)?;

    let cw = opts.run(model, &ramp, cw_opt.x, ramp_end)?;
    let pulse_drive = gaussian_pulse(sigma, e_amp);
    let pulse = opts.run(model, &pulse_drive, pulse_opt.x, ramp_end.max(measurement_time(sigma)))?;
    Ok(Comparison {
        cw_max_p1: max_p1(&cw)?.p1,
        pulse_max_p1: max_p1(&pulse)?.p1,
        cw_omega_d: cw_opt.x,
        pulse_omega_d: pulse_opt.x,
        cw,
        pulse,
    })
}

/// Peak `p1` under a Gaussian ramp and under the step whose long-time area
/// matches it, both at `omega_d` over `t_end`.
pub fn ramp_vs_step(
    model: &SystemModel,
    e_amp: f64,
    t0: f64,
    sigma: f64,
    omega_d: f64,
    t_end: f64,
    opts: &RunOptions,
) -> Result<(f64, f64)> {
    let ramp = DriveEnvelope::GaussianRamp { e_amp, t0, sigma };
    let step = DriveEnvelope::Step { e_amp, t0p: matched_step_onset(t0, sigma)? };
    let pr = max_p1(&opts.run(model, &ramp, omega_d, t_end)?)?.p1;
    let ps = max_p1(&opts.run(model, &step, omega_d, t_end)?)?.p1;
    Ok((pr, ps))
}

/// The pulse optimized at two filter levels, replayed at each truncation in
/// `n_jqf`; rows carry `p1(5σ)` per level count.
pub fn njqf_study(model: &SystemModel, n_jqf: &[usize], sigma: f64, opts: &RunOptions) -> Result<ScanResult> {
    if !model.has_filter() {
        return Err(Error::InvalidArgument("filter truncation study needs a filter".into()));
    }
    if let Some(&n) = n_jqf.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidDimension(format!("filter needs at least 2 levels, got {n}")));
    }
    let base = model.with_levels(model.dq_levels(), 2)?;
    let opt = optimize_pulse(&base, sigma, PulseBrackets::around_seed(&base, sigma)?, opts)?;
    let params: Vec<f64> = n_jqf.iter().map(|&n| n as f64).collect();
    let outcomes = n_jqf
        .par_iter()
        .map(|&n| {
            let m = model.with_levels(model.dq_levels(), n)?;
            let p1 = pulse_p1(&m, sigma, opt.omega_d, opt.e_amp, opts)?;
            Ok(ScanRow {
                param: n as f64,
                omega_d_opt: opt.omega_d,
                e_amp: opt.e_amp,
                rabi: rabi_of(&m, opt.e_amp),
                p1_opt: p1,
                boundary_flag: false,
            })
        })
        .collect();
    Ok(ScanResult::collect(&params, outcomes, describe("njqf", model, &params, &format!("sigma={sigma}"), opts)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TransmonSpec;
    use crate::units::ghz_to_angular;

    fn lone_dq(levels: usize) -> SystemModel {
        let dq = TransmonSpec::new(ghz_to_angular(5.0), mhz_to_angular(-300.0), mhz_to_angular(0.002), 0.0, levels).unwrap();
        SystemModel::data_qubit_with_filter(dq, None).unwrap()
    }

    #[test]
    fn two_level_resonance_is_bare_frequency() {
        let m = lone_dq(2);
        let rabi = mhz_to_angular(16.0);
        let r = find_resonance_cw(&m, rabi, default_freq_bracket(&m, rabi), &RunOptions::default()).unwrap();
        assert!(angular_to_mhz(r.omega_d - ghz_to_angular(5.0)).abs() < 0.05, "{}", angular_to_mhz(r.omega_d));
        assert!(r.p1_max > 0.999);
    }

    #[test]
    fn edge_bracket_is_reported() {
        let m = lone_dq(2);
        let rabi = mhz_to_angular(16.0);
        let w = ghz_to_angular(5.0);
        let err = find_resonance_cw(&m, rabi, (w + mhz_to_angular(2.0), w + mhz_to_angular(6.0)), &RunOptions::default())
            .unwrap_err();
        assert_eq!(err.kind(), "boundary");
    }

    #[test]
    fn csv_header_and_units() {
        let r = ScanResult {
            rows: vec![ScanRow {
                param: -300.0,
                omega_d_opt: ghz_to_angular(5.0017),
                e_amp: 1.0,
                rabi: mhz_to_angular(16.0),
                p1_opt: 0.994,
                boundary_flag: false,
            }],
            failures: vec![],
            provenance: Provenance::of("x"),
        };
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "param,omega_d_opt_GHz,e_amp_MHz,p1_opt,boundary_flag\n-300,5.001700000,16.000000,0.994000000,0\n");
        assert_eq!(r.provenance.config_hash.len(), 64);
    }

    #[test]
    fn provenance_hash_is_stable() {
        assert_eq!(Provenance::of("abc").config_hash, Provenance::of("abc").config_hash);
        assert_ne!(Provenance::of("abc").config_hash, Provenance::of("abd").config_hash);
    }

    #[test]
    fn zero_alpha_is_rejected() {
        assert!(with_alpha(&lone_dq(3), 0.0).is_err());
    }
}
