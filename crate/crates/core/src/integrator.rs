//! Fixed-step RK4 integration of the master equation with observable
//! recording and physicality monitoring.

use std::io::{self, Write};

use nalgebra::DMatrix;

use crate::drives::DriveEnvelope;
use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, C64};
use crate::model::{Frame, Generator, SystemModel, TransmonSpec};

/// Default step in the rotating frame (ns).
pub const DEFAULT_DT: f64 = 0.01;
/// Runs abort once `|Tr ρ − 1|` exceeds this.
pub const TRACE_TOLERANCE: f64 = 1e-6;
/// `ρ ← (ρ + ρ†)/2` every this many steps.
pub const RESYMMETRIZE_EVERY: usize = 1000;
/// Largest `dt × (fastest drive rate)` accepted by [`suggest_dt`].
pub const MAX_PHASE_PER_STEP: f64 = 0.15;
/// Largest `dt × (fastest bare frequency)` in the lab frame.
pub const MAX_CARRIER_PHASE_PER_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub record_stride: usize,
    pub frame: Frame,
    pub dq_levels: usize,
    pub jqf_levels: usize,
    pub include_jqf: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            t_start: 0.0,
            t_end: 100.0,
            dt: DEFAULT_DT,
            record_stride: 10,
            frame: Frame::RotatingRwa,
            dq_levels: 4,
            jqf_levels: 2,
            include_jqf: true,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end > self.t_start) {
            return Err(Error::InvalidArgument(format!(
                "t_end ({}) must exceed t_start ({})",
                self.t_end, self.t_start
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidArgument("record_stride must be >= 1".into()));
        }
        if self.dq_levels < 2 || (self.include_jqf && self.jqf_levels < 2) {
            return Err(Error::InvalidDimension("truncations need at least 2 levels".into()));
        }
        Ok(())
    }

    /// Builds the model this configuration describes from untruncated specs.
    pub fn build_model(&self, dq: TransmonSpec, jqf: TransmonSpec) -> Result<SystemModel> {
        let dq = dq.with_levels(self.dq_levels);
        let jqf = self.include_jqf.then(|| jqf.with_levels(self.jqf_levels));
        SystemModel::data_qubit_with_filter(dq, jqf)
    }

    fn check_model(&self, model: &SystemModel) -> Result<()> {
        let jqf_ok = if self.include_jqf {
            model.has_filter() && model.dims()[1] == self.jqf_levels
        } else {
            !model.has_filter()
        };
        if model.dq_levels() != self.dq_levels || !jqf_ok {
            return Err(Error::InvalidDimension(format!(
                "model dims {:?} disagree with config (dq {}, jqf {} included {})",
                model.dims(),
                self.dq_levels,
                self.jqf_levels,
                self.include_jqf
            )));
        }
        Ok(())
    }
}

/// Step size small enough for the strongest drive coupling in the model.
///
/// The filter is driven √(γ₂/γ₁) times harder than the data qubit, so its
/// Rabi rate, not any decay rate, limits the step.
pub fn suggest_dt(model: &SystemModel, drive: &DriveEnvelope, frame: Frame) -> f64 {
    let rate = model.max_drive_rate(drive.peak(), frame);
    let base = match frame {
        Frame::RotatingRwa => DEFAULT_DT,
        // The lab frame must resolve the carrier as well.
        Frame::Lab => MAX_CARRIER_PHASE_PER_STEP / (model.omega_q().abs() * model.dq_levels() as f64).max(1e-12),
    };
    if rate > 0.0 {
        base.min(MAX_PHASE_PER_STEP / rate)
    } else {
        base
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetadata {
    pub config: SimConfig,
    pub omega_d: f64,
    pub drive: DriveEnvelope,
    pub specs: Vec<TransmonSpec>,
    pub steps: usize,
    pub resymmetrizations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub p1: Vec<f64>,
    /// `populations[level][sample]` for each data-qubit level.
    pub populations: Vec<Vec<f64>>,
    pub trace_error: Vec<f64>,
    /// `max(0, −λ_min(ρ))` at each sample.
    pub max_negativity: Vec<f64>,
    /// Largest `|ρ − ρ†|` entry at each sample.
    pub hermiticity_error: Vec<f64>,
    pub metadata: RunMetadata,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_p1(&self) -> Option<f64> {
        self.p1.last().copied()
    }

    /// Samples with `t ∈ [from, to]`.
    pub fn window(&self, from: f64, to: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times
            .iter()
            .copied()
            .zip(self.p1.iter().copied())
            .filter(move |&(t, _)| t >= from - 1e-9 && t <= to + 1e-9)
    }

    /// Writes `t_ns,p1,p0,p2,p3,trace_err,neg`. Levels the model lacks are written as 0.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t_ns,p1,p0,p2,p3,trace_err,neg")?;
        let level = |l: usize, i: usize| self.populations.get(l).map_or(0.0, |p| p[i]);
        for i in 0..self.len() {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                sig12(self.times[i]),
                sig12(self.p1[i]),
                sig12(level(0, i)),
                sig12(level(2, i)),
                sig12(level(3, i)),
                sig12(self.trace_error[i]),
                sig12(self.max_negativity[i]),
            )?;
        }
        Ok(())
    }
}

/// Twelve significant digits in scientific notation.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Integrates from the joint ground state and records data-qubit observables.
pub fn evolve(model: &SystemModel, drive: &DriveEnvelope, omega_d: f64, config: &SimConfig) -> Result<Trajectory> {
    evolve_from(model, drive, omega_d, config, DensityMatrix::ground(model.dim())).map(|(traj, _)| traj)
}

/// As [`evolve`], from an arbitrary initial state; also returns the final state.
pub fn evolve_from(
    model: &SystemModel,
    drive: &DriveEnvelope,
    omega_d: f64,
    config: &SimConfig,
    initial: DensityMatrix,
) -> Result<(Trajectory, DensityMatrix)> {
    config.validate()?;
    config.check_model(model)?;
    drive.validate()?;

    let span = config.t_end - config.t_start;
    let steps = (span / config.dt).round().max(1.0) as usize;
    let dt = span / steps as f64;
    if (dt - config.dt).abs() > 1e-12 * config.dt {
        log::debug!("dt adjusted from {} to {} ns to land on t_end", config.dt, dt);
    }

    let dim = model.dim();
    let n_dq = model.dq_levels();
    let mut gen = Generator::new(model, omega_d, config.frame);
    if initial.dim() != dim {
        return Err(Error::InvalidDimension(format!(
            "initial state dim {} does not match model dim {dim}",
            initial.dim()
        )));
    }
    let mut rho = initial;

    let n_records = steps / config.record_stride + 2;
    let mut traj = Trajectory {
        times: Vec::with_capacity(n_records),
        p1: Vec::with_capacity(n_records),
        populations: vec![Vec::with_capacity(n_records); n_dq],
        trace_error: Vec::with_capacity(n_records),
        max_negativity: Vec::with_capacity(n_records),
        hermiticity_error: Vec::with_capacity(n_records),
        metadata: RunMetadata {
            config: *config,
            omega_d,
            drive: *drive,
            specs: model.specs().to_vec(),
            steps,
            resymmetrizations: 0,
        },
    };

    let zeros = || DMatrix::<C64>::zeros(dim, dim);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (zeros(), zeros(), zeros(), zeros(), zeros());
    let half = C64::new(0.5 * dt, 0.0);
    let full = C64::new(dt, 0.0);
    let sixth = C64::new(dt / 6.0, 0.0);
    let third = C64::new(dt / 3.0, 0.0);

    record(model, &rho, config.t_start, &mut traj)?;
    for step in 1..=steps {
        let t = config.t_start + (step - 1) as f64 * dt;
        let r = rho.matrix();
        gen.rhs_into(t, drive, r, &mut k1);
        tmp.copy_from(r);
        axpy(&mut tmp, half, &k1);
        gen.rhs_into(t + 0.5 * dt, drive, &tmp, &mut k2);
        tmp.copy_from(r);
        axpy(&mut tmp, half, &k2);
        gen.rhs_into(t + 0.5 * dt, drive, &tmp, &mut k3);
        tmp.copy_from(r);
        axpy(&mut tmp, full, &k3);
        gen.rhs_into(t + dt, drive, &tmp, &mut k4);

        let m = rho.matrix_mut();
        axpy(m, sixth, &k1);
        axpy(m, third, &k2);
        axpy(m, third, &k3);
        axpy(m, sixth, &k4);

        if step % RESYMMETRIZE_EVERY == 0 {
            log::debug!(
                "re-symmetrizing rho at step {step} (asymmetry {:.3e})",
                rho.hermiticity_error()
            );
            rho.symmetrize();
            traj.metadata.resymmetrizations += 1;
        }
        if step % config.record_stride == 0 || step == steps {
            record(model, &rho, config.t_start + step as f64 * dt, &mut traj)?;
        }
    }
    Ok((traj, rho))
}

/// `y ← y + a·x`.
fn axpy(y: &mut DMatrix<C64>, a: C64, x: &DMatrix<C64>) {
    for (yi, xi) in y.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *yi += a * xi;
    }
}

fn record(model: &SystemModel, rho: &DensityMatrix, t: f64, traj: &mut Trajectory) -> Result<()> {
    let m = rho.matrix();
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericFailure { t });
    }
    let trace_error = rho.trace_error();
    if trace_error > TRACE_TOLERANCE {
        return Err(Error::NonConvergence { t, trace_error });
    }
    let pops = model.dq_populations(rho);
    traj.times.push(t);
    traj.p1.push(pops.get(1).copied().unwrap_or(0.0));
    for (dst, p) in traj.populations.iter_mut().zip(pops) {
        dst.push(p);
    }
    traj.trace_error.push(trace_error);
    traj.max_negativity.push((-rho.min_eigenvalue()).max(0.0));
    traj.hermiticity_error.push(rho.hermiticity_error());
    Ok(())
}

/// Peak of a sampled series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakEstimate {
    pub t: f64,
    pub p1: f64,
    /// The discrete maximum sits on the first or last sample.
    pub at_boundary: bool,
}

/// Largest `p1`, refined by a parabola through the three samples around the
/// discrete maximum. Ties go to the earliest sample.
pub fn max_p1(traj: &Trajectory) -> Result<PeakEstimate> {
    peak_of(&traj.times, &traj.p1)
}

pub(crate) fn peak_of(times: &[f64], values: &[f64]) -> Result<PeakEstimate> {
    if values.is_empty() || times.len() != values.len() {
        return Err(Error::InvalidArgument("empty trajectory".into()));
    }
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    if best == 0 || best == values.len() - 1 {
        return Ok(PeakEstimate { t: times[best], p1: values[best], at_boundary: true });
    }
    let (x0, x1, x2) = (times[best - 1], times[best], times[best + 1]);
    let (y0, y1, y2) = (values[best - 1], values[best], values[best + 1]);
    // Vertex of the interpolating parabola, in coordinates centered on x1.
    let (h0, h2) = (x0 - x1, x2 - x1);
    let d0 = (y0 - y1) / h0;
    let d2 = (y2 - y1) / h2;
    let curv = (d2 - d0) / (h2 - h0);
    if !(curv < 0.0) {
        return Ok(PeakEstimate { t: x1, p1: y1, at_boundary: false });
    }
    let slope = d0 - curv * h0;
    let u = (-slope / (2.0 * curv)).clamp(h0, h2);
    Ok(PeakEstimate { t: x1 + u, p1: y1 + slope * u + curv * u * u, at_boundary: false })
}

/// Minimum number of samples accepted by the decay and slope fits.
pub const MIN_FIT_SAMPLES: usize = 8;

/// Decay rate from a least-squares fit of `ln p1` against `t` on `[t_fit_start, t_end]`.
pub fn fit_exponential_decay(traj: &Trajectory, t_fit_start: f64) -> Result<f64> {
    let t_end = traj.times.last().copied().unwrap_or(f64::NEG_INFINITY);
    let mut pts = Vec::new();
    for (t, p) in traj.window(t_fit_start, t_end) {
        if !(p > 0.0) {
            return Err(Error::InvalidArgument(format!("p1 = {p} <= 0 at t = {t} inside fit window")));
        }
        pts.push((t, p.ln()));
    }
    linear_fit(&pts).map(|(slope, _)| -slope)
}

/// Least-squares slope of `p1` against `t` on `[from, to]` (1/ns).
pub fn p1_slope(traj: &Trajectory, from: f64, to: f64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = traj.window(from, to).collect();
    linear_fit(&pts).map(|(slope, _)| slope)
}

/// `(slope, intercept)` of an ordinary least-squares line.
pub fn linear_fit(pts: &[(f64, f64)]) -> Result<(f64, f64)> {
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientData { found: pts.len(), needed: MIN_FIT_SAMPLES });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("fit window has zero time extent".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{ghz_to_angular, mhz_to_angular};
    use std::f64::consts::PI;

    fn fig2_dq(levels: usize) -> TransmonSpec {
        TransmonSpec::new(ghz_to_angular(5.0), mhz_to_angular(-300.0), mhz_to_angular(0.002), 0.0, levels).unwrap()
    }

    fn fig2_jqf(levels: usize) -> TransmonSpec {
        TransmonSpec::new(ghz_to_angular(5.0), mhz_to_angular(-300.0), mhz_to_angular(100.0), PI, levels).unwrap()
    }

    fn synthetic(times: Vec<f64>, p1: Vec<f64>) -> Trajectory {
        let n = times.len();
        Trajectory {
            times,
            p1,
            populations: vec![],
            trace_error: vec![0.0; n],
            max_negativity: vec![0.0; n],
            hermiticity_error: vec![0.0; n],
            metadata: RunMetadata {
                config: SimConfig::default(),
                omega_d: 0.0,
                drive: DriveEnvelope::off(),
                specs: vec![],
                steps: 0,
                resymmetrizations: 0,
            },
        }
    }

    #[test]
    fn undriven_vacuum_stays_put() {
        let cfg = SimConfig { t_end: 30.0, ..SimConfig::default() };
        let model = cfg.build_model(fig2_dq(4), fig2_jqf(2)).unwrap();
        let traj = evolve(&model, &DriveEnvelope::off(), model.omega_q(), &cfg).unwrap();
        assert!(traj.p1.iter().all(|&p| p == 0.0));
        assert!(traj.trace_error.iter().all(|&e| e < 1e-14));
        assert_eq!(traj.len(), 301);
    }

    #[test]
    fn resonant_rabi_oscillation_of_lone_qubit() {
        let cfg = SimConfig { t_end: 40.0, dq_levels: 2, include_jqf: false, record_stride: 1, ..SimConfig::default() };
        let model = cfg.build_model(fig2_dq(2), fig2_jqf(2)).unwrap();
        let rabi = mhz_to_angular(16.0);
        let drive = DriveEnvelope::Cw { e_amp: model.amplitude_for_rabi(rabi).unwrap() };
        let traj = evolve(&model, &drive, model.omega_q(), &cfg).unwrap();
        // Oracle: p1 = sin²(Ωt), decay negligible over 40 ns.
        for (&t, &p) in traj.times.iter().zip(&traj.p1) {
            assert!((p - (rabi * t).sin().powi(2)).abs() < 2e-3, "t={t}");
        }
        let peak = max_p1(&traj).unwrap();
        assert!(!peak.at_boundary);
        assert!((peak.t - PI / (2.0 * rabi)).abs() < 0.02, "{}", peak.t);
        let oracle = damped_bloch_peak(rabi, 2.0 * fig2_dq(2).gamma, 40.0);
        assert!((peak.p1 - oracle).abs() < 1e-4, "{} vs {oracle}", peak.p1);
        assert!(peak.p1 < 1.0);
    }

    /// Resonant optical Bloch equations with amplitude damping `gamma`
    /// (T₂ = 2/γ), H = Ω σ_x: returns the largest excited population found
    /// on a fine grid. Independent of the density-matrix machinery.
    fn damped_bloch_peak(rabi: f64, gamma: f64, t_end: f64) -> f64 {
        // State (v, w): v = 2 Im ρ_eg-type coherence, w = ρ_ee − ρ_gg; u decouples.
        let f = |v: f64, w: f64| (2.0 * rabi * w - 0.5 * gamma * v, -2.0 * rabi * v - gamma * (w + 1.0));
        let (mut v, mut w) = (0.0, -1.0);
        let h = 1e-4;
        let mut best = 0.0f64;
        for _ in 0..(t_end / h) as usize {
            let (a1, b1) = f(v, w);
            let (a2, b2) = f(v + 0.5 * h * a1, w + 0.5 * h * b1);
            let (a3, b3) = f(v + 0.5 * h * a2, w + 0.5 * h * b2);
            let (a4, b4) = f(v + h * a3, w + h * b3);
            v += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            w += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
            best = best.max(0.5 * (1.0 + w));
        }
        best
    }

    #[test]
    fn lone_qubit_decays_at_twice_gamma() {
        let mut dq = fig2_dq(2);
        dq.gamma = 0.01;
        let cfg = SimConfig { t_end: 120.0, dq_levels: 2, include_jqf: false, ..SimConfig::default() };
        let model = SystemModel::new(vec![dq]).unwrap();
        let e = crate::drives::pi_pulse_amplitude(5.0, dq.gamma).unwrap();
        let drive = DriveEnvelope::Gaussian { e_amp: e, t0: 10.0, sigma: 5.0 };
        let traj = evolve(&model, &drive, dq.omega, &cfg).unwrap();
        let rate = fit_exponential_decay(&traj, 40.0).unwrap();
        assert!((rate / (2.0 * dq.gamma) - 1.0).abs() < 0.02, "rate {rate}");
    }

    #[test]
    fn mismatched_model_rejected() {
        let cfg = SimConfig::default();
        let model = SystemModel::new(vec![fig2_dq(3)]).unwrap();
        let r = evolve(&model, &DriveEnvelope::off(), 0.0, &cfg);
        assert!(matches!(r, Err(Error::InvalidDimension(_))));
        let bad = SimConfig { dt: -1.0, ..cfg };
        assert!(matches!(evolve(&model, &DriveEnvelope::off(), 0.0, &bad), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn coarse_step_trips_trace_monitor() {
        let cfg = SimConfig { t_end: 5.0, dt: 0.5, record_stride: 1, ..SimConfig::default() };
        let model = cfg.build_model(fig2_dq(4), fig2_jqf(2)).unwrap();
        let drive = DriveEnvelope::Cw { e_amp: model.amplitude_for_rabi(mhz_to_angular(16.0)).unwrap() };
        let r = evolve(&model, &drive, model.omega_q(), &cfg);
        assert!(
            matches!(r, Err(Error::NonConvergence { .. }) | Err(Error::NumericFailure { .. })),
            "{r:?}"
        );
    }

    #[test]
    fn peak_of_symmetric_samples() {
        let traj = synthetic(vec![0.0, 1.0, 2.0, 3.0, 4.0], vec![0.0, 0.5, 1.0, 0.5, 0.0]);
        let p = max_p1(&traj).unwrap();
        assert_eq!((p.t, p.p1, p.at_boundary), (2.0, 1.0, false));
    }

    #[test]
    fn peak_of_monotone_series() {
        let traj = synthetic(vec![0.0, 1.0, 2.0], vec![0.1, 0.2, 0.3]);
        let p = max_p1(&traj).unwrap();
        assert!(p.at_boundary);
        assert_eq!(p.t, 2.0);
        assert!(max_p1(&synthetic(vec![], vec![])).is_err());
    }

    #[test]
    fn peak_refinement_recovers_off_grid_vertex() {
        let times: Vec<f64> = (0..20).map(|i| i as f64 * 0.3).collect();
        let p1: Vec<f64> = times.iter().map(|t| 0.9 - 0.2 * (t - 2.71).powi(2)).collect();
        let p = max_p1(&synthetic(times, p1)).unwrap();
        assert!((p.t - 2.71).abs() < 1e-12);
        assert!((p.p1 - 0.9).abs() < 1e-12);
    }

    #[test]
    fn peak_ties_go_earliest() {
        let traj = synthetic(vec![0.0, 1.0, 2.0, 3.0, 4.0], vec![0.0, 1.0, 0.0, 1.0, 0.0]);
        assert!(max_p1(&traj).unwrap().t < 1.5);
    }

    #[test]
    fn exponential_fit_exact() {
        let times: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let p1 = times.iter().map(|t| 0.9 * (-0.01 * t).exp()).collect();
        let rate = fit_exponential_decay(&synthetic(times, p1), 10.0).unwrap();
        assert!((rate - 0.01).abs() < 1e-6);
    }

    #[test]
    fn exponential_fit_needs_samples() {
        let times: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let p1 = vec![0.5; 10];
        let r = fit_exponential_decay(&synthetic(times, p1), 5.0);
        assert!(matches!(r, Err(Error::InsufficientData { found: 5, .. })));
    }

    #[test]
    fn csv_format() {
        let traj = synthetic(vec![0.0, 0.1], vec![0.0, 0.25]);
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t_ns,p1,p0,p2,p3,trace_err,neg"));
        assert_eq!(
            lines.next(),
            Some("0.00000000000e0,0.00000000000e0,0.00000000000e0,0.00000000000e0,0.00000000000e0,0.00000000000e0,0.00000000000e0")
        );
        assert!(lines.next().unwrap().starts_with("1.00000000000e-1,2.50000000000e-1,"));
    }

    #[test]
    fn purity_conserved_without_loss() {
        let mut dq = fig2_dq(3);
        dq.gamma = 0.0;
        let mut jqf = fig2_jqf(2);
        jqf.gamma = 0.0;
        let model = SystemModel::new(vec![dq, jqf]).unwrap();
        let amps: Vec<C64> = (0..6).map(|i| C64::new(1.0 + i as f64, 0.5 * i as f64 - 1.0)).collect();
        let rho0 = DensityMatrix::pure(&amps).unwrap();
        let cfg = SimConfig { t_end: 100.0, dq_levels: 3, ..SimConfig::default() };
        let (traj, rho) = evolve_from(&model, &DriveEnvelope::off(), dq.omega - 0.3, &cfg, rho0).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-8, "purity {}", rho.purity());
        // Populations are constants of the motion here; coherences rotate.
        assert!((traj.p1[0] - traj.p1[traj.len() - 1]).abs() < 1e-10);
    }

    #[test]
    fn deterministic_runs() {
        let cfg = SimConfig { t_end: 20.0, ..SimConfig::default() };
        let model = cfg.build_model(fig2_dq(4), fig2_jqf(2)).unwrap();
        let drive = DriveEnvelope::Gaussian { e_amp: 1.0, t0: 10.0, sigma: 5.0 };
        let a = evolve(&model, &drive, model.omega_q(), &cfg).unwrap();
        let b = evolve(&model, &drive, model.omega_q(), &cfg).unwrap();
        assert_eq!(a, b);
    }
}
