//! Drive envelopes `E_d(t)` and pulse calculus.
//!
//! Amplitudes carry units of √(rad/ns): multiplying by a qubit's drive
//! coefficient `√(2γ)·cos φ` gives an angular Rabi rate. A Gaussian `sigma`
//! is the full width at half maximum, not the standard deviation.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};

/// `√(π / (4 ln 2))`: area of a unit-height Gaussian of unit FWHM.
pub const GAUSSIAN_AREA_FACTOR: f64 = 1.064_467_019_431_226_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveEnvelope {
    Cw { e_amp: f64 },
    /// `e_amp·θ(t − t0p)`, with `θ(0) = 1`.
    Step { e_amp: f64, t0p: f64 },
    /// Gaussian rise up to `t0`, then constant.
    GaussianRamp { e_amp: f64, t0: f64, sigma: f64 },
    Gaussian { e_amp: f64, t0: f64, sigma: f64 },
}

impl DriveEnvelope {
    pub fn off() -> Self {
        DriveEnvelope::Cw { e_amp: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let e_amp = self.amplitude();
        if !(e_amp >= 0.0 && e_amp.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "drive amplitude must be finite and non-negative, got {e_amp}"
            )));
        }
        match *self {
            DriveEnvelope::GaussianRamp { sigma, .. } | DriveEnvelope::Gaussian { sigma, .. }
                if !(sigma > 0.0 && sigma.is_finite()) =>
            {
                Err(Error::InvalidArgument(format!(
                    "gaussian sigma must be positive, got {sigma}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn amplitude(&self) -> f64 {
        match *self {
            DriveEnvelope::Cw { e_amp }
            | DriveEnvelope::Step { e_amp, .. }
            | DriveEnvelope::GaussianRamp { e_amp, .. }
            | DriveEnvelope::Gaussian { e_amp, .. } => e_amp,
        }
    }

    pub fn with_amplitude(self, e_amp: f64) -> Self {
        match self {
            DriveEnvelope::Cw { .. } => DriveEnvelope::Cw { e_amp },
            DriveEnvelope::Step { t0p, .. } => DriveEnvelope::Step { e_amp, t0p },
            DriveEnvelope::GaussianRamp { t0, sigma, .. } => {
                DriveEnvelope::GaussianRamp { e_amp, t0, sigma }
            }
            DriveEnvelope::Gaussian { t0, sigma, .. } => DriveEnvelope::Gaussian { e_amp, t0, sigma },
        }
    }

    /// `E_d(t)`; zero for `t < 0`.
    pub fn value(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match *self {
            DriveEnvelope::Cw { e_amp } => e_amp,
            DriveEnvelope::Step { e_amp, t0p } => {
                if t >= t0p {
                    e_amp
                } else {
                    0.0
                }
            }
            DriveEnvelope::GaussianRamp { e_amp, t0, sigma } => {
                if t >= t0 {
                    e_amp
                } else {
                    e_amp * gaussian_shape(t - t0, sigma)
                }
            }
            DriveEnvelope::Gaussian { e_amp, t0, sigma } => e_amp * gaussian_shape(t - t0, sigma),
        }
    }

    /// `∫₀^{t_end} E_d(t) dt`, in closed form.
    pub fn pulse_area(&self, t_end: f64) -> Result<f64> {
        if !(t_end >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "pulse area needs t_end >= 0, got {t_end}"
            )));
        }
        Ok(match *self {
            DriveEnvelope::Cw { e_amp } => e_amp * t_end,
            DriveEnvelope::Step { e_amp, t0p } => e_amp * (t_end - t0p.max(0.0)).max(0.0),
            DriveEnvelope::GaussianRamp { e_amp, t0, sigma } => {
                let rise_end = t_end.min(t0);
                let rise = if rise_end > 0.0 {
                    gaussian_integral(0.0, rise_end, t0, sigma)
                } else {
                    0.0
                };
                e_amp * (rise + (t_end - t0.max(0.0)).max(0.0))
            }
            DriveEnvelope::Gaussian { e_amp, t0, sigma } => {
                e_amp * gaussian_integral(0.0, t_end, t0, sigma)
            }
        })
    }

    /// Largest value the envelope takes for `t ≥ 0`.
    pub fn peak(&self) -> f64 {
        self.amplitude()
    }
}

/// `exp(−4 ln2 · x²/σ²)`.
fn gaussian_shape(x: f64, sigma: f64) -> f64 {
    (-4.0 * LN_2 * x * x / (sigma * sigma)).exp()
}

/// `∫_a^b exp(−4 ln2 (t−t0)²/σ²) dt`.
fn gaussian_integral(a: f64, b: f64, t0: f64, sigma: f64) -> f64 {
    let k = 2.0 * LN_2.sqrt() / sigma;
    0.5 * sigma * GAUSSIAN_AREA_FACTOR * (libm::erf(k * (b - t0)) - libm::erf(k * (a - t0)))
}

/// Spectral FWHM (GHz) of a Gaussian envelope with temporal FWHM `sigma` (ns).
pub fn spectral_fwhm(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    Ok(4.0 * LN_2 / (PI * sigma))
}

/// Amplitude of a Gaussian π pulse: `∫ 2√(2γ₁)E_d dt = π` over the whole pulse.
pub fn pi_pulse_amplitude(sigma: f64, gamma1: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    if !(gamma1 > 0.0) {
        return Err(Error::InvalidArgument(format!("gamma1 must be positive, got {gamma1}")));
    }
    let rabi = PI / (2.0 * sigma * GAUSSIAN_AREA_FACTOR);
    Ok(rabi / (2.0 * gamma1).sqrt())
}

/// Switch-on time `t0p` of a step whose long-time area matches the ramp.
pub fn matched_step_onset(t0: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    let rise = if t0 > 0.0 {
        gaussian_integral(0.0, t0, t0, sigma)
    } else {
        0.0
    };
    Ok(t0.max(0.0) - rise)
}
