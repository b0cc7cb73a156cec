//! Shared fixtures for the criterion benches.

use std::f64::consts::PI;

use jqf_core::units::{ghz_to_angular, mhz_to_angular};
use jqf_core::{SimConfig, SystemModel, TransmonSpec};

/// Data qubit and filter with the reference parameters (5 GHz, α/2π = −300 MHz,
/// γ₁/2π = 2 kHz, γ₂/2π = 100 MHz, filter half a wavelength away).
pub fn reference_model(dq_levels: usize, jqf_levels: usize) -> SystemModel {
    let cfg = SimConfig { dq_levels, jqf_levels, ..SimConfig::default() };
    let w = ghz_to_angular(5.0);
    let a = mhz_to_angular(-300.0);
    let dq = TransmonSpec::new(w, a, mhz_to_angular(0.002), 0.0, dq_levels).expect("valid spec");
    let jqf = TransmonSpec::new(w, a, mhz_to_angular(100.0), PI, jqf_levels).expect("valid spec");
    cfg.build_model(dq, jqf).expect("valid model")
}
