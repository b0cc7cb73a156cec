//! Simulation and calibration of a transmon data qubit protected by a
//! Josephson quantum filter (JQF) on a semi-infinite transmission line.
//!
//! Module map:
//!
//! - [`hilbert`]: dense operators on truncated modes, `(DQ, JQF)` ordering.
//! - [`model`]: Hamiltonian, collective decay matrix ξ, equation of motion.
//! - [`drives`]: envelope shapes and pulse calculus.
//! - [`analytic`]: closed-form three-level and Schrieffer–Wolff results.
//! - [`integrator`]: RK4 time evolution and trajectory analysis.
//! - [`experiments`]: resonance searches, pulse optimization, sweeps.
//!
//! Frequencies are angular (rad/ns) everywhere in this crate; see [`units`]
//! for conversions from GHz and MHz.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod drives;
pub mod error;
pub mod experiments;
pub mod hilbert;
pub mod integrator;
pub mod model;
pub mod optimize;
pub mod units;

pub use drives::DriveEnvelope;
pub use error::{Error, Result};
pub use hilbert::{DensityMatrix, OperatorMatrix, C64};
pub use integrator::{evolve, SimConfig, Trajectory};
pub use model::{Frame, SystemModel, TransmonSpec};
