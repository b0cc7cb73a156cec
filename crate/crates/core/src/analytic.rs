//! Closed-form three-level treatment of a driven transmon.
//!
//! In the frame rotating at `ω_d`, with the drive in the rotating-wave
//! approximation, the lowest three levels of the data qubit see
//!
//! ```text
//!     | 0        Ω          0        |
//! H = | Ω        ω−ω_d      √2Ω      |
//!     | 0        √2Ω        2(ω−ω_d)+α|
//! ```
//!
//! Diagonalizing the `{|1⟩, |2⟩}` block gives dressed states `|±⟩`; Rabi
//! oscillations between `|0⟩` and `|+⟩` are resonant when `E₊ = 0`. A
//! Schrieffer–Wolff rotation to second order in Ω gives the same shift and the
//! same population deficit to leading order.
//!
//! All frequencies here are angular (rad/ns).

use nalgebra::{Matrix2, Matrix3};

use crate::error::{Error, Result};

/// Dressed-state quantities of the `{|1⟩, |2⟩}` block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevelDressed {
    pub a: f64,
    pub b: f64,
    pub s: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    /// `|+⟩ = cos θ₊|1⟩ + sin θ₊|2⟩`.
    pub theta_plus: f64,
    pub theta_minus: f64,
}

impl ThreeLevelDressed {
    /// `√(a² + b²)`.
    pub fn radius(&self) -> f64 {
        self.a.hypot(self.b)
    }

    /// `(⟨1|+⟩, ⟨2|+⟩)` from the mixing angle.
    pub fn plus_state(&self) -> (f64, f64) {
        (self.theta_plus.cos(), self.theta_plus.sin())
    }

    pub fn minus_state(&self) -> (f64, f64) {
        (self.theta_minus.cos(), self.theta_minus.sin())
    }

    /// `|±⟩ = −(b/s)|1⟩ + ((a ∓ √(a²+b²))/s)|2⟩`. Normalized for `|+⟩` only;
    /// the `|−⟩` vector points the right way but has norm `√((r+a)/(r−a))`.
    pub fn plus_minus_amplitudes(&self) -> Option<[(f64, f64); 2]> {
        if self.s == 0.0 {
            return None;
        }
        let r = self.radius();
        Some([
            (-self.b / self.s, (self.a - r) / self.s),
            (-self.b / self.s, (self.a + r) / self.s),
        ])
    }

    /// The `{|1⟩,|2⟩}` block `H₂` itself.
    pub fn block(omega: f64, omega_d: f64, alpha: f64, rabi: f64) -> Matrix2<f64> {
        let det = omega - omega_d;
        let b = std::f64::consts::SQRT_2 * rabi;
        Matrix2::new(det, b, b, 2.0 * det + alpha)
    }
}

/// Eigen-decomposition of the dressed `{|1⟩, |2⟩}` block.
///
/// Mixing angles are taken from the eigenvectors: `tan θ₊ = (r − a)/b` and
/// `tan θ₋ = −(r + a)/b`, with `r = √(a²+b²)`. For the transmon regime
/// (`a > 0`) this makes `|+⟩ → |1⟩` and `|−⟩ → |2⟩` as `Ω → 0`.
pub fn dressed_states(omega: f64, omega_d: f64, alpha: f64, rabi: f64) -> Result<ThreeLevelDressed> {
    if !(rabi >= 0.0) {
        return Err(Error::InvalidArgument(format!("Rabi frequency must be >= 0, got {rabi}")));
    }
    let a = 0.5 * (-alpha - omega + omega_d);
    let b = std::f64::consts::SQRT_2 * rabi;
    let r = a.hypot(b);
    // r − a = b²/(r + a) avoids cancellation when a > 0.
    let r_minus_a = if a > 0.0 { b * b / (r + a) } else { r - a };
    let s = (2.0 * r * r_minus_a).sqrt();
    let center = 0.5 * (3.0 * (omega - omega_d) + alpha);
    let (theta_plus, theta_minus) = if b == 0.0 {
        if a >= 0.0 {
            (0.0, std::f64::consts::FRAC_PI_2)
        } else {
            (std::f64::consts::FRAC_PI_2, 0.0)
        }
    } else {
        (r_minus_a.atan2(b), (r + a).atan2(-b))
    };
    Ok(ThreeLevelDressed {
        a,
        b,
        s,
        e_plus: center + r,
        e_minus: center - r,
        theta_plus,
        theta_minus,
    })
}

/// Leading-order resonance shift `ω_d − ω ≈ −2Ω²/α`.
pub fn resonance_shift(rabi: f64, alpha: f64) -> Result<f64> {
    if alpha == 0.0 {
        return Err(Error::DivisionByZero("harmonic limit has no dispersive shift"));
    }
    Ok(-2.0 * rabi * rabi / alpha)
}

/// Exact root of `E₊(ω_d) = 0`, by bisection to `tol` (rad/ns).
pub fn exact_resonance(omega: f64, alpha: f64, rabi: f64, tol: f64) -> Result<f64> {
    let e_plus = |wd: f64| dressed_states(omega, wd, alpha, rabi).map(|d| d.e_plus);
    let guess = omega + resonance_shift(rabi, alpha)?;
    let mut width = (guess - omega).abs().max(tol) * 2.0 + 1e-9;
    let (mut lo, mut hi) = (guess - width, guess + width);
    // E₊ is decreasing in ω_d; widen until it changes sign.
    for _ in 0..60 {
        if e_plus(lo)? >= 0.0 && e_plus(hi)? <= 0.0 {
            break;
        }
        width *= 2.0;
        lo = guess - width;
        hi = guess + width;
    }
    if !(e_plus(lo)? >= 0.0 && e_plus(hi)? <= 0.0) {
        return Err(Error::InvalidArgument("no resonance root found".into()));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if e_plus(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Maximum `|1⟩` population of the `|0⟩ ↔ |+⟩` oscillation, `b²/s²`.
pub fn p1_max_exact(rabi: f64, alpha: f64, omega: f64, omega_d: f64) -> Result<f64> {
    let d = dressed_states(omega, omega_d, alpha, rabi)?;
    let r = d.radius();
    if d.s == 0.0 {
        // Only reachable with b = 0; the Ω → 0 limit is 1 when a > 0.
        return if d.a > 0.0 {
            Ok(1.0)
        } else {
            Err(Error::DegenerateLevels("dressed splitting vanishes (s = 0)"))
        };
    }
    // b²/s² = (r + a)/(2r), which stays accurate as b → 0.
    Ok((r + d.a) / (2.0 * r))
}

/// Small-drive expansion `1 − 2Ω²/α²`.
pub fn p1_max_approx(rabi: f64, alpha: f64) -> Result<f64> {
    if alpha == 0.0 {
        return Err(Error::DivisionByZero("harmonic limit has no population bound"));
    }
    Ok(1.0 - 2.0 * rabi * rabi / (alpha * alpha))
}

/// Effective energies of `|1⟩` and `|2⟩` after the second-order
/// Schrieffer–Wolff rotation: `E₊ = ε₁ − 2Ω²/(ε₂−ε₁)`, `E₋ = ε₂ + 2Ω²/(ε₂−ε₁)`.
///
/// `ε₁ = ω − ω_d`, `ε₂ = 2(ω − ω_d) + α`.
pub fn sw_effective_energies(eps1: f64, eps2: f64, rabi: f64) -> Result<(f64, f64)> {
    let gap = eps2 - eps1;
    if gap == 0.0 {
        return Err(Error::DegenerateLevels("eps1 == eps2"));
    }
    let shift = 2.0 * rabi * rabi / gap;
    Ok((eps1 - shift, eps2 + shift))
}

/// Leading-order loss of `|1⟩` population, `(√2Ω/(ε₂−ε₁))²`.
pub fn sw_population_deficit(eps1: f64, eps2: f64, rabi: f64) -> Result<f64> {
    let gap = eps2 - eps1;
    if gap == 0.0 {
        return Err(Error::DegenerateLevels("eps1 == eps2"));
    }
    Ok(2.0 * rabi * rabi / (gap * gap))
}

/// Full rotating-frame three-level Hamiltonian in the bare basis.
pub fn three_level_hamiltonian(omega: f64, omega_d: f64, alpha: f64, rabi: f64) -> Matrix3<f64> {
    let det = omega - omega_d;
    let b = std::f64::consts::SQRT_2 * rabi;
    Matrix3::new(0.0, rabi, 0.0, rabi, det, b, 0.0, b, 2.0 * det + alpha)
}

/// One row of the calibration table printed by the CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationTable {
    pub shift: f64,
    pub exact_resonance: f64,
    pub p1_max_exact: f64,
    pub p1_max_approx: f64,
    pub dressed: ThreeLevelDressed,
    pub sw_energies: (f64, f64),
    pub sw_deficit: f64,
}

/// Everything the closed forms say about a drive of strength `rabi` on a
/// qubit at `omega` with anharmonicity `alpha`. Dressed and SW energies are
/// evaluated at `ω_d = ω`; `p1_max_exact` at the leading-order resonance.
pub fn calibration_table(omega: f64, alpha: f64, rabi: f64) -> Result<CalibrationTable> {
    let shift = resonance_shift(rabi, alpha)?;
    let exact = exact_resonance(omega, alpha, rabi, std::f64::consts::TAU * 1e-9)?;
    Ok(CalibrationTable {
        shift,
        exact_resonance: exact,
        p1_max_exact: p1_max_exact(rabi, alpha, omega, omega + shift)?,
        p1_max_approx: p1_max_approx(rabi, alpha)?,
        dressed: dressed_states(omega, omega, alpha, rabi)?,
        sw_energies: sw_effective_energies(0.0, alpha, rabi)?,
        sw_deficit: sw_population_deficit(0.0, alpha, rabi)?,
    })
}
