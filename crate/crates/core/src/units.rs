//! Linear ↔ angular frequency conversions.
//!
//! Internally every frequency is angular, in rad/ns. User-facing values are
//! linear GHz or MHz.

use std::f64::consts::TAU;

pub fn ghz_to_angular(f_ghz: f64) -> f64 {
    TAU * f_ghz
}

pub fn mhz_to_angular(f_mhz: f64) -> f64 {
    TAU * f_mhz * 1e-3
}

pub fn angular_to_ghz(w: f64) -> f64 {
    w / TAU
}

pub fn angular_to_mhz(w: f64) -> f64 {
    w / TAU * 1e3
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        assert!((angular_to_ghz(ghz_to_angular(5.0017)) - 5.0017).abs() < 1e-15);
        assert!((angular_to_mhz(mhz_to_angular(-300.0)) + 300.0).abs() < 1e-12);
        assert!((mhz_to_angular(100.0) - 0.628_318_530_717_958_6).abs() < 1e-15);
    }
}
