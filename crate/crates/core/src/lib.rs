//! Pulse-level simulator, compiler and verifier for nonadiabatic holonomic
//! gates on a star-shaped spin-qubit register.
//!
//! `n` register spins sit around a single auxiliary spin. Single-qubit gates
//! are driven by local transverse fields in a three-step cyclic protocol;
//! two-qubit gates use an XY exchange between two register spins and the
//! auxiliary, which produces a double-Λ coupling structure. Everything is
//! simulated exactly on dense state vectors with `ħ = 1`.
//!
//! Module map:
//!
//! - [`qcore`]: dense operators, state vectors, projectors, partial traces.
//! - [`pulse`]: envelopes, pulse segments and schedules, time evolution.
//! - [`single_qubit`]: orange-slice synthesis and geometric-phase extraction.
//! - [`two_qubit`]: double-Λ Hamiltonian, block gates, holonomy certificates.
//! - [`architecture`]: star register, circuit compiler, end-to-end simulator.
//! - [`document`]: the JSON text format shared by the CLI and the web demo.

pub mod architecture;
pub mod document;
pub mod error;
pub mod pulse;
pub mod qcore;
pub mod single_qubit;
pub mod tolerance;
pub mod two_qubit;

pub use error::{Error, Result};
pub use tolerance::Tolerances;

pub use num_complex::Complex64;

/// Wrap an angle into `(-π, π]`. Values already in range are returned untouched.
pub fn wrap_phase(angle: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    if angle > -PI && angle <= PI {
        return angle;
    }
    let y = angle.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Normalize an angle into `[0, 2π)`. Values already in range are returned untouched.
pub fn normalize_angle(angle: f64) -> f64 {
    use std::f64::consts::TAU;
    if (0.0..TAU).contains(&angle) {
        return angle;
    }
    let y = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if y >= TAU {
        0.0
    } else {
        y
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_keeps_pi_and_maps_minus_pi() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_phase(-0.3), -0.3);
    }

    #[test]
    fn normalize_is_idempotent() {
        for x in [-7.0, -PI / 2.0, 0.0, 1.0, 2.0 * PI, 13.0, -1e-18] {
            let y = normalize_angle(x);
            assert!((0.0..2.0 * PI).contains(&y));
            assert_eq!(normalize_angle(y), y);
        }
    }

    #[test]
    fn angular_distance_is_circular() {
        assert!(angular_distance(PI, -PI) < 1e-15);
        assert!((angular_distance(0.1, -0.1) - 0.2).abs() < 1e-15);
    }
}
