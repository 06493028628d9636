//! Three-step "orange slice" synthesis of holonomic single-qubit gates.
//!
//! A target `(θ, φ, Δφ)` names the Bloch state `|ψ⟩ = cos θ/2 |0⟩ + e^{iφ} sin θ/2 |1⟩`
//! and the phase it should pick up. The three field pulses carry `|ψ⟩` to the
//! north pole along the meridian `φ`, over to the south pole along the
//! meridian `φ + Δφ`, and back along `φ`. Every leg keeps `⟨H⟩ = 0`, so the
//! accumulated phase `Δφ` is purely geometric and the gate is the rotation
//! `cos Δφ + i sin Δφ (m̂·σ)` about `m̂ = (sin θ cos φ, sin θ sin φ, cos θ)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::pulse::{
    dynamical_phase, evolve, expectation_trace, max_integrand, segment_unitary, Envelope,
    PulseSchedule, PulseSegment, Shape, DEFAULT_SAMPLES,
};
use crate::qcore::{pauli, phase_invariant_distance, Axis, Operator, StateVector};
use crate::{normalize_angle, wrap_phase, Error, Result};

/// Holonomic rotation `R_m̂(Δφ)` with axis given by polar `θ` and azimuth `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationTarget {
    theta: f64,
    phi: f64,
    dphi: f64,
}

impl RotationTarget {
    /// `θ` must lie in `[0, π]`; `φ` is normalized into `[0, 2π)` and `Δφ`
    /// wrapped into `(-π, π]`.
    pub fn new(theta: f64, phi: f64, dphi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::invalid("theta", format!("{theta} outside [0, π]")));
        }
        if !phi.is_finite() {
            return Err(Error::invalid("phi", "not finite"));
        }
        if !dphi.is_finite() {
            return Err(Error::invalid("dphi", "not finite"));
        }
        Ok(RotationTarget {
            theta,
            phi: normalize_angle(phi),
            dphi: wrap_phase(dphi),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn dphi(&self) -> f64 {
        self.dphi
    }

    pub fn axis(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// `|ψ⟩`, the eigenstate picking up `+Δφ`.
    pub fn state(&self) -> StateVector {
        StateVector::bloch(self.theta, self.phi)
    }

    /// `|ψ⊥⟩`, the eigenstate picking up `-Δφ`.
    pub fn orthogonal_state(&self) -> StateVector {
        StateVector::bloch_orthogonal(self.theta, self.phi)
    }
}

/// Which eigenstate of the gate is transported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Transported {
    Psi,
    Orthogonal,
}

/// Field phases and areas of the three legs for `target`.
pub fn synthesis_segments(
    target: &RotationTarget,
    qubit: usize,
    shape: Shape,
) -> [PulseSegment; 3] {
    let meridian = target.phi - FRAC_PI_2;
    let return_meridian = target.phi + target.dphi + FRAC_PI_2;
    let leg = |beta: f64, area: f64| {
        let env = Envelope::unit(shape, area.max(0.0)).expect("finite non-negative area");
        PulseSegment::field(qubit, beta, env).expect("finite beta")
    };
    [
        leg(meridian, target.theta),
        leg(return_meridian, PI),
        leg(meridian, PI - target.theta),
    ]
}

/// The three-segment schedule (constant envelopes) on a register just large
/// enough to hold `qubit`. Zero-area legs are kept.
pub fn synthesize(target: &RotationTarget, qubit: usize) -> PulseSchedule {
    synthesize_with(target, qubit, Shape::Constant)
}

pub fn synthesize_with(target: &RotationTarget, qubit: usize, shape: Shape) -> PulseSchedule {
    PulseSchedule::from_segments(qubit + 1, synthesis_segments(target, qubit, shape).to_vec())
        .expect("segments target qubit < n_register")
}

/// `cos Δφ · I + i sin Δφ · (m̂·σ)`.
pub fn target_unitary(target: &RotationTarget) -> Operator {
    let [mx, my, mz] = target.axis();
    let (s, c) = target.dphi.sin_cos();
    let m_sigma = pauli(Axis::X)
        .scale_real(mx)
        .add(&pauli(Axis::Y).scale_real(my))
        .and_then(|a| a.add(&pauli(Axis::Z).scale_real(mz)))
        .expect("2x2 operands");
    let u = Operator::identity(2)
        .scale_real(c)
        .add(&m_sigma.scale(Complex64::new(0.0, s)))
        .expect("2x2 operands");
    u.into_unitary().expect("SU(2) rotation")
}

/// Product of the three leg unitaries, last leg leftmost.
pub fn composed_unitary(target: &RotationTarget, shape: Shape) -> Operator {
    let [a, b, c] = synthesis_segments(target, 0, shape);
    &(&segment_unitary(&c) * &segment_unitary(&b)) * &segment_unitary(&a)
}

/// Phase-invariant distance between the synthesized and target gates.
pub fn verify_synthesis(target: &RotationTarget) -> f64 {
    verify_synthesis_with(target, Shape::Constant)
}

pub fn verify_synthesis_with(target: &RotationTarget, shape: Shape) -> f64 {
    phase_invariant_distance(&composed_unitary(target, shape), &target_unitary(target))
        .expect("2x2 operands")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricPhaseReport {
    /// `arg⟨ψ|ψ_final⟩`.
    pub total_phase: f64,
    /// `-∫⟨H⟩ dt`.
    pub dynamical_phase: f64,
    /// `total - dynamical`, wrapped to `(-π, π]`.
    pub geometric_phase: f64,
    /// Largest sampled `|⟨H⟩|` along the loop.
    pub max_integrand: f64,
    /// `|⟨ψ|ψ_final⟩|`; one for a cyclic evolution.
    pub overlap: f64,
}

/// Transport `|ψ⟩` (or `|ψ⊥⟩`) around the synthesized loop and split the
/// acquired phase into dynamical and geometric parts.
pub fn geometric_phase(
    target: &RotationTarget,
    which: Transported,
) -> Result<GeometricPhaseReport> {
    geometric_phase_with(target, which, Shape::Constant, DEFAULT_SAMPLES)
}

pub fn geometric_phase_with(
    target: &RotationTarget,
    which: Transported,
    shape: Shape,
    samples: usize,
) -> Result<GeometricPhaseReport> {
    let schedule = synthesize_with(target, 0, shape);
    let psi = match which {
        Transported::Psi => target.state(),
        Transported::Orthogonal => target.orthogonal_state(),
    };
    loop_phase(&schedule, &psi, samples)
}

/// Phase bookkeeping for an arbitrary schedule acting on a single-qubit state.
pub fn loop_phase(
    schedule: &PulseSchedule,
    psi: &StateVector,
    samples: usize,
) -> Result<GeometricPhaseReport> {
    let out = evolve(schedule, psi)?;
    let overlap = psi.inner(&out)?;
    let trace = expectation_trace(schedule, psi, samples)?;
    let total_phase = overlap.arg();
    let dynamical_phase = dynamical_phase(&trace);
    Ok(GeometricPhaseReport {
        total_phase,
        dynamical_phase,
        geometric_phase: wrap_phase(total_phase - dynamical_phase),
        max_integrand: max_integrand(&trace),
        overlap: overlap.norm(),
    })
}

/// Which zero-dynamical-phase condition a constant-`β` field leg satisfies
/// for the state at polar angle `theta`, azimuth `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParallelCondition {
    /// `φ - β ≡ π/2 (mod π)`: the field is perpendicular to the state's meridian plane.
    Perpendicular,
    /// `θ ∈ {0, π}`: the state sits on a pole.
    Pole,
}

pub fn parallel_condition(theta: f64, phi: f64, beta: f64, tol: f64) -> Option<ParallelCondition> {
    if theta.abs() <= tol || (theta - PI).abs() <= tol {
        return Some(ParallelCondition::Pole);
    }
    // distance of φ - β - π/2 to the nearest multiple of π
    let x = (phi - beta - FRAC_PI_2).rem_euclid(PI);
    if x.min(PI - x) <= tol {
        return Some(ParallelCondition::Perpendicular);
    }
    None
}
