//! Piecewise pulse schedules and time evolution through them.
//!
//! Each segment drives one term of the collective Hamiltonian with a fixed
//! direction (field phase `β`, or coupling mixing angle `θ`) and a
//! non-negative amplitude envelope. Because the direction is fixed, the
//! segment Hamiltonian commutes with itself at all times and the segment
//! unitary depends only on the envelope area.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::qcore::{pauli, Axis, Operator, Propagator, StateVector};
use crate::two_qubit::build_hkl;
use crate::{normalize_angle, Error, Result};

/// Samples per segment used by dynamical-phase checks unless overridden.
pub const DEFAULT_SAMPLES: usize = 64;

/// The coupling unitary is `4π`-periodic in pulse area (spectrum `{0, ±1/2}`).
const COUPLING_PERIOD: f64 = 2.0 * TAU;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    #[default]
    Constant,
    SinSquared,
}

/// Non-negative amplitude profile over `[0, duration]` with a given area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    shape: Shape,
    duration: f64,
    area: f64,
}

impl Envelope {
    pub fn new(shape: Shape, duration: f64, area: f64) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::invalid("duration", format!("{duration} is not > 0")));
        }
        if !(area.is_finite() && area >= 0.0) {
            return Err(Error::invalid("area", format!("{area} is not >= 0")));
        }
        Ok(Envelope {
            shape,
            duration,
            area,
        })
    }

    /// Unit-duration envelope of the given shape.
    pub fn unit(shape: Shape, area: f64) -> Result<Self> {
        Envelope::new(shape, 1.0, area)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// Instantaneous amplitude at local time `t ∈ [0, duration]`.
    pub fn amplitude(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.duration);
        match self.shape {
            Shape::Constant => self.area / self.duration,
            Shape::SinSquared => {
                2.0 * self.area / self.duration * (PI * t / self.duration).sin().powi(2)
            }
        }
    }

    /// `∫_0^t amplitude(s) ds`.
    pub fn cumulative_area(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.duration);
        if t == self.duration {
            return self.area;
        }
        let x = t / self.duration;
        match self.shape {
            Shape::Constant => self.area * x,
            Shape::SinSquared => self.area * (x - (TAU * x).sin() / TAU),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentKind {
    /// Local transverse field `(B/2)(cos β σx + sin β σy)` on one register qubit.
    Field { qubit: usize, beta: f64 },
    /// Exchange coupling of register qubits `k` and `l` to the auxiliary with
    /// `(J_k, J_l) = Ω (cos θ/2, sin θ/2)`.
    Coupling { k: usize, l: usize, mix_theta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSegment {
    kind: SegmentKind,
    envelope: Envelope,
}

impl PulseSegment {
    /// Field segment; `beta` is normalized into `[0, 2π)`.
    pub fn field(qubit: usize, beta: f64, envelope: Envelope) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::invalid("beta", "not finite"));
        }
        Ok(PulseSegment {
            kind: SegmentKind::Field {
                qubit,
                beta: normalize_angle(beta),
            },
            envelope,
        })
    }

    /// Coupling segment. `mix_theta` must lie in `[0, π]` and `k != l`.
    pub fn coupling(k: usize, l: usize, mix_theta: f64, envelope: Envelope) -> Result<Self> {
        if k == l {
            return Err(Error::invalid("pair", format!("k == l == {k}")));
        }
        if !(0.0..=PI).contains(&mix_theta) {
            return Err(Error::invalid(
                "mix_theta",
                format!("{mix_theta} outside [0, π]"),
            ));
        }
        Ok(PulseSegment {
            kind: SegmentKind::Coupling { k, l, mix_theta },
            envelope,
        })
    }

    pub fn kind(&self) -> SegmentKind {
        self.kind
    }

    pub fn envelope(&self) -> Envelope {
        self.envelope
    }

    pub fn area(&self) -> f64 {
        self.envelope.area
    }

    pub fn duration(&self) -> f64 {
        self.envelope.duration
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, SegmentKind::Field { .. })
    }

    /// Largest register index touched.
    pub fn max_register_index(&self) -> usize {
        match self.kind {
            SegmentKind::Field { qubit, .. } => qubit,
            SegmentKind::Coupling { k, l, .. } => k.max(l),
        }
    }

    /// Number of qubits the local Hamiltonian acts on (1 or 3).
    pub fn local_qubits(&self) -> usize {
        match self.kind {
            SegmentKind::Field { .. } => 1,
            SegmentKind::Coupling { .. } => 3,
        }
    }

    /// Positions of the local factors in a star register of `n_register`
    /// qubits plus the auxiliary at index `n_register`.
    pub fn targets(&self, n_register: usize) -> Vec<usize> {
        match self.kind {
            SegmentKind::Field { qubit, .. } => vec![qubit],
            SegmentKind::Coupling { k, l, .. } => vec![k, n_register, l],
        }
    }

    /// Local Hamiltonian at unit amplitude.
    pub fn unit_hamiltonian(&self) -> Operator {
        match self.kind {
            SegmentKind::Field { beta, .. } => {
                let h = pauli(Axis::X)
                    .scale_real(beta.cos())
                    .add(&pauli(Axis::Y).scale_real(beta.sin()))
                    .expect("2x2 operands");
                h.scale_real(0.5)
            }
            SegmentKind::Coupling { mix_theta, .. } => {
                build_hkl((mix_theta / 2.0).cos(), (mix_theta / 2.0).sin())
            }
        }
    }

    /// A segment whose unitary is the inverse of this one's: the field
    /// direction is reversed (`β → β + π`); coupling areas are complemented
    /// modulo the `4π` period.
    pub fn inverse(&self) -> PulseSegment {
        match self.kind {
            SegmentKind::Field { qubit, beta } => PulseSegment {
                kind: SegmentKind::Field {
                    qubit,
                    beta: normalize_angle(beta + PI),
                },
                envelope: self.envelope,
            },
            SegmentKind::Coupling { .. } => {
                let rem = self.envelope.area.rem_euclid(COUPLING_PERIOD);
                let area = if rem == 0.0 {
                    0.0
                } else {
                    COUPLING_PERIOD - rem
                };
                PulseSegment {
                    kind: self.kind,
                    envelope: Envelope {
                        area,
                        ..self.envelope
                    },
                }
            }
        }
    }
}

/// Local Hamiltonian of `seg` at the given instantaneous amplitude.
pub fn segment_hamiltonian(seg: &PulseSegment, amplitude: f64) -> Result<Operator> {
    if amplitude.is_nan() || amplitude < 0.0 {
        return Err(Error::NegativeAmplitude(amplitude));
    }
    Ok(seg.unit_hamiltonian().scale_real(amplitude))
}

/// Exact final unitary of a segment: `exp(-i · area · H_unit)`.
pub fn segment_unitary(seg: &PulseSegment) -> Operator {
    Propagator::new(&seg.unit_hamiltonian())
        .expect("unit Hamiltonian is Hermitian")
        .at(seg.area())
}

/// Sequential list of pulse segments on a star register.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    n_register: usize,
    segments: Vec<PulseSegment>,
}

impl PulseSchedule {
    pub fn new(n_register: usize) -> Result<Self> {
        if n_register == 0 {
            return Err(Error::invalid("n_register", "must be positive"));
        }
        Ok(PulseSchedule {
            n_register,
            segments: Vec::new(),
        })
    }

    pub fn from_segments(n_register: usize, segments: Vec<PulseSegment>) -> Result<Self> {
        let mut schedule = PulseSchedule::new(n_register)?;
        for seg in segments {
            schedule.push(seg)?;
        }
        Ok(schedule)
    }

    pub fn push(&mut self, seg: PulseSegment) -> Result<()> {
        let idx = seg.max_register_index();
        if idx >= self.n_register {
            return Err(Error::QubitOutOfRange {
                index: idx,
                n_qubits: self.n_register,
            });
        }
        self.segments.push(seg);
        Ok(())
    }

    pub fn extend(&mut self, other: &PulseSchedule) -> Result<()> {
        for seg in &other.segments {
            self.push(*seg)?;
        }
        Ok(())
    }

    pub fn n_register(&self) -> usize {
        self.n_register
    }

    pub fn segments(&self) -> &[PulseSegment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration()).sum()
    }

    /// Segment-wise inverse in reverse order.
    pub fn inverse(&self) -> PulseSchedule {
        PulseSchedule {
            n_register: self.n_register,
            segments: self.segments.iter().rev().map(|s| s.inverse()).collect(),
        }
    }

    /// Qubit positions of each segment for a state of `n_qubits`.
    ///
    /// A state over `n_register + 1` qubits is the full star register (the
    /// auxiliary is the last qubit). Otherwise the state must match every
    /// segment's local size, and segments act on it directly.
    fn layout(&self, n_qubits: usize) -> Result<Layout> {
        if n_qubits == self.n_register + 1 {
            return Ok(Layout::Register);
        }
        if self.segments.iter().any(|s| s.local_qubits() != n_qubits) {
            return Err(Error::DimensionMismatch {
                expected: 1 << (self.n_register + 1),
                found: 1 << n_qubits,
            });
        }
        Ok(Layout::Local)
    }
}

#[derive(Debug, Clone, Copy)]
enum Layout {
    Register,
    Local,
}

impl Layout {
    fn targets(self, seg: &PulseSegment, n_register: usize) -> Vec<usize> {
        match self {
            Layout::Register => seg.targets(n_register),
            Layout::Local => (0..seg.local_qubits()).collect(),
        }
    }
}

/// Apply every segment unitary in order.
pub fn evolve(schedule: &PulseSchedule, psi: &StateVector) -> Result<StateVector> {
    let layout = schedule.layout(psi.n_qubits())?;
    let mut state = psi.clone();
    for seg in &schedule.segments {
        let u = segment_unitary(seg);
        state.apply_local(&u, &layout.targets(seg, schedule.n_register))?;
    }
    Ok(state)
}

/// Sample the dynamical-phase integrand `⟨ψ(t)|H(t)|ψ(t)⟩` at `samples`
/// evenly spaced times in every segment (endpoints included).
///
/// Times are global: segment `j` starts where segment `j - 1` ended, so
/// boundary times appear twice.
pub fn expectation_trace(
    schedule: &PulseSchedule,
    psi: &StateVector,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    if samples < 2 {
        return Err(Error::invalid("samples", "need at least 2 per segment"));
    }
    let layout = schedule.layout(psi.n_qubits())?;
    let mut state = psi.clone();
    let mut out = Vec::with_capacity(samples * schedule.len());
    let mut t0 = 0.0;
    for seg in &schedule.segments {
        let targets = layout.targets(seg, schedule.n_register);
        let h = seg.unit_hamiltonian();
        let prop = Propagator::new(&h)?;
        let env = seg.envelope;
        for j in 0..samples {
            let t = env.duration * j as f64 / (samples - 1) as f64;
            let mut at_t = state.clone();
            at_t.apply_local(&prop.at(env.cumulative_area(t)), &targets)?;
            let mut h_psi = at_t.clone();
            h_psi.apply_local(&h, &targets)?;
            let value = env.amplitude(t) * at_t.inner(&h_psi)?.re;
            out.push((t0 + t, value));
        }
        state.apply_local(&prop.at(env.area), &targets)?;
        t0 += env.duration;
    }
    Ok(out)
}

/// Dynamical phase `-∫⟨H⟩ dt` from a sampled trace (trapezoid rule).
pub fn dynamical_phase(trace: &[(f64, f64)]) -> f64 {
    -trace
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
        .sum::<f64>()
}

/// Largest `|⟨H⟩|` in a sampled trace.
pub fn max_integrand(trace: &[(f64, f64)]) -> f64 {
    trace.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{phase_invariant_distance, Tensor};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_PI_2;

    fn field(beta: f64, area: f64) -> PulseSegment {
        PulseSegment::field(0, beta, Envelope::unit(Shape::Constant, area).unwrap()).unwrap()
    }

    fn single(segs: Vec<PulseSegment>) -> PulseSchedule {
        PulseSchedule::from_segments(1, segs).unwrap()
    }

    #[test]
    fn envelope_area_matches_integral() {
        for shape in [Shape::Constant, Shape::SinSquared] {
            let env = Envelope::new(shape, 2.5, 1.7).unwrap();
            // midpoint rule as an independent check
            let n = 20_000;
            let dt = env.duration() / n as f64;
            let integral: f64 = (0..n)
                .map(|i| env.amplitude((i as f64 + 0.5) * dt) * dt)
                .sum();
            assert!((integral - 1.7).abs() < 1e-8, "{shape:?}: {integral}");
            assert_eq!(env.cumulative_area(2.5), 1.7);
            assert!(env.cumulative_area(0.0).abs() < 1e-15);
        }
        assert!(Envelope::new(Shape::Constant, 0.0, 1.0).is_err());
        assert!(Envelope::new(Shape::Constant, 1.0, -1.0).is_err());
    }

    #[test]
    fn field_hamiltonian_beta_zero() {
        let h = segment_hamiltonian(&field(0.0, 1.0), 1.0).unwrap();
        assert!(h.max_abs_diff(&pauli(Axis::X).scale_real(0.5)) < 1e-16);
        assert!(matches!(
            segment_hamiltonian(&field(0.0, 1.0), -1.0),
            Err(Error::NegativeAmplitude(_))
        ));
    }

    #[test]
    fn coupling_hamiltonian_entries() {
        let env = Envelope::unit(Shape::Constant, 2.0 * PI).unwrap();
        let seg = PulseSegment::coupling(0, 1, 0.0, env).unwrap();
        assert_eq!(segment_hamiltonian(&seg, 0.0).unwrap().max_abs(), 0.0);
        let h = segment_hamiltonian(&seg, 1.3).unwrap();
        assert!((h.get(0b010, 0b100).re - 0.65).abs() < 1e-15);
        assert_eq!(h.get(0b010, 0b001).norm(), 0.0);
        assert!(PulseSegment::coupling(1, 1, 0.0, env).is_err());
        assert!(PulseSegment::coupling(0, 1, 3.5, env).is_err());
    }

    #[test]
    fn field_unitary_area_pi() {
        let u = segment_unitary(&field(0.0, PI));
        let expected = pauli(Axis::X).scale(Complex64::new(0.0, -1.0));
        assert!(u.max_abs_diff(&expected) < 1e-15);
        assert!(segment_unitary(&field(1.234, 0.0)).max_abs_diff(&Operator::identity(2)) < 1e-15);
    }

    #[test]
    fn step_two_moves_north_to_south_pole() {
        let phi_t = 0.83;
        let out = evolve(
            &single(vec![field(phi_t + FRAC_PI_2, PI)]),
            &StateVector::basis(1, 0).unwrap(),
        )
        .unwrap();
        let expected = Complex64::from_polar(1.0, phi_t);
        assert!((out.amplitudes()[1] - expected).norm() < 1e-14);
        assert!(out.amplitudes()[0].norm() < 1e-14);
    }

    #[test]
    fn step_one_reaches_north_pole() {
        let (theta, phi) = (1.1, 2.3);
        let out = evolve(
            &single(vec![field(phi - FRAC_PI_2, theta)]),
            &StateVector::bloch(theta, phi),
        )
        .unwrap();
        assert!((out.amplitudes()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn empty_schedule_is_identity() {
        let psi = StateVector::bloch(0.4, 0.2);
        assert_eq!(evolve(&single(vec![]), &psi).unwrap(), psi);
    }

    #[test]
    fn areas_add_for_equal_beta() {
        let psi = StateVector::bloch(0.9, 4.0);
        let split = evolve(&single(vec![field(0.7, 0.4), field(0.7, 1.9)]), &psi).unwrap();
        let joined = evolve(&single(vec![field(0.7, 2.3)]), &psi).unwrap();
        assert!(split.inner(&joined).unwrap().norm() > 1.0 - 1e-14);
        assert!(split
            .amplitudes()
            .iter()
            .zip(joined.amplitudes())
            .all(|(a, b)| (a - b).norm() < 1e-14));
    }

    #[test]
    fn evolve_rejects_wrong_dimension() {
        let sched = single(vec![field(0.0, 1.0)]);
        assert!(evolve(&sched, &StateVector::basis(3, 0).unwrap()).is_err());
        // full register = 2 qubits, field acts on qubit 0
        let out = evolve(&sched, &StateVector::basis(2, 0).unwrap()).unwrap();
        assert_eq!(out.n_qubits(), 2);
    }

    #[test]
    fn trace_zero_amplitude_and_condition_one() {
        let psi = StateVector::bloch(FRAC_PI_2, 0.0);
        let zero = expectation_trace(&single(vec![field(0.3, 0.0)]), &psi, 16).unwrap();
        assert!(zero.iter().all(|&(_, v)| v == 0.0));
        let ok = expectation_trace(&single(vec![field(-FRAC_PI_2, FRAC_PI_2)]), &psi, 64).unwrap();
        assert!(max_integrand(&ok) < 1e-10);
        let bad = expectation_trace(&single(vec![field(0.0, FRAC_PI_2)]), &psi, 64).unwrap();
        assert!(max_integrand(&bad) > 0.1);
        assert!(expectation_trace(&single(vec![]), &psi, 1).is_err());
    }

    #[test]
    fn trace_times_are_global() {
        let psi = StateVector::basis(1, 0).unwrap();
        let tr =
            expectation_trace(&single(vec![field(0.0, 1.0), field(0.0, 1.0)]), &psi, 3).unwrap();
        let times: Vec<f64> = tr.iter().map(|p| p.0).collect();
        assert_eq!(times, vec![0.0, 0.5, 1.0, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn dynamical_phase_of_violating_segment() {
        // H = (B/2)σx on |+⟩: ⟨H⟩ = B/2, area π/2 → phase -π/4
        let psi = StateVector::bloch(FRAC_PI_2, 0.0);
        let tr = expectation_trace(&single(vec![field(0.0, FRAC_PI_2)]), &psi, 64).unwrap();
        assert!((dynamical_phase(&tr) + PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn coupling_inverse_undoes_partial_pulse() {
        let env = Envelope::unit(Shape::Constant, 1.3).unwrap();
        let seg = PulseSegment::coupling(0, 1, 0.8, env).unwrap();
        let u = segment_unitary(&seg);
        let v = segment_unitary(&seg.inverse());
        assert!((&v * &u).max_abs_diff(&Operator::identity(8)) < 1e-12);
        let f = field(2.0, 0.9);
        let w = &segment_unitary(&f.inverse()) * &segment_unitary(&f);
        assert!(phase_invariant_distance(&w, &Operator::identity(2)).unwrap() < 1e-8);
    }

    #[test]
    fn full_register_embedding_puts_auxiliary_last() {
        // n_register = 2: qubits (r0, r1, aux). Coupling (0,1) at θ=π/2 swaps
        // |r0=1, r1=0⟩ into -|r0=0, r1=1⟩ with aux in |0⟩.
        let env = Envelope::unit(Shape::Constant, 2.0 * PI).unwrap();
        let sched = PulseSchedule::from_segments(
            2,
            vec![PulseSegment::coupling(0, 1, FRAC_PI_2, env).unwrap()],
        )
        .unwrap();
        let input = StateVector::from_bits("10")
            .unwrap()
            .tensor(&StateVector::basis(1, 0).unwrap());
        let out = evolve(&sched, &input).unwrap();
        let expected = StateVector::from_bits("010").unwrap();
        assert!((out.inner(&expected).unwrap() + Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
}
