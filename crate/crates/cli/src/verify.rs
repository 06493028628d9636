//! `verify`: residual checks for schedules and circuits.
//!
//! A schedule is read as a sequence of three-leg rotation blocks (field
//! segments whose areas are `θ, π, π - θ` with equal outer phases) and
//! single coupling segments. Anything else is reported as unrecognized and
//! fails verification.

use std::f64::consts::PI;

use holostar::architecture::{compile, simulate, Circuit, StarArchitecture};
use holostar::document::{parse_document, to_json, Document};
use holostar::pulse::{segment_unitary, PulseSchedule, PulseSegment, SegmentKind};
use holostar::qcore::{phase_invariant_distance, Operator, StateVector};
use holostar::single_qubit::{loop_phase, target_unitary, GeometricPhaseReport, RotationTarget};
use holostar::two_qubit::{block_decompose, transport_along};
use holostar::{angular_distance, wrap_phase, Complex64, Tolerances};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::config::{read_input, CliError, Context, Output};

#[derive(Serialize)]
struct LoopCheck {
    dynamical_phase: f64,
    geometric_phase: f64,
    expected_phase: f64,
    max_integrand: f64,
    cyclicity_residual: f64,
}

impl LoopCheck {
    fn new(r: GeometricPhaseReport, expected: f64) -> Self {
        LoopCheck {
            dynamical_phase: r.dynamical_phase,
            geometric_phase: r.geometric_phase,
            expected_phase: expected,
            max_integrand: r.max_integrand,
            cyclicity_residual: (1.0 - r.overlap).abs(),
        }
    }

    fn passes(&self, tol: &Tolerances) -> bool {
        self.dynamical_phase.abs() <= tol.phase
            && angular_distance(self.geometric_phase, self.expected_phase) <= tol.phase
            && self.max_integrand <= tol.integrand
            && self.cyclicity_residual <= tol.unitary
    }
}

#[derive(Serialize)]
struct RotationCheck {
    segments: [usize; 3],
    qubit: usize,
    theta: f64,
    phi: f64,
    dphi: f64,
    synthesis_distance: f64,
    psi: LoopCheck,
    orthogonal: LoopCheck,
    pass: bool,
}

#[derive(Serialize)]
struct CouplingCheck {
    segment: usize,
    pair: [usize; 2],
    mix_theta: f64,
    area: f64,
    off_block_residual: f64,
    static_residual: f64,
    transport_residual: f64,
    pass: bool,
}

#[derive(Serialize)]
struct Unrecognized {
    segment: usize,
    reason: String,
}

#[derive(Serialize)]
struct SimulationCheck {
    input: String,
    aux_match_probability: f64,
    ideal_fidelity: f64,
    pass: bool,
}

#[derive(Serialize, Default)]
struct MaxResiduals {
    synthesis: f64,
    dynamical_phase: f64,
    integrand: f64,
    off_block: f64,
    transport: f64,
}

#[derive(Serialize)]
struct VerifyReport {
    document: &'static str,
    rotations: Vec<RotationCheck>,
    couplings: Vec<CouplingCheck>,
    unrecognized: Vec<Unrecognized>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    simulation: Vec<SimulationCheck>,
    max_residuals: MaxResiduals,
    tolerances: Tolerances,
    pass: bool,
}

fn field_parts(seg: &PulseSegment) -> Option<(usize, f64)> {
    match seg.kind() {
        SegmentKind::Field { qubit, beta } => Some((qubit, beta)),
        SegmentKind::Coupling { .. } => None,
    }
}

/// Read three field segments as a rotation target, if they form one.
fn rotation_target(legs: &[PulseSegment], tol: f64) -> Option<(usize, RotationTarget)> {
    let [a, b, c] = legs else { return None };
    let (qa, b1) = field_parts(a)?;
    let (qb, b2) = field_parts(b)?;
    let (qc, b3) = field_parts(c)?;
    let theta = a.area();
    let shaped = qa == qb
        && qb == qc
        && angular_distance(b1, b3) <= tol
        && (b.area() - PI).abs() <= tol
        && (theta + c.area() - PI).abs() <= tol
        && (-tol..=PI + tol).contains(&theta);
    if !shaped {
        return None;
    }
    let target = RotationTarget::new(
        theta.clamp(0.0, PI),
        b1 + PI / 2.0,
        wrap_phase(b2 - b1 - PI),
    )
    .ok()?;
    Some((qa, target))
}

fn check_rotation(
    start: usize,
    legs: &[PulseSegment],
    qubit: usize,
    target: RotationTarget,
    samples: usize,
    tol: &Tolerances,
) -> Result<RotationCheck, CliError> {
    let local = PulseSchedule::from_segments(qubit + 1, legs.to_vec())?;
    let composed = legs.iter().try_fold(Operator::identity(2), |acc, s| {
        segment_unitary(s).compose(&acc)
    })?;
    let synthesis_distance = phase_invariant_distance(&composed, &target_unitary(&target))?;
    let psi = LoopCheck::new(loop_phase(&local, &target.state(), samples)?, target.dphi());
    let orthogonal = LoopCheck::new(
        loop_phase(&local, &target.orthogonal_state(), samples)?,
        -target.dphi(),
    );
    let pass = synthesis_distance <= tol.synthesis && psi.passes(tol) && orthogonal.passes(tol);
    Ok(RotationCheck {
        segments: [start, start + 1, start + 2],
        qubit,
        theta: target.theta(),
        phi: target.phi(),
        dphi: target.dphi(),
        synthesis_distance,
        psi,
        orthogonal,
        pass,
    })
}

fn check_coupling(
    index: usize,
    seg: &PulseSegment,
    samples: usize,
    tol: &Tolerances,
) -> Result<CouplingCheck, CliError> {
    let SegmentKind::Coupling { k, l, mix_theta } = seg.kind() else {
        unreachable!("caller passes coupling segments only")
    };
    let dec = block_decompose(&segment_unitary(seg), mix_theta)?;
    let transport = transport_along(seg, samples)?;
    let (static_residual, transport_residual) = (transport.max_static(), transport.max_transport());
    Ok(CouplingCheck {
        segment: index,
        pair: [k, l],
        mix_theta,
        area: seg.area(),
        off_block_residual: dec.off_block_residual,
        static_residual,
        transport_residual,
        pass: dec.off_block_residual <= tol.block
            && static_residual <= tol.transport
            && transport_residual <= tol.transport,
    })
}

fn check_schedule(
    schedule: &PulseSchedule,
    samples: usize,
    tol: &Tolerances,
) -> Result<VerifyReport, CliError> {
    let segs = schedule.segments();
    let mut report = VerifyReport {
        document: "schedule",
        rotations: Vec::new(),
        couplings: Vec::new(),
        unrecognized: Vec::new(),
        simulation: Vec::new(),
        max_residuals: MaxResiduals::default(),
        tolerances: *tol,
        pass: true,
    };
    let mut i = 0;
    while i < segs.len() {
        if !segs[i].is_field() {
            report
                .couplings
                .push(check_coupling(i, &segs[i], samples, tol)?);
            i += 1;
            continue;
        }
        let legs = &segs[i..(i + 3).min(segs.len())];
        match rotation_target(legs, tol.synthesis) {
            Some((qubit, target)) => {
                report
                    .rotations
                    .push(check_rotation(i, legs, qubit, target, samples, tol)?);
                i += 3;
            }
            None => {
                report.unrecognized.push(Unrecognized {
                    segment: i,
                    reason: "field segment does not start a θ, π, π-θ rotation block".into(),
                });
                i += 1;
            }
        }
    }
    let m = &mut report.max_residuals;
    for r in &report.rotations {
        m.synthesis = m.synthesis.max(r.synthesis_distance);
        for l in [&r.psi, &r.orthogonal] {
            m.dynamical_phase = m.dynamical_phase.max(l.dynamical_phase.abs());
            m.integrand = m.integrand.max(l.max_integrand);
        }
    }
    for c in &report.couplings {
        m.off_block = m.off_block.max(c.off_block_residual);
        m.transport = m.transport.max(c.transport_residual.max(c.static_residual));
    }
    report.pass = report.unrecognized.is_empty()
        && report.rotations.iter().all(|r| r.pass)
        && report.couplings.iter().all(|c| c.pass);
    Ok(report)
}

/// |0…0⟩ plus a few seeded random register states.
fn circuit_inputs(n: usize, seed: u64) -> Result<Vec<(String, StateVector)>, CliError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut inputs = vec![("0".repeat(n), StateVector::basis(n, 0)?)];
    for j in 0..4 {
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        inputs.push((format!("random#{j}"), StateVector::normalized(n, amps)?));
    }
    Ok(inputs)
}

fn check_circuit(
    circuit: &Circuit,
    arch: &StarArchitecture,
    samples: usize,
    ctx: &Context,
) -> Result<VerifyReport, CliError> {
    let tol = &ctx.tol;
    let mut report = check_schedule(&compile(circuit, arch)?, samples, tol)?;
    report.document = "circuit";
    for (label, psi) in circuit_inputs(arch.n_register(), ctx.seed.unwrap_or(0))? {
        let r = simulate(circuit, arch, &psi)?;
        report.simulation.push(SimulationCheck {
            input: label,
            aux_match_probability: r.aux_match_probability,
            ideal_fidelity: r.ideal_fidelity,
            pass: r.aux_match_probability >= 1.0 - tol.ancilla
                && r.ideal_fidelity >= 1.0 - tol.fidelity,
        });
    }
    report.pass &= report.simulation.iter().all(|s| s.pass);
    Ok(report)
}

pub fn verify(ctx: &Context, path: &str, samples: usize) -> Result<Output, CliError> {
    ctx.require_json("verify")?;
    if samples < 2 {
        return Err(CliError::usage("--samples must be at least 2"));
    }
    let report = match parse_document(&read_input(path)?)? {
        Document::Schedule(doc) => {
            check_schedule(&PulseSchedule::try_from(&doc)?, samples, &ctx.tol)?
        }
        Document::Circuit(doc) => {
            let (circuit, arch) = doc.to_circuit()?;
            check_circuit(&circuit, &arch, samples, ctx)?
        }
    };
    Ok(Output {
        text: to_json(&report)?,
        pass: report.pass,
    })
}
