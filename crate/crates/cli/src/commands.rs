use std::f64::consts::PI;

use holostar::angular_distance;
use holostar::architecture::{
    random_circuit, sample_auxiliary, simulate_with, Circuit, ShotCounts, StarArchitecture,
};
use holostar::document::{format_f64, parse_circuit, to_json, CircuitDoc, Document, ScheduleDoc};
use holostar::pulse::{PulseSchedule, Shape};
use holostar::qcore::{Operator, StateVector};
use holostar::single_qubit::{
    geometric_phase_with, synthesize_with, target_unitary, verify_synthesis_with, RotationTarget,
    Transported,
};
use holostar::two_qubit::{
    entangling_power, entangling_power_formula, two_qubit_gate, CouplingGateSpec,
};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::config::{read_input, CliError, Context, Output};
use crate::Format;

fn json_output<T: Serialize>(value: &T, pass: bool) -> Result<Output, CliError> {
    Ok(Output {
        text: to_json(value)?,
        pass,
    })
}

fn schedule_doc(schedule: &PulseSchedule) -> Document {
    Document::Schedule(ScheduleDoc::from(schedule))
}

#[derive(Serialize)]
struct TargetEcho {
    theta: f64,
    phi: f64,
    dphi: f64,
}

#[derive(Serialize)]
struct Synth1qReport {
    target: TargetEcho,
    schedule: Document,
    target_matrix: Operator,
    verify_distance: f64,
    tolerance: f64,
    pass: bool,
}

pub fn synth1q(
    ctx: &Context,
    theta: f64,
    phi: f64,
    dphi: f64,
    qubit: usize,
    shape: Shape,
) -> Result<Output, CliError> {
    ctx.require_json("synth1q")?;
    let target = RotationTarget::new(theta, phi, dphi)?;
    let schedule = synthesize_with(&target, qubit, shape);
    let distance = verify_synthesis_with(&target, shape);
    let pass = distance <= ctx.tol.synthesis;
    let report = Synth1qReport {
        target: TargetEcho {
            theta: target.theta(),
            phi: target.phi(),
            dphi: target.dphi(),
        },
        schedule: schedule_doc(&schedule),
        target_matrix: target_unitary(&target),
        verify_distance: distance,
        tolerance: ctx.tol.synthesis,
        pass,
    };
    json_output(&report, pass)
}

#[derive(Serialize)]
struct Synth2qReport {
    mix_theta: f64,
    pair: [usize; 2],
    coupling_ratios: [f64; 2],
    schedule: Document,
    u0: Operator,
    u1: Operator,
    off_block_residual: f64,
    entangling_power: f64,
    tolerance: f64,
    pass: bool,
}

pub fn synth2q(
    ctx: &Context,
    theta: f64,
    k: usize,
    l: usize,
    shape: Shape,
) -> Result<Output, CliError> {
    ctx.require_json("synth2q")?;
    let spec = CouplingGateSpec::with_shape(theta, k, l, shape)?;
    let schedule = PulseSchedule::from_segments(k.max(l) + 1, vec![spec.segment()])?;
    let dec = two_qubit_gate(&spec);
    let (jk, jl) = spec.coupling_ratios();
    let pass = dec.off_block_residual <= ctx.tol.block;
    let report = Synth2qReport {
        mix_theta: spec.mix_theta(),
        pair: [k, l],
        coupling_ratios: [jk, jl],
        schedule: schedule_doc(&schedule),
        entangling_power: entangling_power(&dec.u0)?,
        u0: dec.u0,
        u1: dec.u1,
        off_block_residual: dec.off_block_residual,
        tolerance: ctx.tol.block,
        pass,
    };
    json_output(&report, pass)
}

pub enum CircuitSource {
    Path(String),
    Random {
        len: usize,
        n_register: usize,
        aux: u8,
    },
}

#[derive(Serialize)]
struct SimulateReport {
    circuit: Document,
    input_bits: String,
    aux_match_probability: f64,
    ideal_fidelity: f64,
    register_state: StateVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    shots: Option<ShotCounts>,
    pass: bool,
}

/// Parse a bit string, first character = most significant register qubit.
fn parse_bits(bits: &str, n_register: usize) -> Result<usize, CliError> {
    if bits.len() != n_register || !bits.chars().all(|c| c == '0' || c == '1') {
        return Err(CliError::usage(format!(
            "--input must be {n_register} characters of 0/1, got {bits:?}"
        )));
    }
    Ok(bits
        .chars()
        .fold(0, |acc, c| (acc << 1) | (c == '1') as usize))
}

pub fn simulate(
    ctx: &Context,
    source: CircuitSource,
    input: Option<&str>,
    shots: Option<u64>,
    shape: Shape,
) -> Result<Output, CliError> {
    ctx.require_json("simulate")?;
    let mut rng = StdRng::seed_from_u64(ctx.seed.unwrap_or(0));
    let (circuit, arch): (Circuit, StarArchitecture) = match source {
        CircuitSource::Path(path) => parse_circuit(&read_input(&path)?)?,
        CircuitSource::Random {
            len,
            n_register,
            aux,
        } => {
            let arch = StarArchitecture::new(n_register, aux)?;
            (random_circuit(n_register, len, &mut rng), arch)
        }
    };
    let n = arch.n_register();
    let bits = input.map(str::to_owned).unwrap_or_else(|| "0".repeat(n));
    let psi = StateVector::basis(n, parse_bits(&bits, n)?)?;
    let result = simulate_with(&circuit, &arch, &psi, shape)?;
    let shots = shots.map(|s| sample_auxiliary(&result, s, &mut rng));
    let pass = result.aux_match_probability >= 1.0 - ctx.tol.ancilla
        && result.ideal_fidelity >= 1.0 - ctx.tol.fidelity;
    let report = SimulateReport {
        circuit: Document::Circuit(CircuitDoc::new(&circuit, &arch)),
        input_bits: bits,
        aux_match_probability: result.aux_match_probability,
        ideal_fidelity: result.ideal_fidelity,
        register_state: result.register_state,
        shots,
        pass,
    };
    json_output(&report, pass)
}

#[derive(Serialize)]
struct EpRow {
    theta: f64,
    entangling_power: f64,
    formula: f64,
    abs_diff: f64,
}

#[derive(Serialize)]
struct EpSweep {
    rows: Vec<EpRow>,
    tolerance: f64,
    pass: bool,
}

fn csv<const N: usize>(header: [&str; N], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn grid_points(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |j| {
        if j + 1 == n {
            hi
        } else {
            lo + (hi - lo) * j as f64 / (n - 1) as f64
        }
    })
}

pub fn ep_sweep(ctx: &Context, grid: usize) -> Result<Output, CliError> {
    if grid < 2 {
        return Err(CliError::usage("--grid must be at least 2"));
    }
    let mut rows = Vec::with_capacity(grid);
    for theta in grid_points(0.0, PI, grid) {
        let dec = two_qubit_gate(&CouplingGateSpec::new(theta, 0, 1)?);
        let ep = entangling_power(&dec.u0)?;
        let formula = entangling_power_formula(theta);
        rows.push(EpRow {
            theta,
            entangling_power: ep,
            formula,
            abs_diff: (ep - formula).abs(),
        });
    }
    let pass = rows.iter().all(|r| r.abs_diff <= ctx.tol.entangling_power);
    match ctx.format {
        Format::Json => json_output(
            &EpSweep {
                rows,
                tolerance: ctx.tol.entangling_power,
                pass,
            },
            pass,
        ),
        Format::Csv => Ok(Output {
            text: csv(
                ["theta", "entangling_power", "formula", "abs_diff"],
                rows.iter().map(|r| {
                    [r.theta, r.entangling_power, r.formula, r.abs_diff]
                        .map(format_f64)
                        .to_vec()
                }),
            ),
            pass,
        }),
    }
}

#[derive(Serialize)]
struct PhaseRow {
    dphi: f64,
    state: &'static str,
    total_phase: f64,
    dynamical_phase: f64,
    geometric_phase: f64,
    expected: f64,
    error: f64,
    max_integrand: f64,
}

#[derive(Serialize)]
struct PhaseReport {
    theta: f64,
    phi: f64,
    rows: Vec<PhaseRow>,
    phase_tolerance: f64,
    integrand_tolerance: f64,
    pass: bool,
}

pub fn phase_report(
    ctx: &Context,
    theta: f64,
    phi: f64,
    grid: usize,
    samples: usize,
    shape: Shape,
) -> Result<Output, CliError> {
    if grid < 2 {
        return Err(CliError::usage("--grid must be at least 2"));
    }
    let mut rows = Vec::with_capacity(2 * grid);
    // (-π, π]: the endpoints -π and π name the same rotation
    for dphi in (1..=grid).map(|j| -PI + 2.0 * PI * j as f64 / grid as f64) {
        let target = RotationTarget::new(theta, phi, dphi)?;
        for (which, label, expected) in [
            (Transported::Psi, "psi", target.dphi()),
            (Transported::Orthogonal, "orthogonal", -target.dphi()),
        ] {
            let r = geometric_phase_with(&target, which, shape, samples)?;
            rows.push(PhaseRow {
                dphi: target.dphi(),
                state: label,
                total_phase: r.total_phase,
                dynamical_phase: r.dynamical_phase,
                geometric_phase: r.geometric_phase,
                expected,
                error: angular_distance(r.geometric_phase, expected),
                max_integrand: r.max_integrand,
            });
        }
    }
    let pass = rows.iter().all(|r| {
        r.error <= ctx.tol.phase
            && r.dynamical_phase.abs() <= ctx.tol.phase
            && r.max_integrand <= ctx.tol.integrand
    });
    match ctx.format {
        Format::Json => {
            let (theta, phi) = {
                let t = RotationTarget::new(theta, phi, 0.0)?;
                (t.theta(), t.phi())
            };
            json_output(
                &PhaseReport {
                    theta,
                    phi,
                    rows,
                    phase_tolerance: ctx.tol.phase,
                    integrand_tolerance: ctx.tol.integrand,
                    pass,
                },
                pass,
            )
        }
        Format::Csv => Ok(Output {
            text: csv(
                [
                    "dphi",
                    "state",
                    "total_phase",
                    "dynamical_phase",
                    "geometric_phase",
                    "expected",
                    "error",
                    "max_integrand",
                ],
                rows.iter().map(|r| {
                    let mut v = vec![format_f64(r.dphi), r.state.to_string()];
                    v.extend(
                        [
                            r.total_phase,
                            r.dynamical_phase,
                            r.geometric_phase,
                            r.expected,
                            r.error,
                            r.max_integrand,
                        ]
                        .map(format_f64),
                    );
                    v
                }),
            ),
            pass,
        }),
    }
}
