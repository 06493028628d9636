//! The star register and its circuit compiler.
//!
//! `n` register qubits surround one auxiliary qubit. Internally the register
//! occupies qubits `0..n` and the auxiliary sits at index `n`, the least
//! significant bit of the full basis index. The auxiliary is prepared in
//! `|q⟩`, every gate is compiled to pulses, and at the end the auxiliary is
//! projected back onto `|q⟩`.

use rand::Rng;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

use crate::pulse::{evolve, PulseSchedule, Shape};
use crate::qcore::{Operator, StateVector, Tensor};
use crate::single_qubit::{synthesis_segments, target_unitary, RotationTarget};
use crate::two_qubit::{reference_block, CouplingGateSpec};
use crate::{Error, Result, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StarArchitecture {
    n_register: usize,
    auxiliary_state: u8,
}

impl StarArchitecture {
    pub fn new(n_register: usize, auxiliary_state: u8) -> Result<Self> {
        if n_register == 0 {
            return Err(Error::invalid("n_register", "must be positive"));
        }
        if n_register > 24 {
            return Err(Error::invalid(
                "n_register",
                "dense simulation limited to 24 qubits",
            ));
        }
        if auxiliary_state > 1 {
            return Err(Error::invalid("auxiliary_state", "must be 0 or 1"));
        }
        Ok(StarArchitecture {
            n_register,
            auxiliary_state,
        })
    }

    pub fn n_register(&self) -> usize {
        self.n_register
    }

    pub fn auxiliary_state(&self) -> u8 {
        self.auxiliary_state
    }

    /// Register qubits plus the auxiliary.
    pub fn total_qubits(&self) -> usize {
        self.n_register + 1
    }

    pub fn auxiliary_index(&self) -> usize {
        self.n_register
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rot {
        qubit: usize,
        target: RotationTarget,
    },
    Ent {
        k: usize,
        l: usize,
        mix_theta: f64,
    },
}

impl Gate {
    pub fn rot(qubit: usize, theta: f64, phi: f64, dphi: f64) -> Result<Self> {
        Ok(Gate::Rot {
            qubit,
            target: RotationTarget::new(theta, phi, dphi)?,
        })
    }

    pub fn ent(k: usize, l: usize, mix_theta: f64) -> Result<Self> {
        // validates range and k != l
        CouplingGateSpec::new(mix_theta, k, l)?;
        Ok(Gate::Ent { k, l, mix_theta })
    }

    fn check(&self, n_register: usize) -> Result<()> {
        let idx = match *self {
            Gate::Rot { qubit, .. } => qubit,
            Gate::Ent { k, l, .. } => k.max(l),
        };
        if idx >= n_register {
            return Err(Error::QubitOutOfRange {
                index: idx,
                n_qubits: n_register,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Circuit {
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new() -> Self {
        Circuit::default()
    }

    pub fn from_gates(gates: Vec<Gate>) -> Self {
        Circuit { gates }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self, arch: &StarArchitecture) -> Result<()> {
        self.gates.iter().try_for_each(|g| g.check(arch.n_register))
    }
}

/// Lower a circuit to pulses: three field legs per `Rot`, one coupling pulse
/// per `Ent`, in circuit order.
pub fn compile(circuit: &Circuit, arch: &StarArchitecture) -> Result<PulseSchedule> {
    compile_with(circuit, arch, Shape::Constant)
}

pub fn compile_with(
    circuit: &Circuit,
    arch: &StarArchitecture,
    shape: Shape,
) -> Result<PulseSchedule> {
    circuit.validate(arch)?;
    let mut schedule = PulseSchedule::new(arch.n_register)?;
    for gate in &circuit.gates {
        match *gate {
            Gate::Rot { qubit, target } => {
                for seg in synthesis_segments(&target, qubit, shape) {
                    schedule.push(seg)?;
                }
            }
            Gate::Ent { k, l, mix_theta } => {
                schedule.push(CouplingGateSpec::with_shape(mix_theta, k, l, shape)?.segment())?;
            }
        }
    }
    Ok(schedule)
}

/// Apply the ideal gate matrices to a register state, without pulses or
/// auxiliary.
pub fn ideal_state(
    circuit: &Circuit,
    arch: &StarArchitecture,
    input: &StateVector,
) -> Result<StateVector> {
    circuit.validate(arch)?;
    if input.n_qubits() != arch.n_register {
        return Err(Error::DimensionMismatch {
            expected: 1 << arch.n_register,
            found: input.dim(),
        });
    }
    let mut state = input.clone();
    for gate in &circuit.gates {
        match *gate {
            Gate::Rot { qubit, target } => state.apply_local(&target_unitary(&target), &[qubit])?,
            Gate::Ent { k, l, mix_theta } => {
                state.apply_local(&reference_block(arch.auxiliary_state, mix_theta), &[k, l])?
            }
        }
    }
    Ok(state)
}

/// Product of the ideal gate matrices on the register (`2^n × 2^n`).
pub fn ideal_unitary(circuit: &Circuit, arch: &StarArchitecture) -> Result<Operator> {
    let dim = 1usize << arch.n_register;
    let mut columns = Vec::with_capacity(dim * dim);
    for j in 0..dim {
        let col = ideal_state(circuit, arch, &StateVector::basis(arch.n_register, j)?)?;
        columns.extend_from_slice(col.amplitudes());
    }
    let m = crate::qcore::CMatrix::from_column_slice(dim, dim, &columns);
    Operator::unitary(m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    /// Register plus auxiliary after the last pulse.
    pub final_state: StateVector,
    /// Probability of finding the auxiliary in its prepared state.
    pub aux_match_probability: f64,
    /// Register state post-selected on the auxiliary outcome, renormalized.
    pub register_state: StateVector,
    /// `|⟨register_state| U_ideal |input⟩|²`.
    pub ideal_fidelity: f64,
}

/// Compile, evolve `input ⊗ |q⟩_aux` through the pulses, and post-select the
/// auxiliary on `|q⟩`.
pub fn simulate(
    circuit: &Circuit,
    arch: &StarArchitecture,
    input: &StateVector,
) -> Result<SimulationResult> {
    simulate_with(circuit, arch, input, Shape::Constant)
}

pub fn simulate_with(
    circuit: &Circuit,
    arch: &StarArchitecture,
    input: &StateVector,
    shape: Shape,
) -> Result<SimulationResult> {
    if input.n_qubits() != arch.n_register {
        return Err(Error::DimensionMismatch {
            expected: 1 << arch.n_register,
            found: input.dim(),
        });
    }
    let schedule = compile_with(circuit, arch, shape)?;
    let aux = StateVector::basis(1, arch.auxiliary_state as usize)?;
    let final_state = evolve(&schedule, &input.tensor(&aux))?;

    let q = arch.auxiliary_state as usize;
    let projected: Vec<_> = (0..1usize << arch.n_register)
        .map(|r| final_state.amplitudes()[(r << 1) | q])
        .collect();
    let aux_match_probability: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
    if aux_match_probability < Tolerances::DEFAULT.postselect {
        return Err(Error::PostSelectionFailed(aux_match_probability));
    }
    let register_state = StateVector::normalized(arch.n_register, projected)?;
    let ideal = ideal_state(circuit, arch, input)?;
    let ideal_fidelity = register_state.fidelity(&ideal)?;
    Ok(SimulationResult {
        final_state,
        aux_match_probability,
        register_state,
        ideal_fidelity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShotCounts {
    pub matched: u64,
    pub mismatched: u64,
}

/// Sample `shots` projective measurements of the auxiliary.
pub fn sample_auxiliary<R: Rng + ?Sized>(
    result: &SimulationResult,
    shots: u64,
    rng: &mut R,
) -> ShotCounts {
    let p = result.aux_match_probability.clamp(0.0, 1.0);
    let matched = (0..shots).filter(|_| rng.gen::<f64>() < p).count() as u64;
    ShotCounts {
        matched,
        mismatched: shots - matched,
    }
}

/// Uniformly random circuit of `len` gates on `n_register` qubits. With one
/// register qubit only rotations are drawn.
pub fn random_circuit<R: Rng + ?Sized>(n_register: usize, len: usize, rng: &mut R) -> Circuit {
    let gates = (0..len)
        .map(|_| {
            if n_register < 2 || rng.gen_bool(0.5) {
                Gate::Rot {
                    qubit: rng.gen_range(0..n_register),
                    target: RotationTarget::new(
                        rng.gen_range(0.0..=PI),
                        rng.gen_range(0.0..TAU),
                        rng.gen_range(-PI..PI),
                    )
                    .expect("in range"),
                }
            } else {
                let k = rng.gen_range(0..n_register);
                let l = (k + rng.gen_range(1..n_register)) % n_register;
                Gate::Ent {
                    k,
                    l,
                    mix_theta: rng.gen_range(0.0..=PI),
                }
            }
        })
        .collect();
    Circuit { gates }
}
