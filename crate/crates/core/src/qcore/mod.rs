//! Dense complex linear algebra and quantum-state primitives.
//!
//! Qubit ordering is big-endian throughout: in an `n`-qubit register the
//! first-listed qubit is the most significant bit of the basis index.

mod basis;
mod operator;
mod projector;
mod state;

pub use basis::{permute_basis, BLOCK_ORDER};
pub use operator::{
    expm_hermitian, pauli, phase_invariant_distance, spin, Axis, CMatrix, Operator, Propagator,
};
pub use projector::Projector;
pub use state::{partial_trace, StateVector};

use crate::Result;

/// Kronecker product. The left factor occupies the most significant qubits.
///
/// Implemented for [`Operator`] and [`StateVector`]; mixing the two kinds is
/// rejected by the type system.
pub trait Tensor<Rhs = Self> {
    type Output;
    fn tensor(&self, rhs: &Rhs) -> Self::Output;
}

/// Free-function form of [`Tensor::tensor`].
pub fn tensor<T: Tensor>(a: &T, b: &T) -> T::Output {
    a.tensor(b)
}

/// Kronecker product of a list of operators, left to right.
pub fn tensor_all(ops: &[&Operator]) -> Result<Operator> {
    let (first, rest) = ops
        .split_first()
        .ok_or_else(|| crate::Error::invalid("ops", "empty tensor product"))?;
    Ok(rest
        .iter()
        .fold((*first).clone(), |acc, op| acc.tensor(*op)))
}
