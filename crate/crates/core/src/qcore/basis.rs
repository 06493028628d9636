use super::operator::check_permutation;
use super::Operator;
use crate::Result;

/// Lexicographic `(k, a, l)` indices listed in the block ordering
/// `|000⟩, |001⟩, |100⟩, |101⟩, |010⟩, |011⟩, |110⟩, |111⟩`.
///
/// In this ordering the first four states have the auxiliary (middle) qubit
/// in `|0⟩` and the last four in `|1⟩`, so a coupling unitary that preserves
/// the auxiliary value is block diagonal.
pub const BLOCK_ORDER: [usize; 8] = [0b000, 0b001, 0b100, 0b101, 0b010, 0b011, 0b110, 0b111];

/// Re-express `op` in the basis `order` (see [`Operator::permuted`]).
pub fn permute_basis(op: &Operator, order: &[usize]) -> Result<Operator> {
    check_permutation(order, op.dim())?;
    op.permuted(order)
}
