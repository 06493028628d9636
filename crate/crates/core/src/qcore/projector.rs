use super::{CMatrix, Operator, StateVector};
use crate::{Error, Result, Tolerances};

/// Orthogonal projector: Hermitian and idempotent.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    op: Operator,
}

impl Projector {
    pub fn new(op: Operator) -> Result<Self> {
        let op = op.into_hermitian()?;
        let residual = op.max_abs_diff(&(&op * &op));
        if residual > Tolerances::DEFAULT.projector {
            return Err(Error::NotProjector(residual));
        }
        Ok(Projector { op })
    }

    /// Projector onto the span of computational basis states.
    pub fn onto_basis(dim: usize, indices: &[usize]) -> Result<Self> {
        let mut m = CMatrix::zeros(dim, dim);
        for &i in indices {
            if i >= dim {
                return Err(Error::invalid("indices", format!("{i} >= {dim}")));
            }
            m[(i, i)] = 1.0.into();
        }
        Projector::new(Operator::new(m)?)
    }

    /// Projector onto the span of orthonormal `states`.
    pub fn onto_states(states: &[StateVector]) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::invalid("states", "empty"))?;
        let mut acc = Operator::zeros(first.dim());
        for s in states {
            acc = acc.add(&Operator::outer(s, s)?)?;
        }
        Projector::new(acc)
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn rank(&self) -> usize {
        self.op.trace().re.round() as usize
    }

    /// `P A P`.
    pub fn sandwich(&self, a: &Operator) -> Result<Operator> {
        self.op.compose(a)?.compose(&self.op)
    }
}
