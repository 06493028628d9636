use std::ops::Mul;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{StateVector, Tensor};
use crate::{Error, Result, Tolerances};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Dense square complex matrix with Hermitian / unitary role flags.
///
/// Flags are only set after the corresponding check passed (or when the
/// construction guarantees the property), so a flagged operator can be trusted
/// by downstream code without re-checking.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: CMatrix,
    hermitian: bool,
    unitary: bool,
}

impl Operator {
    /// Unflagged operator. Fails if `matrix` is not square.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        Ok(Operator {
            matrix,
            hermitian: false,
            unitary: false,
        })
    }

    /// Row-major constructor.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Operator::new(CMatrix::from_row_slice(dim, dim, entries))
    }

    /// Row-major constructor from real entries.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        let entries: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Operator::from_rows(dim, &entries)
    }

    /// Checks max |A - A†| and sets the Hermitian flag.
    pub fn hermitian(matrix: CMatrix) -> Result<Self> {
        let mut op = Operator::new(matrix)?;
        let residual = op.hermitian_residual();
        if residual > Tolerances::DEFAULT.hermitian {
            return Err(Error::NotHermitian(residual));
        }
        op.hermitian = true;
        Ok(op)
    }

    /// Checks max |A†A - I| and sets the unitary flag.
    pub fn unitary(matrix: CMatrix) -> Result<Self> {
        let mut op = Operator::new(matrix)?;
        let residual = op.unitary_residual();
        if residual > Tolerances::DEFAULT.unitary {
            return Err(Error::NotUnitary(residual));
        }
        op.unitary = true;
        Ok(op)
    }

    pub(crate) fn flagged(matrix: CMatrix, hermitian: bool, unitary: bool) -> Self {
        debug_assert_eq!(matrix.nrows(), matrix.ncols());
        Operator {
            matrix,
            hermitian,
            unitary,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Operator::flagged(CMatrix::identity(dim, dim), true, true)
    }

    pub fn zeros(dim: usize) -> Self {
        Operator::flagged(CMatrix::zeros(dim, dim), true, false)
    }

    /// Diagonal unitary `diag(e^{i a_0}, e^{i a_1}, ...)`.
    pub fn phases(angles: &[f64]) -> Self {
        let diag = DVector::from_iterator(
            angles.len(),
            angles.iter().map(|&a| Complex64::from_polar(1.0, a)),
        );
        Operator::flagged(CMatrix::from_diagonal(&diag), false, true)
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &StateVector, b: &StateVector) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        let ca = DVector::from_column_slice(a.amplitudes());
        let cb = DVector::from_column_slice(b.amplitudes());
        let same = a == b;
        Ok(Operator::flagged(&ca * cb.adjoint(), same, false))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn hermitian_residual(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    pub fn unitary_residual(&self) -> f64 {
        let n = self.dim();
        max_abs(&(self.matrix.adjoint() * &self.matrix - CMatrix::identity(n, n)))
    }

    /// Re-run the Hermitian check on an existing operator.
    pub fn into_hermitian(self) -> Result<Self> {
        let unitary = self.unitary;
        let mut op = Operator::hermitian(self.matrix)?;
        op.unitary = unitary;
        Ok(op)
    }

    /// Re-run the unitary check on an existing operator.
    pub fn into_unitary(self) -> Result<Self> {
        let hermitian = self.hermitian;
        let mut op = Operator::unitary(self.matrix)?;
        op.hermitian = hermitian;
        Ok(op)
    }

    pub fn dagger(&self) -> Operator {
        Operator::flagged(self.matrix.adjoint(), self.hermitian, self.unitary)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        let hermitian = self.hermitian && factor.im == 0.0;
        let unitary = self.unitary && (factor.norm() - 1.0).abs() < 1e-15;
        Operator::flagged(&self.matrix * factor, hermitian, unitary)
    }

    pub fn scale_real(&self, factor: f64) -> Operator {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Sum of two operators; Hermitian if both are.
    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.check_dim(other)?;
        Ok(Operator::flagged(
            &self.matrix + &other.matrix,
            self.hermitian && other.hermitian,
            false,
        ))
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.check_dim(other)?;
        Ok(Operator::flagged(
            &self.matrix - &other.matrix,
            self.hermitian && other.hermitian,
            false,
        ))
    }

    /// Matrix product `self · other`; unitary if both are.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.check_dim(other)?;
        Ok(self * other)
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        self.check_dim(other)?;
        Ok(Operator::flagged(
            &self.matrix * &other.matrix - &other.matrix * &self.matrix,
            false,
            false,
        ))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs(&(&self.matrix - &other.matrix))
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        self.matrix
            .clone()
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    /// Reorder the basis: entry `(i, j)` of the result is entry
    /// `(order[i], order[j])` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Operator> {
        check_permutation(order, self.dim())?;
        let n = self.dim();
        let matrix = CMatrix::from_fn(n, n, |i, j| self.matrix[(order[i], order[j])]);
        Ok(Operator::flagged(matrix, self.hermitian, self.unitary))
    }

    /// Principal submatrix on the given basis indices (no flags).
    pub fn submatrix(&self, indices: &[usize]) -> Result<Operator> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.dim()) {
            return Err(Error::invalid(
                "indices",
                format!("{bad} out of range for dimension {}", self.dim()),
            ));
        }
        let m = indices.len();
        Operator::new(CMatrix::from_fn(m, m, |i, j| {
            self.matrix[(indices[i], indices[j])]
        }))
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Operator) -> Operator {
        let (a, b) = (self.dim(), other.dim());
        let mut m = CMatrix::zeros(a + b, a + b);
        m.view_mut((0, 0), (a, a)).copy_from(&self.matrix);
        m.view_mut((a, a), (b, b)).copy_from(&other.matrix);
        Operator::flagged(
            m,
            self.hermitian && other.hermitian,
            self.unitary && other.unitary,
        )
    }

    /// `self |ψ⟩` for a full-dimension state. The result is renormalization-free;
    /// non-unitary operators yield an error if the image is not normalized.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.dim(),
            });
        }
        let v = &self.matrix * DVector::from_column_slice(state.amplitudes());
        StateVector::new(state.n_qubits(), v.as_slice().to_vec())
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<Complex64> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.dim(),
            });
        }
        let v = DVector::from_column_slice(state.amplitudes());
        Ok(v.dotc(&(&self.matrix * &v)))
    }

    fn check_dim(&self, other: &Operator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl Mul for &Operator {
    type Output = Operator;

    /// Panics on dimension mismatch, like the underlying matrix product.
    fn mul(self, rhs: &Operator) -> Operator {
        Operator::flagged(
            &self.matrix * &rhs.matrix,
            false,
            self.unitary && rhs.unitary,
        )
    }
}

impl Tensor for Operator {
    type Output = Operator;

    fn tensor(&self, rhs: &Operator) -> Operator {
        Operator::flagged(
            self.matrix.kronecker(&rhs.matrix),
            self.hermitian && rhs.hermitian,
            self.unitary && rhs.unitary,
        )
    }
}

impl serde::Serialize for Operator {
    /// Row-major list of rows, each entry `[re, im]`.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let n = self.dim();
        let mut rows = serializer.serialize_seq(Some(n))?;
        for i in 0..n {
            let row: Vec<[f64; 2]> = (0..n)
                .map(|j| {
                    let z = self.matrix[(i, j)];
                    [z.re, z.im]
                })
                .collect();
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn check_permutation(order: &[usize], dim: usize) -> Result<()> {
    if order.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: order.len(),
        });
    }
    let mut seen = vec![false; dim];
    for &i in order {
        if i >= dim || seen[i] {
            return Err(Error::invalid("order", "not a permutation"));
        }
        seen[i] = true;
    }
    Ok(())
}

/// The 2×2 Pauli matrix for `axis`.
pub fn pauli(axis: Axis) -> Operator {
    let m = match axis {
        Axis::X => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        Axis::Y => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        Axis::Z => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    };
    Operator::flagged(m, true, true)
}

/// Spin-1/2 operator `S = σ/2`.
pub fn spin(axis: Axis) -> Operator {
    let s = pauli(axis);
    Operator::flagged(s.matrix * Complex64::new(0.5, 0.0), true, false)
}

/// Cached eigendecomposition `H = V diag(λ) V†` of a Hermitian operator,
/// giving `exp(-i t H)` for any `t` without re-diagonalizing.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl Propagator {
    pub fn new(hamiltonian: &Operator) -> Result<Self> {
        if !hamiltonian.is_hermitian() {
            return Err(Error::NotHermitian(hamiltonian.hermitian_residual()));
        }
        // symmetrize so rounding noise in the lower triangle cannot leak in
        let m = hamiltonian.matrix();
        let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(sym);
        Ok(Propagator {
            eigenvalues: eig.eigenvalues.iter().cloned().collect(),
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `exp(-i t H)`.
    pub fn at(&self, t: f64) -> Operator {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -lambda * t);
            for i in 0..n {
                scaled[(i, j)] *= phase;
            }
        }
        Operator::flagged(scaled * self.eigenvectors.adjoint(), false, true)
    }
}

/// `exp(-i t H)` for a Hermitian-flagged `H`, via eigendecomposition.
pub fn expm_hermitian(hamiltonian: &Operator, t: f64) -> Result<Operator> {
    Ok(Propagator::new(hamiltonian)?.at(t))
}

/// `sqrt(1 - |tr(U†V)| / d)`: zero iff `U = e^{iα} V`.
///
/// Evaluated as `‖U - e^{iα}V‖_F / sqrt(2d)` with `α = -arg tr(U†V)`, which is
/// the same quantity for unitary inputs but does not lose the small
/// differences to cancellation against 1.
pub fn phase_invariant_distance(u: &Operator, v: &Operator) -> Result<f64> {
    u.check_dim(v)?;
    let d = u.dim();
    if d == 0 {
        return Ok(0.0);
    }
    let overlap = (u.matrix.adjoint() * &v.matrix).trace();
    let align = if overlap.norm() > 0.0 {
        overlap.conj() / overlap.norm()
    } else {
        ONE
    };
    let diff = &u.matrix - &v.matrix * align;
    let dist = (diff.norm_squared() / (2.0 * d as f64)).sqrt();
    Ok(dist.min(1.0))
}
