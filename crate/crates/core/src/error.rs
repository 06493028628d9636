use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operator is not Hermitian (max |A - A†| = {0:e})")]
    NotHermitian(f64),
    #[error("operator is not unitary (max |A†A - I| = {0:e})")]
    NotUnitary(f64),
    #[error("operator is not a projector (max |P² - P| = {0:e})")]
    NotProjector(f64),
    #[error("state is not normalized (| |ψ| - 1 | = {0:e})")]
    NotNormalized(f64),
    #[error("operator is not a density matrix: {0}")]
    NotDensity(String),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("qubit index {0} listed twice")]
    DuplicateQubit(usize),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("negative pulse amplitude {0}")]
    NegativeAmplitude(f64),
    #[error("unitary is not block diagonal (off-block residual {0:e})")]
    BlockResidual(f64),
    #[error("auxiliary post-selection failed (match probability {0:e})")]
    PostSelectionFailed(f64),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
