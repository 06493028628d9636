use nalgebra::DVector;
use num_complex::Complex64;

use super::{CMatrix, Operator, Tensor};
use crate::{Error, Result, Tolerances};

/// Normalized amplitude vector over `n_qubits` qubits (big-endian ordering).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Checks length `2^n_qubits` and unit norm.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = StateVector::unchecked(n_qubits, amplitudes)?;
        let err = (state.norm() - 1.0).abs();
        if err > Tolerances::DEFAULT.norm {
            return Err(Error::NotNormalized(err));
        }
        Ok(state)
    }

    /// Rescales `amplitudes` to unit norm. Fails on the zero vector.
    pub fn normalized(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut state = StateVector::unchecked(n_qubits, amplitudes)?;
        let norm = state.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(1.0));
        }
        for a in &mut state.amplitudes {
            *a /= norm;
        }
        Ok(state)
    }

    fn unchecked(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize
            .checked_shl(n_qubits as u32)
            .ok_or_else(|| Error::invalid("n_qubits", "register too large"))?;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: amplitudes.len(),
            });
        }
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::invalid(
                "index",
                format!("{index} out of range for {n_qubits} qubits"),
            ));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Basis state from a bit string such as `"0110"` (first char = qubit 0).
    pub fn from_bits(bits: &str) -> Result<Self> {
        let mut index = 0usize;
        for ch in bits.chars() {
            index = match ch {
                '0' => index << 1,
                '1' => (index << 1) | 1,
                _ => {
                    return Err(Error::invalid(
                        "bits",
                        format!("unexpected character {ch:?}"),
                    ))
                }
            };
        }
        StateVector::basis(bits.len(), index)
    }

    /// Bloch-sphere state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        StateVector {
            n_qubits: 1,
            amplitudes: vec![
                Complex64::new((theta / 2.0).cos(), 0.0),
                Complex64::from_polar((theta / 2.0).sin(), phi),
            ],
        }
    }

    /// The orthogonal partner `sin(θ/2)|0⟩ - e^{iφ} cos(θ/2)|1⟩`.
    pub fn bloch_orthogonal(theta: f64, phi: f64) -> Self {
        StateVector {
            n_qubits: 1,
            amplitudes: vec![
                Complex64::new((theta / 2.0).sin(), 0.0),
                -Complex64::from_polar((theta / 2.0).cos(), phi),
            ],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Bloch vector of a single-qubit state.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        if self.n_qubits != 1 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        let (a, b) = (self.amplitudes[0], self.amplitudes[1]);
        let coh = a.conj() * b;
        Ok([2.0 * coh.re, 2.0 * coh.im, a.norm_sqr() - b.norm_sqr()])
    }

    /// Probability of each computational basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Apply a `2^m × 2^m` operator to the qubits listed in `targets`.
    ///
    /// `targets[0]` is the most significant qubit of the local operator. All
    /// other qubits see the identity.
    pub fn apply_local(&mut self, op: &Operator, targets: &[usize]) -> Result<()> {
        let m = targets.len();
        if op.dim() != 1 << m {
            return Err(Error::DimensionMismatch {
                expected: 1 << m,
                found: op.dim(),
            });
        }
        let n = self.n_qubits;
        let mut mask = 0usize;
        let mut shifts = Vec::with_capacity(m);
        for &q in targets {
            if q >= n {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: n,
                });
            }
            let bit = 1usize << (n - 1 - q);
            if mask & bit != 0 {
                return Err(Error::DuplicateQubit(q));
            }
            mask |= bit;
            shifts.push(n - 1 - q);
        }
        let local = 1usize << m;
        // offsets[j]: full-index bits set by local index j
        let offsets: Vec<usize> = (0..local)
            .map(|j| {
                shifts
                    .iter()
                    .enumerate()
                    .filter(|(r, _)| j >> (m - 1 - r) & 1 == 1)
                    .map(|(_, &s)| 1usize << s)
                    .sum()
            })
            .collect();
        let mat = op.matrix();
        let mut gathered = vec![Complex64::new(0.0, 0.0); local];
        for base in 0..self.dim() {
            if base & mask != 0 {
                continue;
            }
            for (g, off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amplitudes[base | off];
            }
            for (row, off) in offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (col, g) in gathered.iter().enumerate() {
                    acc += mat[(row, col)] * g;
                }
                self.amplitudes[base | off] = acc;
            }
        }
        Ok(())
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> Operator {
        let v = DVector::from_column_slice(&self.amplitudes);
        Operator::flagged(&v * v.adjoint(), true, false)
    }

    /// Reduced density operator on `keep`, computed directly from the
    /// amplitudes (no `2^n × 2^n` intermediate).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<Operator> {
        let layout = TraceLayout::new(keep, self.n_qubits)?;
        let k = layout.kept_dim();
        let mut rho = CMatrix::zeros(k, k);
        for e in 0..layout.traced_dim() {
            for a in 0..k {
                let va = self.amplitudes[layout.index(a, e)];
                if va == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for b in 0..k {
                    rho[(a, b)] += va * self.amplitudes[layout.index(b, e)].conj();
                }
            }
        }
        Ok(Operator::flagged(rho, true, false))
    }

    /// Purity `tr ρ²` of the reduced state on `keep`.
    pub fn reduced_purity(&self, keep: &[usize]) -> Result<f64> {
        let rho = self.reduced_density(keep)?;
        Ok((rho.matrix() * rho.matrix()).trace().re)
    }
}

impl serde::Serialize for StateVector {
    /// Amplitudes as `[re, im]` pairs.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.amplitudes.iter().map(|a| [a.re, a.im]))
    }
}

impl Tensor for StateVector {
    type Output = StateVector;

    fn tensor(&self, rhs: &StateVector) -> StateVector {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| rhs.amplitudes.iter().map(move |b| a * b))
            .collect();
        StateVector {
            n_qubits: self.n_qubits + rhs.n_qubits,
            amplitudes,
        }
    }
}

/// Index bookkeeping for tracing out the complement of `keep`.
struct TraceLayout {
    kept_shifts: Vec<usize>,
    traced_shifts: Vec<usize>,
}

impl TraceLayout {
    fn new(keep: &[usize], n_qubits: usize) -> Result<Self> {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateQubit(w[0]));
            }
        }
        if let Some(&q) = sorted.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        let shift = |q: usize| n_qubits - 1 - q;
        let kept_shifts = sorted.iter().map(|&q| shift(q)).collect();
        let traced_shifts = (0..n_qubits)
            .filter(|q| !sorted.contains(q))
            .map(shift)
            .collect();
        Ok(TraceLayout {
            kept_shifts,
            traced_shifts,
        })
    }

    fn kept_dim(&self) -> usize {
        1 << self.kept_shifts.len()
    }

    fn traced_dim(&self) -> usize {
        1 << self.traced_shifts.len()
    }

    fn scatter(local: usize, shifts: &[usize]) -> usize {
        let m = shifts.len();
        shifts
            .iter()
            .enumerate()
            .filter(|(r, _)| local >> (m - 1 - r) & 1 == 1)
            .map(|(_, &s)| 1usize << s)
            .sum()
    }

    fn index(&self, kept: usize, traced: usize) -> usize {
        Self::scatter(kept, &self.kept_shifts) | Self::scatter(traced, &self.traced_shifts)
    }
}

/// Reduced density operator of `rho` on the qubits in `keep` (ascending
/// qubit order in the result).
pub fn partial_trace(rho: &Operator, keep: &[usize], n_qubits: usize) -> Result<Operator> {
    let dim = 1usize << n_qubits;
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: rho.dim(),
        });
    }
    let tol = Tolerances::DEFAULT;
    let herm = rho.hermitian_residual();
    if herm > tol.hermitian {
        return Err(Error::NotDensity(format!("not Hermitian ({herm:e})")));
    }
    let tr = rho.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > tol.projector {
        return Err(Error::NotDensity(format!("trace {tr} != 1")));
    }
    let layout = TraceLayout::new(keep, n_qubits)?;
    let k = layout.kept_dim();
    let m = rho.matrix();
    let mut out = CMatrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            out[(a, b)] = (0..layout.traced_dim())
                .map(|e| m[(layout.index(a, e), layout.index(b, e))])
                .sum();
        }
    }
    Ok(Operator::flagged(out, true, false))
}
