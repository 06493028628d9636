//! Double-Λ coupling through the auxiliary spin and the holonomic two-qubit
//! gates it produces.
//!
//! Local three-qubit basis indices are lexicographic in `(k, a, l)`: register
//! qubit `k` is the most significant bit, the auxiliary `a` the middle bit and
//! register qubit `l` the least significant bit.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::pulse::{segment_unitary, Envelope, PulseSegment, Shape};
use crate::qcore::{
    permute_basis, spin, tensor_all, Axis, CMatrix, Operator, Projector, Propagator, StateVector,
    Tensor, BLOCK_ORDER,
};
use crate::{Error, Result, Tolerances};

/// Ω-area of a coupling pulse: `½∫Ω dt = π`.
pub const COUPLING_AREA: f64 = TAU;

/// `J_k (S_x^k S_x^a + S_y^k S_y^a) + J_l (S_x^l S_x^a + S_y^l S_y^a)` on
/// `(k, a, l)`, assembled from spin operators.
pub fn build_hkl(j_k: f64, j_l: f64) -> Operator {
    let id = Operator::identity(2);
    let (sx, sy) = (spin(Axis::X), spin(Axis::Y));
    let xy = |a: &Operator, b: &Operator, c: &Operator| {
        tensor_all(&[a, b, c]).expect("non-empty product")
    };
    let hk = xy(&sx, &sx, &id).add(&xy(&sy, &sy, &id)).expect("8x8");
    let hl = xy(&id, &sx, &sx).add(&xy(&id, &sy, &sy)).expect("8x8");
    hk.scale_real(j_k).add(&hl.scale_real(j_l)).expect("8x8")
}

/// The same Hamiltonian written out entry by entry as a double-Λ system:
/// apex `|010⟩` couples to `|100⟩` (J_k/2) and `|001⟩` (J_l/2); apex `|101⟩`
/// couples to `|011⟩` (J_k/2) and `|110⟩` (J_l/2).
pub fn double_lambda_matrix(j_k: f64, j_l: f64) -> Operator {
    let mut m = CMatrix::zeros(8, 8);
    let mut link = |a: usize, b: usize, v: f64| {
        m[(a, b)] = Complex64::new(v, 0.0);
        m[(b, a)] = Complex64::new(v, 0.0);
    };
    link(0b010, 0b001, j_l / 2.0);
    link(0b010, 0b100, j_k / 2.0);
    link(0b101, 0b011, j_k / 2.0);
    link(0b101, 0b110, j_l / 2.0);
    Operator::hermitian(m).expect("symmetric by construction")
}

/// A holonomic two-qubit gate on register pair `(k, l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingGateSpec {
    mix_theta: f64,
    k: usize,
    l: usize,
    shape: Shape,
}

impl CouplingGateSpec {
    pub fn new(mix_theta: f64, k: usize, l: usize) -> Result<Self> {
        CouplingGateSpec::with_shape(mix_theta, k, l, Shape::Constant)
    }

    pub fn with_shape(mix_theta: f64, k: usize, l: usize, shape: Shape) -> Result<Self> {
        if !(0.0..=PI).contains(&mix_theta) {
            return Err(Error::invalid(
                "mix_theta",
                format!("{mix_theta} outside [0, π]"),
            ));
        }
        if k == l {
            return Err(Error::invalid("pair", format!("k == l == {k}")));
        }
        Ok(CouplingGateSpec {
            mix_theta,
            k,
            l,
            shape,
        })
    }

    pub fn mix_theta(&self) -> f64 {
        self.mix_theta
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.k, self.l)
    }

    /// `(J_k, J_l) / Ω = (cos θ/2, sin θ/2)`.
    pub fn coupling_ratios(&self) -> (f64, f64) {
        ((self.mix_theta / 2.0).cos(), (self.mix_theta / 2.0).sin())
    }

    /// The coupling pulse, with area fixed by `½∫Ω dt = π`.
    pub fn segment(&self) -> PulseSegment {
        let env = Envelope::unit(self.shape, COUPLING_AREA).expect("valid envelope");
        PulseSegment::coupling(self.k, self.l, self.mix_theta, env)
            .expect("parameters validated in new")
    }
}

/// An 8×8 coupling unitary split into its auxiliary-fixed 4×4 blocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockDecomposition {
    pub mix_theta: f64,
    /// Block on `|0 q_a 0⟩…` with the auxiliary in `|0⟩`, basis `|000⟩, |001⟩, |100⟩, |101⟩`.
    pub u0: Operator,
    /// Block with the auxiliary in `|1⟩`, basis `|010⟩, |011⟩, |110⟩, |111⟩`.
    pub u1: Operator,
    /// Largest entry outside the two blocks.
    pub off_block_residual: f64,
}

/// Split an 8×8 `(k, a, l)` operator into auxiliary blocks.
pub fn block_decompose(u: &Operator, mix_theta: f64) -> Result<BlockDecomposition> {
    if u.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: u.dim(),
        });
    }
    let p = permute_basis(u, &BLOCK_ORDER)?;
    let off_block_residual = (0..8)
        .flat_map(|i| (0..8).map(move |j| (i, j)))
        .filter(|(i, j)| (i / 4) != (j / 4))
        .map(|(i, j)| p.get(i, j).norm())
        .fold(0.0, f64::max);
    let flag = |op: Operator| op.clone().into_unitary().unwrap_or(op);
    Ok(BlockDecomposition {
        mix_theta,
        u0: flag(p.submatrix(&[0, 1, 2, 3])?),
        u1: flag(p.submatrix(&[4, 5, 6, 7])?),
        off_block_residual,
    })
}

/// Evolve under the coupling pulse of `spec` and split the result into
/// auxiliary blocks.
pub fn two_qubit_gate(spec: &CouplingGateSpec) -> BlockDecomposition {
    let u = segment_unitary(&spec.segment());
    block_decompose(&u, spec.mix_theta).expect("8x8 coupling unitary")
}

/// Closed-form auxiliary block `U_q` of the coupling gate.
pub fn reference_block(aux: u8, mix_theta: f64) -> Operator {
    let (c, s) = (mix_theta.cos(), mix_theta.sin());
    let rows = if aux == 0 {
        [
            1.0, 0.0, 0.0, 0.0, 0.0, c, -s, 0.0, 0.0, -s, -c, 0.0, 0.0, 0.0, 0.0, -1.0,
        ]
    } else {
        [
            -1.0, 0.0, 0.0, 0.0, 0.0, -c, -s, 0.0, 0.0, -s, c, 0.0, 0.0, 0.0, 0.0, 1.0,
        ]
    };
    let op = Operator::from_real_rows(4, &rows).expect("4x4");
    op.into_unitary().expect("real orthogonal reflection")
}

/// `(2/9)(1 - cos⁴θ)`.
pub fn entangling_power_formula(mix_theta: f64) -> f64 {
    2.0 / 9.0 * (1.0 - mix_theta.cos().powi(4))
}

/// The six Pauli eigenstates, a single-qubit state 2-design (in fact a 3-design).
pub fn pauli_eigenstates() -> [StateVector; 6] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let st = |a: Complex64, b: Complex64| StateVector::new(1, vec![a, b]).expect("normalized");
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    [
        st(re(1.0), re(0.0)),
        st(re(0.0), re(1.0)),
        st(re(h), re(h)),
        st(re(h), re(-h)),
        st(re(h), im(h)),
        st(re(h), im(-h)),
    ]
}

/// Linear entropy `1 - tr ρ_A²` of a two-qubit pure state.
pub fn linear_entropy(state: &StateVector) -> Result<f64> {
    if state.n_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: state.dim(),
        });
    }
    Ok(1.0 - state.reduced_purity(&[0])?)
}

/// Mean linear entropy generated by `u` over Haar-random product inputs,
/// evaluated exactly as an average over the 36 products of Pauli eigenstates.
pub fn entangling_power(u: &Operator) -> Result<f64> {
    if u.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: u.dim(),
        });
    }
    let residual = u.unitary_residual();
    if residual > Tolerances::DEFAULT.unitary {
        return Err(Error::NotUnitary(residual));
    }
    let design = pauli_eigenstates();
    let mut total = 0.0;
    for a in &design {
        for b in &design {
            let mut out = a.tensor(b);
            out.apply_local(u, &[0, 1])?;
            total += linear_entropy(&out)?;
        }
    }
    Ok(total / 36.0)
}

/// Subspaces whose parallel transport is certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Subspace {
    /// `H_q`: the auxiliary fixed to `|q⟩` (four-dimensional).
    Auxiliary(u8),
    /// `H_q^d`: the non-stationary `d`-dimensional part of `H_q` (d = 1, 2).
    Refined(u8, u8),
}

impl Subspace {
    pub const ALL: [Subspace; 6] = [
        Subspace::Auxiliary(0),
        Subspace::Auxiliary(1),
        Subspace::Refined(0, 1),
        Subspace::Refined(0, 2),
        Subspace::Refined(1, 1),
        Subspace::Refined(1, 2),
    ];

    /// Lexicographic `(k, a, l)` basis indices spanning the subspace.
    pub fn basis(&self) -> &'static [usize] {
        match self {
            Subspace::Auxiliary(0) => &[0b000, 0b001, 0b100, 0b101],
            Subspace::Auxiliary(_) => &[0b010, 0b011, 0b110, 0b111],
            Subspace::Refined(0, 1) => &[0b101],
            Subspace::Refined(0, _) => &[0b001, 0b100],
            Subspace::Refined(_, 1) => &[0b010],
            Subspace::Refined(_, _) => &[0b011, 0b110],
        }
    }

    pub fn projector(&self) -> Projector {
        Projector::onto_basis(8, self.basis()).expect("valid basis indices")
    }

    pub fn label(&self) -> String {
        match self {
            Subspace::Auxiliary(q) => format!("P_{q}"),
            Subspace::Refined(q, d) => format!("P_{q}^{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportReport {
    /// Largest entry of `P H P` per subspace (unit-amplitude Hamiltonian).
    pub static_residuals: Vec<(String, f64)>,
    /// Sample times across the pulse.
    pub times: Vec<f64>,
    /// At each time: max over subspaces of `‖U P U† H U P U†‖`.
    pub projector_residuals: Vec<f64>,
    /// Max over times of `‖[H, U(0, t)]‖`.
    pub commutator_residual: f64,
}

impl TransportReport {
    pub fn max_static(&self) -> f64 {
        self.static_residuals
            .iter()
            .map(|r| r.1)
            .fold(0.0, f64::max)
    }

    pub fn max_transport(&self) -> f64 {
        self.projector_residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// Sample the parallel-transport condition for every [`Subspace`] along
/// the coupling pulse of `spec`.
pub fn verify_parallel_transport(
    spec: &CouplingGateSpec,
    samples: usize,
) -> Result<TransportReport> {
    transport_along(&spec.segment(), samples)
}

/// Parallel-transport certificate for an arbitrary coupling segment.
pub fn transport_along(seg: &PulseSegment, samples: usize) -> Result<TransportReport> {
    if samples < 2 {
        return Err(Error::invalid("samples", "need at least 2"));
    }
    if seg.is_field() {
        return Err(Error::invalid("segment", "expected a coupling segment"));
    }
    let h = seg.unit_hamiltonian();
    let projectors: Vec<Projector> = Subspace::ALL.iter().map(|s| s.projector()).collect();
    let static_residuals = Subspace::ALL
        .iter()
        .zip(&projectors)
        .map(|(s, p)| Ok((s.label(), p.sandwich(&h)?.max_abs())))
        .collect::<Result<Vec<_>>>()?;

    let prop = Propagator::new(&h)?;
    let env = seg.envelope();
    let mut times = Vec::with_capacity(samples);
    let mut projector_residuals = Vec::with_capacity(samples);
    let mut commutator_residual: f64 = 0.0;
    for j in 0..samples {
        let t = env.duration() * j as f64 / (samples - 1) as f64;
        let u = prop.at(env.cumulative_area(t));
        let ht = h.scale_real(env.amplitude(t));
        let udag = u.dagger();
        let mut worst: f64 = 0.0;
        for p in &projectors {
            let moved = u.compose(p.op())?.compose(&udag)?;
            let r = moved.compose(&ht)?.compose(&moved)?;
            worst = worst.max(r.spectral_norm());
        }
        commutator_residual = commutator_residual.max(ht.commutator(&u)?.spectral_norm());
        times.push(t);
        projector_residuals.push(worst);
    }
    Ok(TransportReport {
        static_residuals,
        times,
        projector_residuals,
        commutator_residual,
    })
}

/// The direct-sum pieces of the two auxiliary blocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubHolonomies {
    /// `U_0` on `|000⟩` (stationary) and `U_1` on `|111⟩` (stationary).
    pub stationary: [Complex64; 2],
    /// `U(C_0^1)`: 1×1 on `|101⟩`.
    pub c0_1: Operator,
    /// `U(C_0^2)`: 2×2 on `|001⟩, |100⟩`.
    pub c0_2: Operator,
    /// `U(C_1^1)`: 1×1 on `|010⟩`.
    pub c1_1: Operator,
    /// `U(C_1^2)`: 2×2 on `|011⟩, |110⟩`.
    pub c1_2: Operator,
    /// Largest entry of either block outside its direct-sum pattern.
    pub reconstruction_residual: f64,
    /// Largest deviation of the pieces from their closed forms.
    pub formula_residual: f64,
}

/// Split `U_0` as `(1) ⊕ U(C_0²) ⊕ U(C_0¹)` and `U_1` as
/// `U(C_1¹) ⊕ U(C_1²) ⊕ (1)`, and compare against the closed forms.
pub fn holonomy_decompose(dec: &BlockDecomposition) -> Result<SubHolonomies> {
    if dec.off_block_residual > 1e-9 {
        return Err(Error::BlockResidual(dec.off_block_residual));
    }
    let (c, s) = (dec.mix_theta.cos(), dec.mix_theta.sin());
    let c0_2 = dec.u0.submatrix(&[1, 2])?;
    let c0_1 = dec.u0.submatrix(&[3])?;
    let c1_1 = dec.u1.submatrix(&[0])?;
    let c1_2 = dec.u1.submatrix(&[1, 2])?;
    let stationary = [dec.u0.get(0, 0), dec.u1.get(3, 3)];

    let rebuilt0 = Operator::new(CMatrix::from_element(1, 1, stationary[0]))?
        .direct_sum(&c0_2)
        .direct_sum(&c0_1);
    let rebuilt1 = c1_1
        .direct_sum(&c1_2)
        .direct_sum(&Operator::new(CMatrix::from_element(1, 1, stationary[1]))?);
    let reconstruction_residual = rebuilt0
        .max_abs_diff(&dec.u0)
        .max(rebuilt1.max_abs_diff(&dec.u1));

    let one = |x: f64| Operator::from_real_rows(1, &[x]).expect("1x1");
    let expected = [
        (&c0_2, Operator::from_real_rows(2, &[c, -s, -s, -c])?),
        (&c0_1, one(-1.0)),
        (&c1_1, one(-1.0)),
        (&c1_2, Operator::from_real_rows(2, &[-c, -s, -s, c])?),
    ];
    let formula_residual = expected
        .iter()
        .map(|(got, want)| got.max_abs_diff(want))
        .chain(
            stationary
                .iter()
                .map(|z| (z - Complex64::new(1.0, 0.0)).norm()),
        )
        .fold(0.0, f64::max);

    Ok(SubHolonomies {
        stationary,
        c0_1,
        c0_2,
        c1_1,
        c1_2,
        reconstruction_residual,
        formula_residual,
    })
}

/// Full certificate for one coupling gate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolonomyReport {
    pub mix_theta: f64,
    pub off_block_residual: f64,
    pub transport: TransportReport,
    pub holonomies: SubHolonomies,
    pub entangling_power: [f64; 2],
    pub entangling_power_formula: f64,
}

pub fn certify(spec: &CouplingGateSpec, samples: usize) -> Result<HolonomyReport> {
    let dec = two_qubit_gate(spec);
    let holonomies = holonomy_decompose(&dec)?;
    Ok(HolonomyReport {
        mix_theta: spec.mix_theta,
        off_block_residual: dec.off_block_residual,
        transport: verify_parallel_transport(spec, samples)?,
        holonomies,
        entangling_power: [entangling_power(&dec.u0)?, entangling_power(&dec.u1)?],
        entangling_power_formula: entangling_power_formula(spec.mix_theta),
    })
}
