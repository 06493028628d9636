//! Numerical tolerances used by constructors and certificates.

use serde::{Deserialize, Serialize};

/// Every tolerance the crate checks against, in one place.
///
/// Constructors (`Operator::hermitian`, `StateVector::new`, ...) use
/// [`Tolerances::DEFAULT`]. Verification routines return raw residuals and
/// leave the pass/fail decision to the caller, who may pass a relaxed record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// max |A - A†| for Hermitian operators.
    pub hermitian: f64,
    /// max |A†A - I| for unitary operators.
    pub unitary: f64,
    /// | ‖ψ‖ - 1 | for state vectors.
    pub norm: f64,
    /// max |P² - P| for projectors; also the unit-trace check on densities.
    pub projector: f64,
    /// Phase-invariant distance between a synthesized and a target gate.
    pub synthesis: f64,
    /// Geometric and dynamical phase agreement (radians).
    pub phase: f64,
    /// Largest allowed dynamical-phase integrand |⟨ψ|H|ψ⟩|.
    pub integrand: f64,
    /// Entries outside the auxiliary-fixed blocks of a coupling unitary.
    pub block: f64,
    /// Sampled parallel-transport residual ‖U P U† H U P U†‖.
    pub transport: f64,
    /// Entangling power against the closed form.
    pub entangling_power: f64,
    /// 1 - auxiliary match probability.
    pub ancilla: f64,
    /// 1 - fidelity against the gate-matrix reference.
    pub fidelity: f64,
    /// Smallest auxiliary match probability that still allows post-selection.
    pub postselect: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-12,
        unitary: 1e-10,
        norm: 1e-12,
        projector: 1e-12,
        synthesis: 1e-9,
        phase: 1e-6,
        integrand: 1e-9,
        block: 1e-10,
        transport: 1e-9,
        entangling_power: 1e-10,
        ancilla: 1e-10,
        fidelity: 1e-9,
        postselect: 1e-12,
    };

    pub const KEYS: [&'static str; 13] = [
        "hermitian",
        "unitary",
        "norm",
        "projector",
        "synthesis",
        "phase",
        "integrand",
        "block",
        "transport",
        "entangling_power",
        "ancilla",
        "fidelity",
        "postselect",
    ];

    /// Multiply every tolerance by `factor`, except `postselect`, which is a
    /// lower bound and is divided instead.
    pub fn scaled(&self, factor: f64) -> Tolerances {
        Tolerances {
            hermitian: self.hermitian * factor,
            unitary: self.unitary * factor,
            norm: self.norm * factor,
            projector: self.projector * factor,
            synthesis: self.synthesis * factor,
            phase: self.phase * factor,
            integrand: self.integrand * factor,
            block: self.block * factor,
            transport: self.transport * factor,
            entangling_power: self.entangling_power * factor,
            ancilla: self.ancilla * factor,
            fidelity: self.fidelity * factor,
            postselect: self.postselect / factor,
        }
    }

    /// Override one tolerance by name. Returns `false` for an unknown key.
    pub fn set(&mut self, key: &str, value: f64) -> bool {
        let slot = match key {
            "hermitian" => &mut self.hermitian,
            "unitary" => &mut self.unitary,
            "norm" => &mut self.norm,
            "projector" => &mut self.projector,
            "synthesis" => &mut self.synthesis,
            "phase" => &mut self.phase,
            "integrand" => &mut self.integrand,
            "block" => &mut self.block,
            "transport" => &mut self.transport,
            "entangling_power" => &mut self.entangling_power,
            "ancilla" => &mut self.ancilla,
            "fidelity" => &mut self.fidelity,
            "postselect" => &mut self.postselect,
            _ => return false,
        };
        *slot = value;
        true
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::DEFAULT
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_key_is_settable() {
        let mut t = Tolerances::default();
        for key in Tolerances::KEYS {
            assert!(t.set(key, 0.5), "{key}");
        }
        assert!(!t.set("bogus", 1.0));
    }

    #[test]
    fn scaling_relaxes_everything() {
        let t = Tolerances::DEFAULT.scaled(10.0);
        assert_eq!(t.synthesis, 1e-8);
        assert_eq!(t.postselect, 1e-13);
    }
}
