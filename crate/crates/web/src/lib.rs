//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string; the page parses it and draws on a
//! canvas. The `*_json` functions hold the logic so they can be tested
//! natively.

use std::f64::consts::PI;

use holostar::document::to_json;
use holostar::pulse::{expectation_trace, DEFAULT_SAMPLES};
use holostar::qcore::{Propagator, StateVector};
use holostar::single_qubit::{
    geometric_phase, synthesize, verify_synthesis, RotationTarget, Transported,
};
use holostar::two_qubit::{
    entangling_power, entangling_power_formula, two_qubit_gate, CouplingGateSpec,
};
use holostar::Result;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct OrangeSlice {
    /// Bloch vectors of the transported state, `samples` per leg.
    path: Vec<[f64; 3]>,
    /// `(t, ⟨ψ|H|ψ⟩)` along the loop.
    integrand: Vec<(f64, f64)>,
    axis: [f64; 3],
    geometric_phase: f64,
    dynamical_phase: f64,
    synthesis_distance: f64,
}

pub fn orange_slice_json(theta: f64, phi: f64, dphi: f64, samples: usize) -> Result<String> {
    let target = RotationTarget::new(theta, phi, dphi)?;
    let samples = samples.max(2);
    let schedule = synthesize(&target, 0);
    let mut psi = target.state();
    let mut path = vec![psi.bloch_vector()?];
    for seg in schedule.segments() {
        let prop = Propagator::new(&seg.unit_hamiltonian())?;
        let env = seg.envelope();
        for j in 1..samples {
            let t = env.duration() * j as f64 / (samples - 1) as f64;
            path.push(
                prop.at(env.cumulative_area(t))
                    .apply(&psi)?
                    .bloch_vector()?,
            );
        }
        psi = prop.at(env.area()).apply(&psi)?;
    }
    let report = geometric_phase(&target, Transported::Psi)?;
    to_json(&OrangeSlice {
        path,
        integrand: expectation_trace(&schedule, &target.state(), samples)?,
        axis: target.axis(),
        geometric_phase: report.geometric_phase,
        dynamical_phase: report.dynamical_phase,
        synthesis_distance: verify_synthesis(&target),
    })
}

#[derive(Serialize)]
struct EpPoint {
    theta: f64,
    computed: f64,
    formula: f64,
}

pub fn entangling_power_json(grid: usize) -> Result<String> {
    let grid = grid.max(2);
    let points = (0..grid)
        .map(|j| {
            let theta = PI * j as f64 / (grid - 1) as f64;
            let dec = two_qubit_gate(&CouplingGateSpec::new(theta, 0, 1)?);
            Ok(EpPoint {
                theta,
                computed: entangling_power(&dec.u0)?,
                formula: entangling_power_formula(theta),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    to_json(&points)
}

#[derive(Serialize)]
struct Populations {
    labels: Vec<String>,
    times: Vec<f64>,
    /// `populations[i][b]`: weight of basis state `b` (order `k, aux, l`) at `times[i]`.
    populations: Vec<Vec<f64>>,
}

/// Populations of the eight `|k a l⟩` states while the coupling pulse runs,
/// starting from basis state `input`.
pub fn double_lambda_json(mix_theta: f64, input: usize, samples: usize) -> Result<String> {
    let spec = CouplingGateSpec::new(mix_theta, 0, 1)?;
    let seg = spec.segment();
    let prop = Propagator::new(&seg.unit_hamiltonian())?;
    let env = seg.envelope();
    let psi = StateVector::basis(3, input)?;
    let samples = samples.max(2);
    let mut times = Vec::with_capacity(samples);
    let mut populations = Vec::with_capacity(samples);
    for j in 0..samples {
        let t = env.duration() * j as f64 / (samples - 1) as f64;
        times.push(t);
        populations.push(prop.at(env.cumulative_area(t)).apply(&psi)?.probabilities());
    }
    to_json(&Populations {
        labels: (0..8).map(|b| format!("|{b:03b}⟩")).collect(),
        times,
        populations,
    })
}

fn js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn orange_slice(theta: f64, phi: f64, dphi: f64) -> std::result::Result<String, JsError> {
    js(orange_slice_json(theta, phi, dphi, DEFAULT_SAMPLES))
}

#[wasm_bindgen]
pub fn entangling_power_curve(grid: usize) -> std::result::Result<String, JsError> {
    js(entangling_power_json(grid))
}

#[wasm_bindgen]
pub fn double_lambda(
    mix_theta: f64,
    input: usize,
    samples: usize,
) -> std::result::Result<String, JsError> {
    js(double_lambda_json(mix_theta, input, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    fn f(v: &Value) -> f64 {
        v.as_f64().unwrap()
    }

    #[test]
    fn orange_slice_path_closes() {
        let v = parse(&orange_slice_json(1.1, 0.4, 0.9, 16).unwrap());
        let path = v["path"].as_array().unwrap();
        assert_eq!(path.len(), 1 + 3 * 15);
        let start = RotationTarget::new(1.1, 0.4, 0.9)
            .unwrap()
            .state()
            .bloch_vector()
            .unwrap();
        let last = path.last().unwrap();
        for i in 0..3 {
            assert!((f(&last[i]) - start[i]).abs() < 1e-12);
        }
        assert!((f(&v["geometric_phase"]) - 0.9).abs() < 1e-9);
        assert!(v["integrand"]
            .as_array()
            .unwrap()
            .iter()
            .all(|p| f(&p[1]).abs() < 1e-9));
    }

    #[test]
    fn entangling_curve_matches_formula() {
        let v = parse(&entangling_power_json(7).unwrap());
        let pts = v.as_array().unwrap();
        assert_eq!(pts.len(), 7);
        for p in pts {
            assert!((f(&p["computed"]) - f(&p["formula"])).abs() < 1e-10);
        }
    }

    #[test]
    fn double_lambda_conserves_probability() {
        let v = parse(&double_lambda_json(0.9, 0b010, 9).unwrap());
        assert_eq!(v["labels"].as_array().unwrap().len(), 8);
        let rows = v["populations"].as_array().unwrap();
        assert_eq!(rows.len(), 9);
        for row in rows {
            let total: f64 = row.as_array().unwrap().iter().map(f).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        // after the full pulse |010⟩ is populated again
        assert!((f(&rows[8][2]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_input_is_an_error() {
        assert!(orange_slice_json(4.0, 0.0, 0.0, 8).is_err());
        assert!(double_lambda_json(0.5, 8, 8).is_err());
    }
}
