//! Single-page browser demo.
//!
//! The channel family explored here has a computational-basis POVM on a
//! qubit input, ψ⁰ = |0⟩, and ψ¹ at angle θ from it: θ = 0° makes Charlie's
//! channel constant (Bob sees everything), θ = 90° hands Charlie a perfect
//! classical copy. Every exported function returns a JSON string the page
//! renders directly.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use hbc::channel::{basis_povm, HadamardChannelSpec};
use hbc::entropic::{rates, EnsembleEntry, InputEnsemble, Task};
use hbc::linalg::Complex64;
use hbc::region::{
    classical_oracle_frontier, is_classical_embedded, optimize_frontier, OptimizationConfig,
};

fn family_spec(theta_degrees: f64) -> HadamardChannelSpec {
    let theta = theta_degrees.to_radians();
    let psi1 = vec![
        Complex64::new(theta.cos(), 0.0),
        Complex64::new(theta.sin(), 0.0),
    ];
    let psi0 = vec![Complex64::ONE, Complex64::ZERO];
    HadamardChannelSpec::new(basis_povm(2), vec![psi0, psi1]).expect("family spec is well-formed")
}

fn task_of(name: &str) -> Result<Task, JsValue> {
    Task::parse(name).ok_or_else(|| JsValue::from_str(&format!("unknown task {name:?}")))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, JsValue> {
    serde_json::to_string(value).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[derive(Serialize)]
struct ChannelReport {
    theta_degrees: f64,
    overlap: f64,
    d_a: usize,
    d_c: usize,
    n_outcomes: usize,
    completeness_residual: f64,
    isometry_residual: f64,
    degradability_residual: f64,
    classical_embedded: bool,
}

/// Structural summary of the θ-family channel.
#[wasm_bindgen]
pub fn channel_report(theta_degrees: f64) -> Result<String, JsValue> {
    let spec = family_spec(theta_degrees);
    let report = spec.validate();
    let degradability = spec
        .verify_degradability()
        .map_err(|e| JsValue::from_str(&e.to_string()))?;
    to_json(&ChannelReport {
        theta_degrees,
        overlap: theta_degrees.to_radians().cos(),
        d_a: report.d_a,
        d_c: report.d_c,
        n_outcomes: report.n_outcomes,
        completeness_residual: report.completeness_residual,
        isometry_residual: spec.isometry_residual(),
        degradability_residual: degradability,
        classical_embedded: is_classical_embedded(&spec),
    })
}

#[derive(Serialize)]
struct RateReport {
    task: String,
    mix_degrees: f64,
    primary_rate: f64,
    charlie_rate_c: f64,
    charlie_rate_b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    sum_rate: Option<f64>,
}

/// Rates of a one-knob ensemble family.
///
/// cc: W = Z uniform over the letter pair (cos t, sin t) / (sin t, cos t),
/// which sweeps from the perfectly distinguishable basis pair at t = 0° to
/// identical letters at t = 45°.
/// cq/eac: a single pure state cos(t)|00⟩ + sin(t)|11⟩ on R⊗A, so the knob
/// sweeps from product to maximally entangled.
#[wasm_bindgen]
pub fn evaluate_rates(theta_degrees: f64, task: &str, mix_degrees: f64) -> Result<String, JsValue> {
    let spec = family_spec(theta_degrees);
    let task = task_of(task)?;
    let t = mix_degrees.to_radians();
    let ensemble = match task {
        Task::Cc => {
            let up = vec![Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0)];
            let down = vec![Complex64::new(t.sin(), 0.0), Complex64::new(t.cos(), 0.0)];
            InputEnsemble::new(
                Task::Cc,
                vec![
                    EnsembleEntry {
                        w: 0,
                        z: Some(0),
                        probability: 0.5,
                        state: up,
                    },
                    EnsembleEntry {
                        w: 1,
                        z: Some(1),
                        probability: 0.5,
                        state: down,
                    },
                ],
            )
        }
        Task::Cq | Task::Eac => {
            let mut state = vec![Complex64::ZERO; 4];
            state[0] = Complex64::new(t.cos(), 0.0);
            state[3] = Complex64::new(t.sin(), 0.0);
            InputEnsemble::new(
                task,
                vec![EnsembleEntry {
                    w: 0,
                    z: None,
                    probability: 1.0,
                    state,
                }],
            )
        }
    };
    let triple = rates(&spec, &ensemble).map_err(|e| JsValue::from_str(&e.to_string()))?;
    to_json(&RateReport {
        task: task.as_str().to_string(),
        mix_degrees,
        primary_rate: triple.primary_rate,
        charlie_rate_c: triple.charlie_rate_c,
        charlie_rate_b: triple.charlie_rate_b,
        sum_rate: triple.sum_rate,
    })
}

#[derive(Serialize)]
struct FrontierPoint {
    lambda: f64,
    rate_b: f64,
    rate_c: f64,
}

#[derive(Serialize)]
struct FrontierReport {
    task: String,
    theta_degrees: f64,
    points: Vec<FrontierPoint>,
    /// Brute-force classical points, present when the channel is embedded
    /// (θ = 0° or 90°).
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_points: Option<Vec<FrontierPoint>>,
}

/// Trace the task's capacity frontier at a browser-friendly budget.
#[wasm_bindgen]
pub fn trace_frontier(
    theta_degrees: f64,
    task: &str,
    lambdas: usize,
    restarts: usize,
    max_iters: usize,
    seed: u64,
) -> Result<String, JsValue> {
    let spec = family_spec(theta_degrees);
    let task = task_of(task)?;
    let config = OptimizationConfig {
        num_w: 3,
        num_z: 2,
        lambda_grid: lambdas.clamp(2, 65),
        restarts: restarts.clamp(1, 64),
        max_iters: max_iters.clamp(100, 20_000),
        seed,
        workers: 1,
        ..OptimizationConfig::default_for(2)
    };
    let frontier =
        optimize_frontier(&spec, task, &config).map_err(|e| JsValue::from_str(&e.to_string()))?;
    let points = frontier
        .points()
        .iter()
        .map(|p| FrontierPoint {
            lambda: p.lambda,
            rate_b: p.rate_b,
            rate_c: p.rate_c,
        })
        .collect();
    let oracle_points = if task == Task::Cc && is_classical_embedded(&spec) {
        classical_oracle_frontier(&spec, 16).ok().map(|f| {
            f.points()
                .iter()
                .map(|p| FrontierPoint {
                    lambda: p.lambda,
                    rate_b: p.rate_b,
                    rate_c: p.rate_c,
                })
                .collect()
        })
    } else {
        None
    };
    to_json(&FrontierReport {
        task: task.as_str().to_string(),
        theta_degrees,
        points,
        oracle_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_shows_exact_structure() {
        let json = channel_report(30.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v["completeness_residual"].as_f64().unwrap() < 1e-12);
        assert!(v["isometry_residual"].as_f64().unwrap() < 1e-10);
        assert!(v["degradability_residual"].as_f64().unwrap() < 1e-10);
        assert_eq!(v["classical_embedded"], serde_json::Value::Bool(false));
    }

    #[test]
    fn endpoints_of_family_are_classical() {
        for theta in [0.0, 90.0] {
            let json = channel_report(theta).unwrap();
            let v: serde_json::Value = serde_json::from_str(&json).unwrap();
            assert_eq!(v["classical_embedded"], serde_json::Value::Bool(true));
        }
    }

    #[test]
    fn eac_bell_pair_on_constant_charlie_gives_two_bits() {
        let json = evaluate_rates(0.0, "eac", 45.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!((v["primary_rate"].as_f64().unwrap() - 2.0).abs() < 1e-9);
        assert!(v["charlie_rate_c"].as_f64().unwrap().abs() < 1e-9);
    }

    #[test]
    fn cc_mix_knob_trades_rates() {
        // At θ = 90° (noiseless to both), fully correlated basis letters
        // give Charlie everything and Bob nothing beyond W.
        let json = evaluate_rates(90.0, "cc", 0.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v["primary_rate"].as_f64().unwrap().abs() < 1e-9);
        assert!((v["charlie_rate_c"].as_f64().unwrap() - 1.0).abs() < 1e-9);
        // Identical letters at t = 45° carry nothing.
        let json = evaluate_rates(90.0, "cc", 45.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v["charlie_rate_c"].as_f64().unwrap().abs() < 1e-9);
    }

    #[test]
    fn frontier_of_constant_charlie_family() {
        let json = trace_frontier(0.0, "cc", 3, 4, 1200, 7).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let points = v["points"].as_array().unwrap();
        assert!(!points.is_empty());
        let best_b = points
            .iter()
            .map(|p| p["rate_b"].as_f64().unwrap())
            .fold(f64::MIN, f64::max);
        assert!(best_b > 0.97, "best_b = {best_b}");
        assert!(v["oracle_points"].is_array());
    }

    #[test]
    fn frontier_omits_oracle_away_from_endpoints() {
        let json = trace_frontier(40.0, "cq", 3, 2, 400, 7).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v.get("oracle_points").is_none());
    }
}
