//! WebAssembly entry points for the demo page in `www/`.
//!
//! Each export returns a JSON string. The plain `*_json` functions hold the
//! logic so they can be tested natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use stabcodes::analysis::{distance_exact, gv_rate_bound, CodeParams};
use stabcodes::chain::{evolve, stationary, union_bound};
use stabcodes::experiments::trial_rng;
use stabcodes::{parallelize, parallelize_asap, sample_circuit, TwoQubitCliffordTable};

/// Largest candidate count for which the demo computes exact distances.
pub const DEMO_DISTANCE_BUDGET: u128 = 1 << 20;

const GV_POINTS: usize = 101;

/// Weight law after `t` random gates from weight `l0`, next to the
/// stationary law.
pub fn chain_evolution_json(n: usize, l0: usize, t: usize) -> Result<Value, String> {
    let row = evolve(n, l0, t).map_err(|e| e.to_string())?;
    let pi = stationary(n).map_err(|e| e.to_string())?;
    Ok(json!({
        "probs": row.probs,
        "stationary": pi.probs,
        "tv_to_stationary": row.total_variation(&pi),
        "mean": row.mean(),
    }))
}

/// Samples a circuit and levels it both ways. The code distance is
/// included when exact enumeration is cheap.
pub fn random_circuit_json(n: usize, t: usize, k: usize, seed: u64) -> Result<Value, String> {
    let table = TwoQubitCliffordTable::shared();
    let c = sample_circuit(n, t, table, &mut trial_rng(seed, 0)).map_err(|e| e.to_string())?;
    let greedy = parallelize(&c);
    let asap = parallelize_asap(&c);
    let gates: Vec<[usize; 2]> = c.gates.iter().map(|g| [g.i, g.j]).collect();
    let mut out = json!({
        "n": n,
        "gates": gates,
        "greedy_layers": greedy.layer_sizes(),
        "asap_layers": asap.layer_sizes(),
        "greedy_depth": greedy.depth(),
        "asap_depth": asap.depth(),
        "max_wire_count": c.max_wire_count(),
        "distance": Value::Null,
    });
    let params = CodeParams::new(n, k).map_err(|e| e.to_string())?;
    if params.candidate_count() <= DEMO_DISTANCE_BUDGET {
        let tab = c.to_tableau(table).map_err(|e| e.to_string())?;
        let report = distance_exact(&tab, k).map_err(|e| e.to_string())?;
        out["distance"] = json!(report.distance);
        out["witness"] = json!(report.witness.to_string());
        out["witness_image"] = json!(report.witness_image.to_string());
    }
    Ok(out)
}

/// Union bound for `d = 1..=d_max` and the rate bound curve over `δ ∈ [0, 1/2]`.
pub fn failure_bounds_json(n: usize, k: usize, t: usize, d_max: usize) -> Result<Value, String> {
    let union: Vec<f64> = (1..=d_max)
        .map(|d| union_bound(n, k, d, t))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let gv: Vec<[f64; 2]> = (0..GV_POINTS)
        .map(|i| {
            let delta = 0.5 * i as f64 / (GV_POINTS - 1) as f64;
            [delta, gv_rate_bound(delta).expect("δ in range")]
        })
        .collect();
    Ok(json!({
        "union_bound": union,
        "rate": k as f64 / n as f64,
        "gv_curve": gv,
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = chainEvolution)]
pub fn chain_evolution(n: usize, l0: usize, t: usize) -> Result<String, JsError> {
    to_js(chain_evolution_json(n, l0, t))
}

#[wasm_bindgen(js_name = randomCircuit)]
pub fn random_circuit(n: usize, t: usize, k: usize, seed: u32) -> Result<String, JsError> {
    to_js(random_circuit_json(n, t, k, seed as u64))
}

#[wasm_bindgen(js_name = failureBounds)]
pub fn failure_bounds(n: usize, k: usize, t: usize, d_max: usize) -> Result<String, JsError> {
    to_js(failure_bounds_json(n, k, t, d_max))
}

#[wasm_bindgen(js_name = gateTableChecksum)]
pub fn gate_table_checksum() -> String {
    TwoQubitCliffordTable::shared().checksum().to_string()
}
