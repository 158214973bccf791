use serde_json::json;

use super::{run_trials, Check, ExperimentConfig, Outcome, RecordSink, TrialRecord};
use crate::circuit::{parallelize, parallelize_asap, sample_circuit};
use crate::clifford::TwoQubitCliffordTable;
use crate::error::{arg, Result};

/// Regression bound on greedy depth / ((t/n)·log₂n) over the default sweep.
pub const PINNED_GREEDY_DEPTH_RATIO: f64 = 4.5;

const DEFAULT_SWEEP: [usize; 4] = [64, 128, 256, 512];

pub fn depth_scale(n: usize, t: usize) -> f64 {
    t as f64 / n as f64 * (n as f64).log2()
}

pub(super) fn execute(config: &ExperimentConfig, sink: &mut RecordSink) -> Result<Outcome> {
    let sweep = match (&config.n_values, config.n) {
        (Some(v), _) => v.clone(),
        (None, 0) => DEFAULT_SWEEP.to_vec(),
        (None, n) => vec![n],
    };
    if sweep.is_empty() || sweep.iter().any(|&n| n < 2) {
        return arg("depth sweep needs qubit counts ≥ 2");
    }
    let limit = config
        .depth_ratio_limit
        .unwrap_or(PINNED_GREEDY_DEPTH_RATIO);
    let table = TwoQubitCliffordTable::shared();

    let mut records = Vec::new();
    let mut per_n = Vec::new();
    let (mut within_t, mut above_wire, mut asap_not_worse) = (true, true, true);
    let mut worst_ratio = 0.0f64;
    for (s, &n) in sweep.iter().enumerate() {
        let t = config.gates_for(n);
        let recs = run_trials(
            config.master_seed,
            (s * config.trials) as u64,
            config.trials,
            |trial, rng| {
                let c = sample_circuit(n, t, table, rng)?;
                Ok(TrialRecord::Depth {
                    trial,
                    n,
                    t,
                    greedy_depth: parallelize(&c).depth(),
                    asap_depth: parallelize_asap(&c).depth(),
                    max_wire: c.max_wire_count(),
                })
            },
            |batch| {
                sink.push(batch)?;
                Ok(false)
            },
        )?;
        let scale = depth_scale(n, t);
        let (mut g_sum, mut g_max, mut a_sum, mut a_max) = (0usize, 0usize, 0usize, 0usize);
        for r in &recs {
            if let TrialRecord::Depth {
                greedy_depth,
                asap_depth,
                max_wire,
                ..
            } = *r
            {
                within_t &= greedy_depth <= t && asap_depth <= t;
                above_wire &= greedy_depth >= max_wire && asap_depth >= max_wire;
                asap_not_worse &= asap_depth <= greedy_depth;
                g_sum += greedy_depth;
                a_sum += asap_depth;
                g_max = g_max.max(greedy_depth);
                a_max = a_max.max(asap_depth);
            }
        }
        let ratio = if scale > 0.0 {
            g_max as f64 / scale
        } else {
            0.0
        };
        worst_ratio = worst_ratio.max(ratio);
        let count = recs.len() as f64;
        per_n.push(json!({
            "n": n,
            "t": t,
            "scale": scale,
            "greedy_mean": g_sum as f64 / count,
            "greedy_max": g_max,
            "greedy_ratio_max": ratio,
            "asap_mean": a_sum as f64 / count,
            "asap_max": a_max,
            "asap_ratio_max": if scale > 0.0 { a_max as f64 / scale } else { 0.0 },
        }));
        records.extend(recs);
    }
    let checks = vec![
        Check::new(
            "depth_at_most_t",
            within_t,
            "greedy and ASAP depth ≤ t on every sample",
        ),
        Check::new(
            "depth_at_least_max_wire",
            above_wire,
            "greedy and ASAP depth ≥ max per-wire gate count on every sample",
        ),
        Check::new(
            "asap_not_deeper",
            asap_not_worse,
            "ASAP depth ≤ greedy depth on every sample",
        ),
        Check::new(
            "greedy_ratio_bounded",
            worst_ratio <= limit,
            format!("max greedy depth / ((t/n)·log₂n) = {worst_ratio:.4} (limit {limit})"),
        ),
    ];
    let aggregates = json!({ "per_n": per_n, "worst_greedy_ratio": worst_ratio });
    Ok((records, aggregates, checks))
}
