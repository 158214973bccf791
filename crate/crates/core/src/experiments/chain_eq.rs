use serde_json::json;

use super::stats::histogram;
use super::{run_trials, Check, ExperimentConfig, Outcome, RecordSink, TrialRecord};
use crate::chain::{evolve, WeightDistribution};
use crate::circuit::sample_circuit;
use crate::clifford::TwoQubitCliffordTable;
use crate::error::{arg, Result};
use crate::pauli::{Letter, PauliString};

const DEFAULT_TV_TOLERANCE: f64 = 0.01;

pub(super) fn execute(config: &ExperimentConfig, sink: &mut RecordSink) -> Result<Outcome> {
    let n = config.n;
    if n < 2 {
        return arg(format!("chain-eq needs n ≥ 2, got {n}"));
    }
    let start = match &config.start {
        Some(p) => p.clone(),
        None => PauliString::single(n, 0, Letter::X),
    };
    let mut starts = vec![start];
    if let Some(p) = &config.compare_start {
        starts.push(p.clone());
    }
    for p in &starts {
        if p.num_qubits() != n {
            return arg(format!("start {p} is not on {n} qubits"));
        }
    }
    let l0 = starts[0].weight();
    if l0 == 0 {
        return arg("start Pauli must not be the identity");
    }
    if starts.iter().any(|p| p.weight() != l0) {
        return arg("start Paulis must have equal weight");
    }
    let t = config.gates_for(n);
    let tolerance = config.tv_tolerance.unwrap_or(DEFAULT_TV_TOLERANCE);
    let table = TwoQubitCliffordTable::shared();
    let expected = evolve(n, l0, t)?;

    let mut records = Vec::new();
    let mut empirical = Vec::new();
    for (s, nu) in starts.iter().enumerate() {
        let offset = (s * config.trials) as u64;
        let recs = run_trials(
            config.master_seed,
            offset,
            config.trials,
            |trial, rng| {
                let c = sample_circuit(n, t, table, rng)?;
                let mut p = nu.clone();
                for g in &c.gates {
                    table.conjugate_local(g.clifford_index, g.i, g.j, &mut p);
                }
                Ok(TrialRecord::Weight {
                    trial,
                    start: s as u8,
                    weight: p.weight(),
                })
            },
            |batch| {
                sink.push(batch)?;
                Ok(false)
            },
        )?;
        let weights = recs.iter().map(|r| match r {
            TrialRecord::Weight { weight, .. } => *weight,
            _ => unreachable!(),
        });
        empirical.push(histogram(weights, n + 1));
        records.extend(recs);
    }

    let dists: Vec<WeightDistribution> = empirical
        .iter()
        .map(|h| WeightDistribution::from_counts(n, h))
        .collect();
    let tv = dists[0].total_variation(&expected);
    let mut checks = vec![Check::new(
        "tv_empirical_vs_chain",
        tv <= tolerance,
        format!("TV = {tv:.6} (tolerance {tolerance})"),
    )];
    let mut aggregates = json!({
        "t": t,
        "l0": l0,
        "histogram": empirical[0],
        "expected": expected.probs,
        "tv": tv,
        "empirical_mean_weight": dists[0].mean(),
        "expected_mean_weight": expected.mean(),
    });
    if dists.len() == 2 {
        let tv_pair = dists[0].total_variation(&dists[1]);
        let tv_second = dists[1].total_variation(&expected);
        checks.push(Check::new(
            "tv_between_starts",
            tv_pair <= tolerance,
            format!("TV = {tv_pair:.6} (tolerance {tolerance})"),
        ));
        aggregates["compare_histogram"] = json!(empirical[1]);
        aggregates["tv_between_starts"] = json!(tv_pair);
        aggregates["tv_second_vs_chain"] = json!(tv_second);
    }
    Ok((records, aggregates, checks))
}
