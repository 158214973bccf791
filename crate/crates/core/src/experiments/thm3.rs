use serde_json::json;

use super::depth::depth_scale;
use super::{run_trials, Check, ExperimentConfig, Outcome, RecordSink, TrialRecord};
use crate::analysis::distance_exact;
use crate::circuit::{parallelize, sample_circuit, Circuit};
use crate::clifford::TwoQubitCliffordTable;
use crate::error::{arg, Error, Result};

const DEFAULT_DISTANCE_TARGET: usize = 3;
const DEFAULT_DEPTH_FACTOR: f64 = 5.0;

/// Searches trials in index order; the first one meeting both targets is
/// the witness.
pub(super) fn execute(config: &ExperimentConfig, sink: &mut RecordSink) -> Result<Outcome> {
    let (n, k) = (config.n, config.k);
    if n < 2 || k == 0 || k >= n {
        return arg(format!("need n ≥ 2 and 1 ≤ k < n, got n={n}, k={k}"));
    }
    let t = config.gates_for(n);
    let distance_target = config.d.unwrap_or(DEFAULT_DISTANCE_TARGET);
    let depth_target =
        (config.depth_factor.unwrap_or(DEFAULT_DEPTH_FACTOR) * depth_scale(n, t)).floor() as usize;
    let table = TwoQubitCliffordTable::shared();

    let evaluate = |c: &Circuit| -> Result<(usize, usize)> {
        let d = distance_exact(&c.to_tableau(table)?, k)?.distance;
        Ok((d, parallelize(c).depth()))
    };
    let mut records = run_trials(
        config.master_seed,
        0,
        config.trials,
        |trial, rng| {
            let c = sample_circuit(n, t, table, rng)?;
            let (distance, depth) = evaluate(&c)?;
            Ok(TrialRecord::Search {
                trial,
                distance,
                depth,
                accepted: distance >= distance_target && depth <= depth_target,
            })
        },
        |batch| {
            let hit = batch.iter().position(accepted);
            sink.push(&batch[..hit.map_or(batch.len(), |h| h + 1)])?;
            Ok(hit.is_some())
        },
    )?;
    let found = records.iter().position(accepted);
    if let Some(w) = found {
        records.truncate(w + 1);
    }
    let distance_hits = records
        .iter()
        .filter(
            |r| matches!(r, TrialRecord::Search { distance, .. } if *distance >= distance_target),
        )
        .count();
    let depth_hits = records
        .iter()
        .filter(|r| matches!(r, TrialRecord::Search { depth, .. } if *depth <= depth_target))
        .count();

    let mut checks = vec![Check::new(
        "witness_found",
        found.is_some(),
        match found {
            Some(w) => {
                format!("trial {w} meets distance ≥ {distance_target} and depth ≤ {depth_target}")
            }
            None => format!(
                "no witness in {} trials ({distance_hits} met distance, {depth_hits} met depth)",
                records.len()
            ),
        },
    )];
    let mut aggregates = json!({
        "t": t,
        "distance_target": distance_target,
        "depth_target": depth_target,
        "trials_searched": records.len(),
        "distance_hits": distance_hits,
        "depth_hits": depth_hits,
    });
    if let Some(w) = found {
        // Regenerate the witness from its stream and replay it from JSON.
        let mut rng = super::trial_rng(config.master_seed, w as u64);
        let mut c = sample_circuit(n, t, table, &mut rng)?;
        c.seed = Some(config.master_seed);
        let text = c.to_json(table);
        let replayed = evaluate(&Circuit::from_json(&text, table)?)?;
        let TrialRecord::Search {
            distance, depth, ..
        } = records[w]
        else {
            unreachable!()
        };
        checks.push(Check::new(
            "witness_replays",
            replayed == (distance, depth),
            format!("replayed distance {} depth {}", replayed.0, replayed.1),
        ));
        if let Some(out) = &config.output {
            let mut name = out.as_os_str().to_owned();
            name.push(".witness.json");
            std::fs::write(&name, &text)
                .map_err(|e| Error::Argument(format!("{}: {e}", name.to_string_lossy())))?;
        }
        aggregates["witness_trial"] = json!(w);
        aggregates["witness"] = serde_json::from_str(&text).expect("circuit JSON parses");
    }
    Ok((records, aggregates, checks))
}

fn accepted(r: &TrialRecord) -> bool {
    matches!(r, TrialRecord::Search { accepted: true, .. })
}
