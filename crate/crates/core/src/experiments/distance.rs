use serde_json::json;

use super::stats::{histogram, median, standard_error, wilson_interval};
use super::{run_trials, Check, ExperimentConfig, Outcome, RecordSink, TrialRecord};
use crate::analysis::{distance_exact, CodeParams};
use crate::chain::union_bound;
use crate::circuit::sample_circuit;
use crate::clifford::TwoQubitCliffordTable;
use crate::error::{arg, Result};

const DEFAULT_MAX_D: usize = 3;
const Z_95: f64 = 1.959964;

pub(super) fn execute(config: &ExperimentConfig, sink: &mut RecordSink) -> Result<Outcome> {
    let (n, k) = (config.n, config.k);
    CodeParams::new(n, k)?;
    if k >= n {
        return arg(format!("distance ensemble needs k < n, got n={n}, k={k}"));
    }
    let t = config.gates_for(n);
    let d_max = config.d.unwrap_or(DEFAULT_MAX_D).min(n);
    if d_max == 0 {
        return arg("d must be at least 1");
    }
    let table = TwoQubitCliffordTable::shared();

    let records = run_trials(
        config.master_seed,
        0,
        config.trials,
        |trial, rng| {
            let c = sample_circuit(n, t, table, rng)?;
            let report = distance_exact(&c.to_tableau(table)?, k)?;
            Ok(TrialRecord::Distance {
                trial,
                distance: report.distance,
            })
        },
        |batch| {
            sink.push(batch)?;
            Ok(false)
        },
    )?;
    let distances: Vec<usize> = records
        .iter()
        .map(|r| match r {
            TrialRecord::Distance { distance, .. } => *distance,
            _ => unreachable!(),
        })
        .collect();
    let hist = histogram(distances.iter().copied(), n + 1);
    let trials = config.trials as u64;

    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for d in 1..=d_max {
        let failures: u64 = hist[..=d].iter().sum();
        let rate = failures as f64 / trials as f64;
        let sigma = standard_error(failures, trials);
        let bound = union_bound(n, k, d, t)?;
        let ci = wilson_interval(failures, trials, Z_95);
        checks.push(Check::new(
            format!("union_bound_dominates_d{d}"),
            rate <= bound + 3.0 * sigma,
            format!("Pr[distance ≤ {d}] = {rate:.6} ± {sigma:.6}, union bound {bound:.6}"),
        ));
        rows.push(json!({
            "d": d,
            "failures": failures,
            "rate": rate,
            "sigma": sigma,
            "wilson_95": ci,
            "union_bound": bound,
        }));
    }
    if t == 0 {
        checks.push(Check::new(
            "identity_encoder_distance_1",
            hist[1] == trials,
            format!("{} of {trials} trials at distance 1", hist[1]),
        ));
    }
    let mean = distances.iter().sum::<usize>() as f64 / trials as f64;
    let aggregates = json!({
        "t": t,
        "histogram": hist,
        "mean_distance": mean,
        "median_distance": median(&distances),
        "failure_rates": rows,
    });
    Ok((records, aggregates, checks))
}
