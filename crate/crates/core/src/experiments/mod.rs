//! Batch experiments over ensembles of random circuits.
//!
//! Every trial draws from its own ChaCha20 stream: the generator is seeded
//! with the master seed and the stream is set to the trial index. Trial
//! results therefore depend only on `(master_seed, trial_index)`, never on
//! the number of workers or on scheduling.

mod chain_eq;
mod depth;
mod distance;
pub mod stats;
mod thm3;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::chain::t_from_constant;
use crate::error::{arg, Error, Result};
use crate::pauli::PauliString;

pub use depth::PINNED_GREEDY_DEPTH_RATIO;

/// Identifier recorded in every report.
pub const RNG_ALGORITHM: &str = "chacha20-rand_chacha-0.9/seed_from_u64(master)/stream=trial/v1";

/// Trials evaluated (and streamed to disk) per batch.
const BATCH: usize = 2048;

pub fn trial_rng(master_seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    ChainEq,
    Distance,
    Depth,
    Thm3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub n: usize,
    #[serde(default = "one")]
    pub k: usize,
    /// Explicit gate count; takes precedence over `c`.
    #[serde(default)]
    pub t: Option<usize>,
    /// Gate count as `⌈c·n·log₂²n⌉`.
    #[serde(default)]
    pub c: Option<f64>,
    /// Largest `d` for failure rates (distance) or the distance target (thm3).
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Worker threads; `None` uses all cores.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Report path; trial records stream to `<output>.trials.jsonl`.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// chain-eq: start Pauli (default `X` on qubit 0).
    #[serde(default)]
    pub start: Option<PauliString>,
    /// chain-eq: a second start of equal weight to compare against.
    #[serde(default)]
    pub compare_start: Option<PauliString>,
    /// chain-eq: allowed total-variation distance.
    #[serde(default)]
    pub tv_tolerance: Option<f64>,
    /// depth: qubit counts to sweep.
    #[serde(default)]
    pub n_values: Option<Vec<usize>>,
    /// depth: bound on greedy depth / ((t/n)·log₂n).
    #[serde(default)]
    pub depth_ratio_limit: Option<f64>,
    /// thm3: depth target as a multiple of (t/n)·log₂n.
    #[serde(default)]
    pub depth_factor: Option<f64>,
}

fn one() -> usize {
    1
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            kind,
            n: 0,
            k: 1,
            t: None,
            c: None,
            d: None,
            trials: 1,
            master_seed: 0,
            workers: None,
            output: None,
            start: None,
            compare_start: None,
            tv_tolerance: None,
            n_values: None,
            depth_ratio_limit: None,
            depth_factor: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Argument(format!("bad config: {e}")))
    }

    /// Gate count for `n` qubits: `t`, else `⌈c·n·log₂²n⌉`, else
    /// `n·⌈log₂n⌉²`.
    pub fn gates_for(&self, n: usize) -> usize {
        match (self.t, self.c) {
            (Some(t), _) => t,
            (None, Some(c)) => t_from_constant(n, c),
            (None, None) => {
                let lg = (n as f64).log2().ceil() as usize;
                n * lg * lg
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return arg("trials must be at least 1");
        }
        if self.workers == Some(0) {
            return arg("workers must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TrialRecord {
    Weight {
        trial: u64,
        start: u8,
        weight: usize,
    },
    Distance {
        trial: u64,
        distance: usize,
    },
    Depth {
        trial: u64,
        n: usize,
        t: usize,
        greedy_depth: usize,
        asap_depth: usize,
        max_wire: usize,
    },
    Search {
        trial: u64,
        distance: usize,
        depth: usize,
        accepted: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rng_algorithm: String,
    pub records: Vec<TrialRecord>,
    pub aggregates: serde_json::Value,
    pub checks: Vec<Check>,
    /// Excluded from reproducibility comparisons.
    pub wall_clock_ms: u128,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Report with the wall-clock field zeroed, for byte comparisons.
    pub fn without_timing(&self) -> ExperimentReport {
        ExperimentReport {
            wall_clock_ms: 0,
            ..self.clone()
        }
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("report serializes");
        std::fs::write(path, text).map_err(|e| io_error(path, e))
    }

    /// Weight or distance histogram as CSV rows `value,count`.
    pub fn histogram_csv(&self) -> Option<String> {
        let hist = self.aggregates.get("histogram")?.as_array()?;
        let mut out = String::from("value,count\n");
        for (v, c) in hist.iter().enumerate() {
            out.push_str(&format!("{v},{}\n", c.as_u64()?));
        }
        Some(out)
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Argument(format!("{}: {e}", path.display()))
}

pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let started = Instant::now();
    let mut sink = RecordSink::open(config.output.as_deref())?;
    let (records, aggregates, checks) = with_workers(config.workers, || match config.kind {
        ExperimentKind::ChainEq => chain_eq::execute(config, &mut sink),
        ExperimentKind::Distance => distance::execute(config, &mut sink),
        ExperimentKind::Depth => depth::execute(config, &mut sink),
        ExperimentKind::Thm3 => thm3::execute(config, &mut sink),
    })?;
    sink.finish()?;
    let report = ExperimentReport {
        config: config.clone(),
        rng_algorithm: RNG_ALGORITHM.to_string(),
        records,
        aggregates,
        checks,
        wall_clock_ms: started.elapsed().as_millis(),
    };
    if let Some(path) = &config.output {
        report.write_json(path)?;
    }
    Ok(report)
}

fn run_as(kind: ExperimentKind, config: &ExperimentConfig) -> Result<ExperimentReport> {
    run(&ExperimentConfig {
        kind,
        ..config.clone()
    })
}

pub fn run_chain_equivalence(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_as(ExperimentKind::ChainEq, config)
}

pub fn run_distance_ensemble(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_as(ExperimentKind::Distance, config)
}

pub fn run_depth_scaling(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_as(ExperimentKind::Depth, config)
}

pub fn run_theorem3_demo(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_as(ExperimentKind::Thm3, config)
}

type Outcome = (Vec<TrialRecord>, serde_json::Value, Vec<Check>);

#[cfg(feature = "parallel")]
fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_workers<T>(_workers: Option<usize>, f: impl FnOnce() -> T) -> T {
    f()
}

/// Appends trial records to a JSON-lines file as batches complete.
pub(crate) struct RecordSink {
    out: Option<(PathBuf, BufWriter<File>)>,
}

impl RecordSink {
    fn open(report_path: Option<&Path>) -> Result<Self> {
        let out = match report_path {
            Some(p) => {
                let mut name = p.as_os_str().to_owned();
                name.push(".trials.jsonl");
                let path = PathBuf::from(name);
                let file = File::create(&path).map_err(|e| io_error(&path, e))?;
                Some((path, BufWriter::new(file)))
            }
            None => None,
        };
        Ok(RecordSink { out })
    }

    fn push(&mut self, records: &[TrialRecord]) -> Result<()> {
        if let Some((path, w)) = &mut self.out {
            for r in records {
                serde_json::to_writer(&mut *w, r).expect("record serializes");
                w.write_all(b"\n").map_err(|e| io_error(path, e))?;
            }
            w.flush().map_err(|e| io_error(path, e))?;
        }
        Ok(())
    }

    fn finish(self) -> Result<()> {
        if let Some((path, mut w)) = self.out {
            w.flush().map_err(|e| io_error(&path, e))?;
        }
        Ok(())
    }
}

/// Evaluates `f(trial, rng)` for trials `0..count` on streams
/// `stream_offset + trial`, in batches, keeping trial order. Stops after the
/// first batch for which `stop` returns true.
pub(crate) fn run_trials<T, F>(
    master_seed: u64,
    stream_offset: u64,
    count: usize,
    f: F,
    mut on_batch: impl FnMut(&[T]) -> Result<bool>,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut ChaCha20Rng) -> Result<T> + Sync,
{
    let mut all = Vec::with_capacity(count);
    let mut start = 0usize;
    while start < count {
        let end = (start + BATCH).min(count);
        let eval = |i: usize| -> Result<T> {
            let mut rng = trial_rng(master_seed, stream_offset + i as u64);
            f(i as u64, &mut rng)
        };
        #[cfg(feature = "parallel")]
        let batch: Vec<T> = {
            use rayon::prelude::*;
            (start..end)
                .into_par_iter()
                .map(eval)
                .collect::<Result<_>>()?
        };
        #[cfg(not(feature = "parallel"))]
        let batch: Vec<T> = (start..end).map(eval).collect::<Result<_>>()?;
        let stop = on_batch(&batch)?;
        all.extend(batch);
        if stop {
            break;
        }
        start = end;
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_independent_of_order() {
        let a: Vec<u64> = (0..5).map(|i| trial_rng(7, i).random()).collect();
        let b: Vec<u64> = (0..5).rev().map(|i| trial_rng(7, i).random()).collect();
        let b: Vec<u64> = b.into_iter().rev().collect();
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
        assert_ne!(
            trial_rng(7, 0).random::<u64>(),
            trial_rng(8, 0).random::<u64>()
        );
    }

    #[test]
    fn gate_count_rules() {
        let mut c = ExperimentConfig::new(ExperimentKind::Depth);
        assert_eq!(c.gates_for(64), 64 * 36);
        assert_eq!(c.gates_for(12), 12 * 16);
        c.c = Some(1.0);
        assert_eq!(c.gates_for(12), 155);
        c.t = Some(5);
        assert_eq!(c.gates_for(12), 5);
    }

    #[test]
    fn config_json() {
        let c = ExperimentConfig::from_json(
            r#"{"kind":"chain-eq","n":6,"t":20,"trials":10,"start":"+XIIIII"}"#,
        )
        .unwrap();
        assert_eq!(c.kind, ExperimentKind::ChainEq);
        assert_eq!(c.k, 1);
        assert_eq!(c.start.unwrap().weight(), 1);
        assert!(ExperimentConfig::from_json(r#"{"kind":"nope"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"kind":"depth","bogus":1}"#).is_err());
    }

    #[test]
    fn batches_stop_early() {
        let mut seen = 0;
        let out = run_trials(
            1,
            0,
            10_000,
            |i, _| Ok(i),
            |b| {
                seen += b.len();
                Ok(true)
            },
        )
        .unwrap();
        assert_eq!(out.len(), BATCH);
        assert_eq!(seen, BATCH);
        assert_eq!(out[5], 5);
    }
}
