//! `stabcodes`: sample random Clifford encoders, measure their codes and
//! run the batch experiments.
//!
//! Exit status is 0 on success, 1 when a checked invariant fails and 2 on
//! bad input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use stabcodes::analysis::{
    distance_exact, distance_monte_carlo, kl_oracle, oracle::DEFAULT_ORACLE_LIMIT,
};
use stabcodes::chain::{
    closed_form_failure_bound, evolve, evolve_exact, t_from_constant, union_bound, Theorem2Report,
};
use stabcodes::experiments::{self, trial_rng, ExperimentConfig, ExperimentKind, ExperimentReport};
use stabcodes::{
    parallelize, parallelize_asap, sample_circuit, Circuit, Error, PauliString,
    TwoQubitCliffordTable,
};

#[derive(Parser)]
#[command(
    name = "stabcodes",
    version,
    about = "Stabilizer codes from short random Clifford circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample t random two-qubit Clifford gates on n qubits.
    SampleCircuit {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the circuit here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Level a circuit into layers of disjoint gates.
    Parallelize {
        #[arg(long = "in")]
        input: PathBuf,
        /// As-soon-as-possible placement instead of greedy leveling.
        #[arg(long)]
        asap: bool,
    },
    /// Distance of the code encoded by a circuit on its first k qubits.
    Distance {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        /// Monte Carlo upper estimate from this many samples.
        #[arg(long, value_name = "SAMPLES")]
        mc: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cross-check with the statevector oracle up to this weight.
        #[arg(long, value_name = "D_MAX")]
        oracle: Option<usize>,
    },
    /// Weight distribution after t random gates, from weight l0.
    ChainEvolve {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l0: usize,
        #[arg(long)]
        t: usize,
        /// Exact rational probabilities (n ≤ 64).
        #[arg(long)]
        exact_rational: bool,
    },
    /// Union bound on Pr[distance ≤ d].
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: usize,
        /// Also report the closed-form large-n bound.
        #[arg(long, requires = "delta")]
        closed_form: bool,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Numeric check of the chain's mixing bound at t = ⌈c·n·log₂²n⌉.
    CheckThm2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        c: f64,
    },
    /// Size and checksum of the two-qubit Clifford table.
    GateTable {
        /// Fail unless the checksum equals this value.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Run a batch experiment.
    Experiment {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        opts: Box<ExperimentOpts>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    ChainEq,
    Distance,
    Depth,
    Thm3,
}

impl From<Kind> for ExperimentKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::ChainEq => ExperimentKind::ChainEq,
            Kind::Distance => ExperimentKind::Distance,
            Kind::Depth => ExperimentKind::Depth,
            Kind::Thm3 => ExperimentKind::Thm3,
        }
    }
}

/// Inline flags override values from `--config`.
#[derive(Args)]
struct ExperimentOpts {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    emit_csv: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long = "seed")]
    master_seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    start: Option<PauliString>,
    #[arg(long)]
    compare_start: Option<PauliString>,
    #[arg(long)]
    tv_tolerance: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    n_values: Option<Vec<usize>>,
    #[arg(long)]
    depth_ratio_limit: Option<f64>,
    #[arg(long)]
    depth_factor: Option<f64>,
}

enum Failure {
    Invariant(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command) -> Outcome {
    let table = TwoQubitCliffordTable::shared();
    match cmd {
        Command::SampleCircuit { n, t, seed, out } => {
            let mut c = sample_circuit(n, t, table, &mut trial_rng(seed, 0))?;
            c.seed = Some(seed);
            let text = c.to_json(table);
            match out {
                Some(path) => write(&path, &text),
                None => {
                    let _ = writeln!(std::io::stdout().lock(), "{text}");
                    Ok(())
                }
            }
        }
        Command::Parallelize { input, asap } => {
            let c = read_circuit(&input, table)?;
            let layered = if asap {
                parallelize_asap(&c)
            } else {
                parallelize(&c)
            };
            let layers: Vec<Vec<[usize; 3]>> = layered
                .layers
                .iter()
                .map(|l| l.iter().map(|g| [g.i, g.j, g.clifford_index]).collect())
                .collect();
            print_json(&json!({
                "n": c.n,
                "gates": c.len(),
                "depth": layered.depth(),
                "max_wire_count": c.max_wire_count(),
                "layer_sizes": layered.layer_sizes(),
                "layers": layers,
            }));
            Ok(())
        }
        Command::Distance {
            input,
            k,
            exact: _,
            mc,
            seed,
            oracle,
        } => {
            let c = read_circuit(&input, table)?;
            let tab = c.to_tableau(table)?;
            let report = match mc {
                Some(samples) => distance_monte_carlo(&tab, k, samples, &mut trial_rng(seed, 0))?,
                None => distance_exact(&tab, k)?,
            };
            let mut out = serde_json::to_value(&report).expect("report serializes");
            let mut agree = true;
            if let Some(d_max) = oracle {
                let o = kl_oracle(&c, table, k, d_max, DEFAULT_ORACLE_LIMIT)?;
                // The oracle only resolves distances up to d_max.
                agree = o.distance == report.distance.min(d_max + 1);
                out["oracle"] = serde_json::to_value(&o).expect("report serializes");
                out["oracle_agrees"] = json!(agree);
            }
            print_json(&out);
            if agree || mc.is_some() {
                Ok(())
            } else {
                Err(Failure::Invariant(
                    "distance disagrees with the statevector oracle".into(),
                ))
            }
        }
        Command::ChainEvolve {
            n,
            l0,
            t,
            exact_rational,
        } => {
            if exact_rational {
                let dist = evolve_exact(n, l0, t)?;
                let probs: Vec<String> = (0..=n).map(|m| dist.probability(m).to_string()).collect();
                print_json(
                    &json!({ "n": n, "l0": l0, "t": t, "probs": probs, "approx": dist.to_f64() }),
                );
            } else {
                let dist = evolve(n, l0, t)?;
                print_json(
                    &json!({ "n": n, "l0": l0, "t": t, "probs": dist.probs, "mean": dist.mean() }),
                );
            }
            Ok(())
        }
        Command::Bound {
            n,
            k,
            d,
            t,
            closed_form,
            delta,
        } => {
            let mut out =
                json!({ "n": n, "k": k, "d": d, "t": t, "union_bound": union_bound(n, k, d, t)? });
            if closed_form {
                let delta = delta.expect("clap enforces --delta");
                out["closed_form"] =
                    serde_json::to_value(closed_form_failure_bound(n, k, d, delta)?)
                        .expect("bound serializes");
            }
            print_json(&out);
            Ok(())
        }
        Command::CheckThm2 { n, delta, eta, c } => {
            let t = t_from_constant(n, c);
            let report = Theorem2Report::evaluate(n, delta, eta, t)?;
            let mut out = serde_json::to_value(&report).expect("report serializes");
            out["holds"] = json!(report.holds());
            out["c"] = json!(c);
            print_json(&out);
            if report.holds() {
                Ok(())
            } else {
                Err(Failure::Invariant(format!(
                    "{} violations",
                    report.violations.len()
                )))
            }
        }
        Command::GateTable { expect } => {
            print_json(&json!({ "entries": table.len(), "checksum": table.checksum() }));
            match expect {
                Some(e) if e != table.checksum() => Err(Failure::Invariant(format!(
                    "checksum {} != expected {e}",
                    table.checksum()
                ))),
                _ => Ok(()),
            }
        }
        Command::Experiment { kind, opts } => run_experiment(kind.into(), *opts),
    }
}

fn run_experiment(kind: ExperimentKind, o: ExperimentOpts) -> Outcome {
    let mut cfg = match &o.config {
        Some(path) => ExperimentConfig::from_json(&read(path)?)?,
        None => ExperimentConfig::new(kind),
    };
    cfg.kind = kind;
    macro_rules! set {
        ($($field:ident),*) => {
            $(if let Some(v) = o.$field { cfg.$field = v; })*
        };
    }
    macro_rules! set_opt {
        ($($field:ident),*) => {
            $(if o.$field.is_some() { cfg.$field = o.$field; })*
        };
    }
    set!(n, k, trials, master_seed);
    set_opt!(
        t,
        c,
        d,
        workers,
        output,
        start,
        compare_start,
        tv_tolerance,
        n_values,
        depth_ratio_limit,
        depth_factor
    );

    let report = experiments::run(&cfg)?;
    if let Some(dir) = &o.emit_csv {
        emit_csv(&report, dir)?;
    }
    for check in &report.checks {
        eprintln!(
            "{} {}: {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    let mut summary = json!({
        "kind": cfg.kind,
        "rng_algorithm": report.rng_algorithm,
        "trials": report.records.len(),
        "aggregates": report.aggregates,
        "checks": report.checks,
        "passed": report.passed(),
        "wall_clock_ms": report.wall_clock_ms,
    });
    if let Some(path) = &cfg.output {
        summary["report"] = json!(path);
    }
    print_json(&summary);
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Invariant("experiment checks failed".into()))
    }
}

fn emit_csv(report: &ExperimentReport, dir: &Path) -> Outcome {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    if let Some(text) = report.histogram_csv() {
        write(&dir.join("histogram.csv"), &text)?;
    }
    if let Some(Value::Array(rows)) = report.aggregates.get("per_n") {
        write(&dir.join("depth_per_n.csv"), &objects_csv(rows))?;
    }
    if let Some(Value::Array(rows)) = report.aggregates.get("failure_rates") {
        let flat: Vec<Value> = rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                let ci = r["wilson_95"].take();
                r["wilson_lower"] = ci["lower"].clone();
                r["wilson_upper"] = ci["upper"].clone();
                r.as_object_mut().expect("row object").remove("wilson_95");
                r
            })
            .collect();
        write(&dir.join("failure_rates.csv"), &objects_csv(&flat))?;
    }
    let records: Vec<Value> = report
        .records
        .iter()
        .map(|r| serde_json::to_value(r).expect("record serializes"))
        .collect();
    write(&dir.join("trials.csv"), &objects_csv(&records))
}

/// CSV of flat JSON objects, columns taken from the first row.
fn objects_csv(rows: &[Value]) -> String {
    let Some(Value::Object(first)) = rows.first() else {
        return String::new();
    };
    let cols: Vec<&String> = first.keys().collect();
    let mut out = cols
        .iter()
        .map(|c| c.as_str())
        .collect::<Vec<_>>()
        .join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = cols
            .iter()
            .map(|c| match &row[c.as_str()] {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                v => v.to_string(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_circuit(path: &Path, table: &TwoQubitCliffordTable) -> Result<Circuit, Failure> {
    Ok(Circuit::from_json(&read(path)?, table)?)
}

fn print_json(v: &Value) {
    // A closed pipe (e.g. `| head`) is not an error worth a panic.
    let _ = writeln!(
        std::io::stdout().lock(),
        "{}",
        serde_json::to_string_pretty(v).expect("json serializes")
    );
}
