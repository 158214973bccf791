use stabcodes::experiments::{
    run, run_chain_equivalence, run_distance_ensemble, run_theorem3_demo, stats::median,
    ExperimentConfig, ExperimentKind, ExperimentReport, TrialRecord,
};

fn config(kind: ExperimentKind, n: usize, t: usize, trials: usize, seed: u64) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(kind);
    c.n = n;
    c.t = Some(t);
    c.trials = trials;
    c.master_seed = seed;
    c
}

fn distances(r: &ExperimentReport) -> Vec<usize> {
    r.records
        .iter()
        .map(|rec| match rec {
            TrialRecord::Distance { distance, .. } => *distance,
            other => panic!("unexpected record {other:?}"),
        })
        .collect()
}

#[test]
fn chain_eq_at_zero_gates_is_a_point_mass() {
    let r = run_chain_equivalence(&config(ExperimentKind::ChainEq, 6, 0, 200, 1)).unwrap();
    assert!(r.passed());
    assert_eq!(r.aggregates["tv"], 0.0);
    assert_eq!(r.aggregates["histogram"][1], 200);
}

#[test]
fn chain_eq_start_invariance() {
    let mut c = config(ExperimentKind::ChainEq, 6, 20, 20_000, 3);
    c.start = Some("+IIZIII".parse().unwrap());
    c.compare_start = Some("+IIIIIY".parse().unwrap());
    c.tv_tolerance = Some(0.03);
    let r = run(&c).unwrap();
    assert!(r.passed(), "{:?}", r.checks);
    assert_eq!(r.records.len(), 40_000);

    c.compare_start = Some("+XXIIII".parse().unwrap());
    assert!(run(&c).is_err());
}

#[test]
fn distance_ensemble_identity_encoder() {
    let mut c = config(ExperimentKind::Distance, 6, 0, 50, 2);
    c.k = 2;
    let r = run_distance_ensemble(&c).unwrap();
    assert!(r.passed(), "{:?}", r.checks);
    assert!(distances(&r).iter().all(|&d| d == 1));
    assert!(r
        .checks
        .iter()
        .any(|c| c.name == "identity_encoder_distance_1"));
}

#[test]
fn median_distance_grows_with_gates() {
    let medians: Vec<usize> = [0, 10, 50, 200]
        .iter()
        .map(|&t| {
            let r =
                run_distance_ensemble(&config(ExperimentKind::Distance, 10, t, 300, 6)).unwrap();
            assert!(r.passed(), "t={t}: {:?}", r.checks);
            median(&distances(&r))
        })
        .collect();
    assert!(medians.windows(2).all(|w| w[0] <= w[1]), "{medians:?}");
    assert_eq!(medians[0], 1);
    assert!(medians[3] > 1);
}

#[test]
fn thm3_distance_target_one_accepts_first_trial() {
    let mut c = config(ExperimentKind::Thm3, 8, 30, 10, 5);
    c.d = Some(1);
    let r = run_theorem3_demo(&c).unwrap();
    assert!(r.passed());
    assert_eq!(r.aggregates["witness_trial"], 0);
    assert_eq!(r.records.len(), 1);
}

#[test]
fn thm3_reports_exhausted_budget() {
    let mut c = config(ExperimentKind::Thm3, 6, 20, 30, 5);
    c.d = Some(6);
    let r = run_theorem3_demo(&c).unwrap();
    assert!(!r.passed());
    assert_eq!(r.aggregates["trials_searched"], 30);
    assert!(r.aggregates.get("witness").is_none());
}

#[test]
fn thm3_witness_at_twelve_qubits() {
    let mut c = ExperimentConfig::new(ExperimentKind::Thm3);
    c.n = 12;
    c.k = 1;
    c.c = Some(1.0);
    c.d = Some(3);
    c.trials = 100;
    c.master_seed = 1;
    let r = run_theorem3_demo(&c).unwrap();
    assert!(r.passed(), "{:?}", r.checks);
    assert_eq!(r.aggregates["t"], 155);
}

#[test]
fn reports_ignore_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for workers in [1, 4] {
        let mut c = config(ExperimentKind::Distance, 8, 50, 3000, 77);
        c.k = 2;
        c.workers = Some(workers);
        let r = run(&c).unwrap();
        let mut canonical = r.without_timing();
        canonical.config.workers = None;
        texts.push(serde_json::to_string(&canonical).unwrap());

        c.output = Some(dir.path().join(format!("w{workers}.json")));
        run(&c).unwrap();
    }
    assert_eq!(texts[0], texts[1]);
    let a = std::fs::read_to_string(dir.path().join("w1.json.trials.jsonl")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("w4.json.trials.jsonl")).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 3000);
    let first: TrialRecord = serde_json::from_str(a.lines().next().unwrap()).unwrap();
    assert!(matches!(first, TrialRecord::Distance { trial: 0, .. }));
}

#[test]
fn config_file_round_trip() {
    let mut c = config(ExperimentKind::Depth, 0, 0, 5, 9);
    c.t = None;
    c.c = Some(0.5);
    c.n_values = Some(vec![16, 32]);
    let text = serde_json::to_string(&c).unwrap();
    assert_eq!(ExperimentConfig::from_json(&text).unwrap(), c);
    let r = run(&c).unwrap();
    assert!(r.passed(), "{:?}", r.checks);
    assert_eq!(r.records.len(), 10);
    assert!(r.rng_algorithm.starts_with("chacha20"));
}

#[test]
fn zero_trials_rejected() {
    let c = config(ExperimentKind::Depth, 16, 10, 0, 0);
    assert!(run(&c).is_err());
}
