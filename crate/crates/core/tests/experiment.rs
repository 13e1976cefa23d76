use std::collections::BTreeSet;

use tgoppa::experiment::{
    read_csv, run_trial, sweep, trial_seed, verify_determinism, write_csv, ParamSet, TrialContext,
    TrialOptions, TrialRecord, CSV_HEADER,
};
use tgoppa::goppa::brute_force_dimension;
use tgoppa::{degenerate_twist, dimension, CodeSpec, Error, Polynomial};

fn small_grid() -> Vec<ParamSet> {
    let mut grid = Vec::new();
    for m in [2u32, 3] {
        let group = (1u64 << m) - 1;
        for t in [2usize, 3, 4] {
            for u in [2u64, group] {
                for b in 0..(1u32 << m) {
                    let p = ParamSet::new(2, m, t, b, u);
                    // b = 0 with u = 2 is the identity map, which has no orbit of size 2
                    if p.validate().is_ok() && !(u == 2 && b == 0) {
                        grid.push(p);
                    }
                }
            }
        }
    }
    grid.truncate(50);
    grid
}

#[test]
fn replay_is_exact() {
    let p = ParamSet::new(2, 4, 3, 10, 3);
    let a = run_trial(p, 99).unwrap();
    let b = run_trial(p, 99).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );

    let ctx = TrialContext::new(p, TrialOptions::default()).unwrap();
    let spec = ctx.code_spec(a.seed).unwrap();
    assert_eq!(spec.g().to_string(), a.g);
    assert_eq!(spec.eta().value(), a.eta);
    assert_eq!(dimension(&spec).unwrap(), a.k);
}

#[test]
fn determinism_report_is_independent_of_thread_count() {
    let p = ParamSet::new(2, 4, 3, 10, 3);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| verify_determinism(p, 16, 5, TrialOptions::default()).unwrap())
    };
    let (one, many) = (run(1), run(4));
    assert_eq!(one.records, many.records);
    assert_eq!(one.report, many.report);
    for (i, r) in one.records.iter().enumerate() {
        assert_eq!(r.seed, trial_seed(5, i as u64));
    }
}

#[test]
fn gf4_quadratic_trials_match_enumeration() {
    let p = ParamSet::new(2, 2, 2, 1, 2);
    let ctx = TrialContext::new(p, TrialOptions::default()).unwrap();
    let det = verify_determinism(p, 20, 12345, TrialOptions::default()).unwrap();
    assert_eq!(det.report.trials, 20);
    assert_eq!(det.report.k_histogram.values().sum::<usize>(), 20);
    for r in &det.records {
        assert_eq!(r.n, 4);
        let spec = ctx.code_spec(r.seed).unwrap();
        assert_eq!(brute_force_dimension(&spec).unwrap(), r.k);
    }
    assert_eq!(det.report.invariant, det.report.k_histogram.len() == 1);
}

#[test]
fn small_grid_sweep_is_consistent_with_enumeration() {
    let grid = small_grid();
    assert_eq!(grid.len(), 50);
    let out = sweep(&grid, 20, 2024, TrialOptions::default()).unwrap();
    assert!(out.failures.is_empty(), "{:?}", out.failures);
    assert_eq!(out.reports.len(), 50);
    assert_eq!(out.f_table.len() + out.counterexamples.len(), 50);
    assert!(out.counterexamples.iter().all(|r| !r.invariant));
    assert_eq!(out.records.len(), 50 * 20);

    for (i, r) in out.records.iter().enumerate() {
        let mt = r.params.m as usize * r.params.t;
        assert!(r.n.saturating_sub(mt) <= r.k && r.k <= r.n);
        if i % 10 == 0 {
            let ctx = TrialContext::new(r.params, TrialOptions::default()).unwrap();
            let spec = ctx.code_spec(r.seed).unwrap();
            assert_eq!(brute_force_dimension(&spec).unwrap(), r.k, "{r:?}");
        }
    }
}

#[test]
fn degenerate_twist_adds_m_minus_one() {
    let p = ParamSet::new(2, 6, 3, 4, 3);
    let ctx = TrialContext::new(p, TrialOptions::default()).unwrap();
    let f = &ctx.field;
    let mut checked = 0;
    for i in 0..10 {
        let spec = ctx.code_spec(trial_seed(1, i)).unwrap();
        let Some(bad) = degenerate_twist(spec.g()) else {
            continue;
        };
        let generic = if spec.eta() == bad {
            f.add(bad, tgoppa::Elem::ONE)
        } else {
            spec.eta()
        };
        let with = |eta| CodeSpec::new(f, spec.support().to_vec(), spec.g().clone(), eta).unwrap();
        let k_generic = dimension(&with(generic)).unwrap();
        let k_bad = dimension(&with(bad)).unwrap();
        assert_eq!(k_generic, spec.n() - 18);
        assert_eq!(k_bad, k_generic + 5);
        checked += 1;
    }
    assert!(checked >= 5);
}

#[test]
fn excluding_the_degenerate_twist_never_samples_it() {
    let p = ParamSet::new(2, 3, 2, 1, 7);
    let opts = TrialOptions {
        exclude_degenerate_eta: true,
        ..TrialOptions::default()
    };
    let det = verify_determinism(p, 40, 3, opts).unwrap();
    assert_eq!(det.report.degenerate_eta_trials, 0);
    assert!(det.report.eta_policy.contains("excluding"));
}

#[test]
fn trial_errors_carry_the_index() {
    let p = ParamSet::new(2, 2, 1, 1, 2);
    let err = verify_determinism(p, 3, 0, TrialOptions::default()).unwrap_err();
    assert!(matches!(err, Error::Trial { index: 0, .. }), "{err}");
}

#[test]
fn thousand_records_round_trip() {
    let p = ParamSet::new(2, 4, 3, 10, 3);
    let det = verify_determinism(p, 1000, 77, TrialOptions::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();

    let csv_path = dir.path().join("records.csv");
    write_csv(&det.records, std::fs::File::create(&csv_path).unwrap()).unwrap();
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(text.lines().count(), 1001);
    let back = read_csv(std::fs::File::open(&csv_path).unwrap()).unwrap();
    assert_eq!(back, det.records);

    let json = serde_json::to_string(&det.records).unwrap();
    let back: Vec<TrialRecord> = serde_json::from_str(&json).unwrap();
    assert_eq!(back, det.records);

    let seeds: BTreeSet<u64> = det.records.iter().map(|r| r.seed).collect();
    assert_eq!(seeds.len(), 1000);
    for r in det.records.iter().take(5) {
        Polynomial::parse(&tgoppa::Field::new(2, 4).unwrap(), &r.g).unwrap();
    }
}
