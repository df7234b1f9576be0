use beepnet::engine::{RunOptions, TraceEvent};
use beepnet::randnaml::{counting_run, randnaml_run, RandNamlConfig};
use beepnet::verify;

#[test]
fn pair_group_watch_season() {
    // two nodes: u = 2, N = 16, two groups
    let cfg = RandNamlConfig::new(0, 0).with_assignment(vec![(9, 1), (4, 1)]);
    let report = randnaml_run(&cfg, RunOptions::default()).unwrap();
    assert_eq!(report.approximation.upper_bound, 16);
    assert_eq!(report.run.labels, vec![Some(1), Some(2)]);
    let last: Vec<Option<bool>> = report.run.nodes.iter().map(|n| n.is_last).collect();
    assert_eq!(last, vec![Some(false), Some(true)]);
}

#[test]
fn lone_member_knows_it_is_last() {
    let cfg = RandNamlConfig::new(0, 0).with_assignment(vec![(3, 2), (11, 1)]);
    let report = randnaml_run(&cfg, RunOptions::default()).unwrap();
    assert!(report.is_failure_free());
    assert_eq!(report.run.labels, vec![Some(2), Some(1)]);
    assert!(report.run.nodes.iter().all(|n| n.is_last == Some(true)));
    assert_eq!(report.run.nodes[0].label_offset, 1);
}

#[test]
fn full_capacity_group_does_not_overflow() {
    // 21 nodes: N = 42², ⌊2 log2 N⌋ = 21
    let k = 21u128;
    let n_bound = (2 * k) * (2 * k);
    assert_eq!((2.0 * (n_bound as f64).log2()).floor() as u128, k);
    let cfg = RandNamlConfig::new(0, 0).with_assignment((1..=k).map(|i| (i * 80, 1)).collect());
    let report = randnaml_run(&cfg, RunOptions::default()).unwrap();
    assert!(report.is_failure_free(), "{:?}", report.run.failures);
    assert!(verify::check_permutation(&report.run.labels).passed());
}

#[test]
fn nodes_stay_inside_their_windows() {
    let mut trace: Vec<TraceEvent> = Vec::new();
    let report = counting_run(
        &RandNamlConfig::new(64, 2),
        RunOptions::with_trace(&mut trace),
    )
    .unwrap();
    let s = report.schedule;
    for ev in &trace {
        let g = report.identities[ev.node].group.unwrap();
        let own = ev.slot >= s.period_start(g) && ev.slot < s.period_start(g) + s.period_length;
        let receiving = g >= 2 && ev.slot >= s.handoff_start(g - 1) && ev.slot < s.period_start(g);
        let approx = ev.slot < s.origin;
        let counting = ev.slot >= s.counting_start() && ev.slot < s.counting_horizon();
        assert!(own || receiving || approx || counting, "{ev}");
    }
}

#[test]
fn counting_costs_at_most_one_broadcast_window() {
    let n = 4096;
    let seed = (0..)
        .find(|&s| {
            counting_run(&RandNamlConfig::new(n, s), RunOptions::default())
                .unwrap()
                .is_failure_free()
        })
        .unwrap();
    let cfg = RandNamlConfig::new(n, seed);
    let naming = randnaml_run(&cfg, RunOptions::default()).unwrap();
    let counting = counting_run(&cfg, RunOptions::default()).unwrap();
    assert_eq!(naming.run.labels, counting.run.labels);
    assert!(verify::check_counts(n, &counting.counts()).passed());
    let h = counting.schedule.handoff_length;
    assert!(counting.run.ledger.max_awake <= naming.run.ledger.max_awake + h);
    assert_eq!(counting.run.total_slots, naming.run.total_slots + h);
}

#[test]
fn same_seed_same_run() {
    let cfg = RandNamlConfig::new(300, 11);
    let a = randnaml_run(&cfg, RunOptions::default()).unwrap();
    let b = randnaml_run(&cfg, RunOptions::default()).unwrap();
    assert_eq!(a.run.fingerprint(), b.run.fingerprint());
    let c = randnaml_run(&RandNamlConfig::new(300, 12), RunOptions::default()).unwrap();
    assert_ne!(a.run.fingerprint(), c.run.fingerprint());
}

#[test]
fn total_time_matches_schedule() {
    let report = randnaml_run(&RandNamlConfig::new(1000, 4), RunOptions::default()).unwrap();
    let s = report.schedule;
    assert_eq!(
        report.run.total_slots,
        report.approximation.charge + s.group_count * s.period_length
    );
}
