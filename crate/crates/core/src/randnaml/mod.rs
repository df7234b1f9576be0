//! Naming and counting for anonymous nodes whose number is only approximately known.
//!
//! Each node draws an identifier in `1..=N` and a group in `1..=G`. Groups
//! run the deterministic naming protocol one after another. The node that
//! takes a group's last label announces it, so the next group can start
//! numbering where the previous one stopped.

mod approx;
mod node;
mod schedule;

pub use approx::{approximate_size, ApproxMode, Approximation, MIN_UPPER_BOUND};
pub use node::RandNamlNode;
pub use schedule::{group_count, Schedule};

use rand::Rng;

use crate::codeword::NodeIdentity;
use crate::engine::{self, RunOptions, RunReport};
use crate::error::SimError;
use crate::naming::detnaml::check_id;
use crate::rng::{node_rng, stream_rng, RUN_STREAM};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandNamlConfig {
    /// True network size.
    pub n: u64,
    pub seed: u64,
    pub mode: ApproxMode,
    /// Override for the random `(identifier, group)` draws, one per node.
    pub assignment: Option<Vec<(u128, u64)>>,
}

impl RandNamlConfig {
    pub fn new(n: u64, seed: u64) -> Self {
        Self {
            n,
            seed,
            mode: ApproxMode::Exact,
            assignment: None,
        }
    }

    pub fn with_mode(mut self, mode: ApproxMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_assignment(mut self, assignment: Vec<(u128, u64)>) -> Self {
        self.n = assignment.len() as u64;
        self.assignment = Some(assignment);
        self
    }
}

#[derive(Debug)]
pub struct RandNamlReport {
    pub approximation: Approximation,
    pub schedule: Schedule,
    pub identities: Vec<NodeIdentity>,
    pub run: RunReport<RandNamlNode>,
}

impl RandNamlReport {
    pub fn is_failure_free(&self) -> bool {
        self.run.is_failure_free()
    }

    /// Identifiers grouped by group index; entry `k` holds group `k + 1`.
    pub fn groups(&self) -> Vec<Vec<u128>> {
        let mut groups = vec![Vec::new(); self.schedule.group_count as usize];
        for id in &self.identities {
            groups[(id.group.expect("grouped identity") - 1) as usize].push(id.id);
        }
        groups
    }

    /// Counts learned by each node, for counting runs.
    pub fn counts(&self) -> Vec<Option<u64>> {
        self.run.nodes.iter().map(RandNamlNode::count).collect()
    }
}

/// Resolves `u`, the schedule and every node's identity for `config`.
pub fn plan(
    config: &RandNamlConfig,
) -> Result<(Approximation, Schedule, Vec<NodeIdentity>), SimError> {
    let approximation = approximate_size(
        config.n,
        &mut stream_rng(config.seed, RUN_STREAM),
        config.mode,
    )?;
    let schedule = Schedule::build(&approximation)?;
    let n_bound = approximation.upper_bound;
    let identities = match &config.assignment {
        Some(assignment) => assignment
            .iter()
            .map(|&(id, group)| {
                check_id(id, n_bound)?;
                if group == 0 || group > schedule.group_count {
                    return Err(SimError::Invalid(format!(
                        "group {group} outside 1..={}",
                        schedule.group_count
                    )));
                }
                Ok(NodeIdentity::new(id, n_bound)?.with_group(group))
            })
            .collect::<Result<Vec<_>, SimError>>()?,
        None => (0..config.n)
            .map(|i| {
                let mut rng = node_rng(config.seed, i as usize);
                let id = rng.random_range(1..=n_bound);
                let group = rng.random_range(1..=schedule.group_count);
                Ok(NodeIdentity::new(id, n_bound)?.with_group(group))
            })
            .collect::<Result<Vec<_>, SimError>>()?,
    };
    Ok((approximation, schedule, identities))
}

fn execute(
    config: &RandNamlConfig,
    counting: bool,
    opts: RunOptions<'_>,
) -> Result<RandNamlReport, SimError> {
    let (approximation, schedule, identities) = plan(config)?;
    let nodes = identities
        .iter()
        .map(|&id| RandNamlNode::new(id, schedule, counting))
        .collect();
    let horizon = if counting {
        schedule.counting_horizon()
    } else {
        schedule.naming_horizon()
    };
    let run = engine::run(nodes, horizon, opts)?;
    Ok(RandNamlReport {
        approximation,
        schedule,
        identities,
        run,
    })
}

/// Names `config.n` anonymous nodes.
pub fn randnaml_run(
    config: &RandNamlConfig,
    opts: RunOptions<'_>,
) -> Result<RandNamlReport, SimError> {
    execute(config, false, opts)
}

/// Names the nodes, then lets the holder of the highest label announce it.
pub fn counting_run(
    config: &RandNamlConfig,
    opts: RunOptions<'_>,
) -> Result<RandNamlReport, SimError> {
    execute(config, true, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::FailureKind;

    fn sorted_labels(report: &RandNamlReport) -> Vec<u64> {
        let mut l: Vec<u64> = report
            .run
            .labels
            .iter()
            .map(|l| l.expect("labeled"))
            .collect();
        l.sort_unstable();
        l
    }

    #[test]
    fn forced_groups_are_numbered_consecutively() {
        // u = 4: G = 3, N = 64
        let cfg = RandNamlConfig::new(0, 1).with_assignment(vec![(9, 1), (40, 2), (3, 3), (17, 1)]);
        let report = randnaml_run(&cfg, RunOptions::default()).unwrap();
        assert_eq!(report.schedule.group_count, 3);
        assert!(report.is_failure_free(), "{:?}", report.run.failures);
        assert_eq!(report.run.labels, vec![Some(2), Some(3), Some(4), Some(1)]);
        assert_eq!(report.run.total_slots, report.schedule.naming_horizon());
    }

    #[test]
    fn empty_first_group_is_harmless() {
        let cfg = RandNamlConfig::new(0, 1).with_assignment(vec![(9, 2), (40, 2), (3, 3), (17, 3)]);
        let report = counting_run(&cfg, RunOptions::default()).unwrap();
        assert!(report.is_failure_free(), "{:?}", report.run.failures);
        assert_eq!(sorted_labels(&report), vec![1, 2, 3, 4]);
        assert_eq!(report.counts(), vec![Some(4); 4]);
    }

    #[test]
    fn empty_middle_group_is_reported() {
        let cfg = RandNamlConfig::new(0, 1).with_assignment(vec![(9, 1), (40, 1), (3, 3), (17, 3)]);
        let report = randnaml_run(&cfg, RunOptions::default()).unwrap();
        let first = report.run.first_failure().unwrap();
        assert_eq!(first.kind, FailureKind::EmptyGroup { group: 2 });
    }

    #[test]
    fn empty_last_group_breaks_counting() {
        let cfg = RandNamlConfig::new(0, 1).with_assignment(vec![(9, 1), (40, 2), (3, 2), (17, 1)]);
        let naming = randnaml_run(&cfg, RunOptions::default()).unwrap();
        assert!(naming.is_failure_free());
        let counting = counting_run(&cfg, RunOptions::default()).unwrap();
        assert_eq!(
            counting.run.first_failure().unwrap().kind,
            FailureKind::EmptyGroup { group: 3 }
        );
    }

    #[test]
    fn crowded_group_overflows() {
        // n = 30: 24 naming seasons per group
        let cfg =
            RandNamlConfig::new(0, 1).with_assignment((1..=30).map(|id| (id * 7, 1)).collect());
        let report = randnaml_run(&cfg, RunOptions::default()).unwrap();
        assert_eq!(report.schedule.naming_seasons, 24);
        let overflows = report
            .run
            .failures
            .iter()
            .filter(|f| f.kind == FailureKind::GroupOverflow { group: 1 })
            .count();
        assert_eq!(overflows, 6);
    }

    #[test]
    fn shared_identifier_in_a_group_duplicates() {
        let cfg = RandNamlConfig::new(0, 1).with_assignment(vec![(9, 1), (9, 1), (3, 2), (17, 3)]);
        let report = randnaml_run(&cfg, RunOptions::default()).unwrap();
        assert!(matches!(
            report.run.first_failure().unwrap().kind,
            FailureKind::DuplicateLabel { label: 1, .. }
        ));
    }

    #[test]
    fn random_runs_produce_a_permutation_when_clean() {
        let mut clean = 0;
        for seed in 0..20 {
            let report =
                counting_run(&RandNamlConfig::new(40, seed), RunOptions::default()).unwrap();
            if report.is_failure_free() {
                clean += 1;
                assert_eq!(sorted_labels(&report), (1..=40).collect::<Vec<_>>());
                assert!(report.counts().iter().all(|&c| c == Some(40)));
            }
        }
        assert!(clean > 0);
    }

    #[test]
    fn plan_is_deterministic_per_seed() {
        let cfg = RandNamlConfig::new(25, 7).with_mode(ApproxMode::Jittered);
        let (a1, s1, i1) = plan(&cfg).unwrap();
        let (a2, s2, i2) = plan(&cfg).unwrap();
        assert_eq!((a1, s1, i1), (a2, s2, i2));
        assert!((13..=50).contains(&a1.u));
    }

    #[test]
    fn bad_assignment_is_rejected() {
        let cfg = RandNamlConfig::new(0, 1).with_assignment(vec![(9, 4), (1, 1), (2, 1), (3, 1)]);
        assert!(randnaml_run(&cfg, RunOptions::default()).is_err());
    }

    #[test]
    fn everyone_pays_for_the_approximation() {
        let report = randnaml_run(&RandNamlConfig::new(10, 3), RunOptions::default()).unwrap();
        let charge = report.approximation.charge;
        assert!(report.run.ledger.nodes.iter().all(|e| e.listens >= charge));
    }
}
