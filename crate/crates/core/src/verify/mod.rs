//! Independent oracles and invariant checks over finished runs and traces.
//!
//! Everything here is a pure function of a report, a ledger or a parsed
//! trace, so checks can be re-run offline on a saved trace file.

mod constants;

pub use constants::{BoundConstants, FROZEN};

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::engine::{EnergyLedger, Slot, TraceEvent};
use crate::naming::SeasonLayout;
use crate::randnaml::RandNamlReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub slot: Option<Slot>,
    pub node: Option<usize>,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    counterexample: Option<Counterexample>,
}

impl CheckReport {
    pub fn pass(name: &'static str) -> Self {
        Self {
            name,
            counterexample: None,
        }
    }

    pub fn fail(name: &'static str, counterexample: Counterexample) -> Self {
        Self {
            name,
            counterexample: Some(counterexample),
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        self.counterexample.as_ref()
    }

    /// Combines several reports under one name, keeping the first counterexample.
    pub fn all(name: &'static str, reports: impl IntoIterator<Item = CheckReport>) -> Self {
        reports
            .into_iter()
            .find_map(|r| r.counterexample)
            .map_or_else(|| Self::pass(name), |c| Self::fail(name, c))
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "{}: pass", self.name),
            Some(c) => {
                write!(f, "{}: FAIL", self.name)?;
                if let Some(slot) = c.slot {
                    write!(f, " at slot {slot}")?;
                }
                if let Some(node) = c.node {
                    write!(f, " node {node}")?;
                }
                write!(f, ": expected {}, got {}", c.expected, c.actual)
            }
        }
    }
}

/// A group holding the same identifier twice cannot be labeled correctly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unverifiable {
    /// 0-based index into the input groups.
    pub group: usize,
    pub id: u128,
}

impl fmt::Display for Unverifiable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "identifier {} appears twice in group {}",
            self.id,
            self.group + 1
        )
    }
}

impl std::error::Error for Unverifiable {}

/// Expected labels, aligned with `groups`: inside group `k` the `j`-th
/// largest identifier gets the sizes of groups `0..k` plus `j`.
pub fn oracle_labels(groups: &[Vec<u128>]) -> Result<Vec<Vec<u64>>, Unverifiable> {
    let mut offset = 0u64;
    let mut out = Vec::with_capacity(groups.len());
    for (k, ids) in groups.iter().enumerate() {
        let mut order: Vec<usize> = (0..ids.len()).collect();
        order.sort_by(|&a, &b| ids[b].cmp(&ids[a]));
        if let Some(w) = order.windows(2).find(|w| ids[w[0]] == ids[w[1]]) {
            return Err(Unverifiable {
                group: k,
                id: ids[w[0]],
            });
        }
        let mut labels = vec![0; ids.len()];
        for (rank, &i) in order.iter().enumerate() {
            labels[i] = offset + rank as u64 + 1;
        }
        offset += ids.len() as u64;
        out.push(labels);
    }
    Ok(out)
}

/// Compares per-node labels against expectations node by node.
pub fn check_labels(name: &'static str, expected: &[u64], actual: &[Option<u64>]) -> CheckReport {
    if expected.len() != actual.len() {
        return CheckReport::fail(
            name,
            Counterexample {
                slot: None,
                node: None,
                expected: format!("{} labels", expected.len()),
                actual: format!("{} labels", actual.len()),
            },
        );
    }
    for (node, (&e, &a)) in expected.iter().zip(actual).enumerate() {
        if a != Some(e) {
            return CheckReport::fail(
                name,
                Counterexample {
                    slot: None,
                    node: Some(node),
                    expected: e.to_string(),
                    actual: a.map_or_else(|| "no label".into(), |l| l.to_string()),
                },
            );
        }
    }
    CheckReport::pass(name)
}

/// Labels of a grouped run against [`oracle_labels`] with group offsets.
pub fn check_randnaml_labels(report: &RandNamlReport) -> CheckReport {
    const NAME: &str = "grouped labels match oracle";
    let groups = report.groups();
    let oracle = match oracle_labels(&groups) {
        Ok(o) => o,
        Err(e) => {
            return CheckReport::fail(
                NAME,
                Counterexample {
                    slot: None,
                    node: None,
                    expected: "distinct identifiers per group".into(),
                    actual: e.to_string(),
                },
            )
        }
    };
    let mut cursor = vec![0usize; groups.len()];
    let expected: Vec<u64> = report
        .identities
        .iter()
        .map(|id| {
            let g = (id.group.expect("grouped identity") - 1) as usize;
            cursor[g] += 1;
            oracle[g][cursor[g] - 1]
        })
        .collect();
    check_labels(NAME, &expected, &report.run.labels)
}

/// Labels form a permutation of `1..=n`.
pub fn check_permutation(labels: &[Option<u64>]) -> CheckReport {
    const NAME: &str = "labels are a permutation";
    let n = labels.len() as u64;
    let mut seen = HashSet::with_capacity(labels.len());
    for (node, l) in labels.iter().enumerate() {
        let ok = matches!(l, Some(v) if (1..=n).contains(v) && seen.insert(*v));
        if !ok {
            return CheckReport::fail(
                NAME,
                Counterexample {
                    slot: None,
                    node: Some(node),
                    expected: format!("unused label in 1..={n}"),
                    actual: format!("{l:?}"),
                },
            );
        }
    }
    CheckReport::pass(NAME)
}

/// Every node learned `n`.
pub fn check_counts(n: u64, counts: &[Option<u64>]) -> CheckReport {
    const NAME: &str = "every node knows n";
    match counts.iter().position(|&c| c != Some(n)) {
        None => CheckReport::pass(NAME),
        Some(node) => CheckReport::fail(
            NAME,
            Counterexample {
                slot: None,
                node: Some(node),
                expected: n.to_string(),
                actual: format!("{:?}", counts[node]),
            },
        ),
    }
}

/// Every season in which an unlabeled node was awake ends with exactly one new label.
///
/// Meant for traces of the deterministic protocol, where labeled nodes sleep.
pub fn check_one_label_per_season(trace: &[TraceEvent]) -> CheckReport {
    const NAME: &str = "one label per season";
    // last slot, participants, newly labeled (slot, node) in order
    type SeasonSeen = (Slot, HashSet<usize>, Vec<(Slot, usize)>);
    let mut seasons: BTreeMap<u64, SeasonSeen> = BTreeMap::new();
    let mut labeled_at: HashMap<usize, u64> = HashMap::new();
    for ev in trace {
        let Some(season) = ev.season else { continue };
        if labeled_at.get(&ev.node).is_some_and(|&s| s < season) {
            continue;
        }
        let entry = seasons.entry(season).or_default();
        entry.0 = entry.0.max(ev.slot);
        entry.1.insert(ev.node);
        if ev.label.is_some() && !labeled_at.contains_key(&ev.node) {
            labeled_at.insert(ev.node, season);
            entry.2.push((ev.slot, ev.node));
        }
    }
    for (season, (last, participants, labeled)) in &seasons {
        if !participants.is_empty() && labeled.len() != 1 {
            let (slot, node) = labeled.get(1).map_or((*last, None), |&(s, n)| (s, Some(n)));
            return CheckReport::fail(
                NAME,
                Counterexample {
                    slot: Some(slot),
                    node,
                    expected: format!("1 new label in season {season}"),
                    actual: labeled.len().to_string(),
                },
            );
        }
    }
    CheckReport::pass(NAME)
}

/// `awake = wStl + wStn + wOther` for every node, and `max_awake` is the true maximum.
pub fn check_energy_identity(ledger: &EnergyLedger) -> CheckReport {
    const NAME: &str = "energy identity";
    for (node, e) in ledger.nodes.iter().enumerate() {
        let parts = e.w_stl + e.w_stn + e.w_other;
        if parts != e.awake() {
            return CheckReport::fail(
                NAME,
                Counterexample {
                    slot: None,
                    node: Some(node),
                    expected: format!("awake {}", e.awake()),
                    actual: format!("wStl + wStn + wOther = {parts}"),
                },
            );
        }
    }
    let true_max = ledger.nodes.iter().map(|e| e.awake()).max().unwrap_or(0);
    if true_max != ledger.max_awake {
        return CheckReport::fail(
            NAME,
            Counterexample {
                slot: None,
                node: None,
                expected: format!("max awake {true_max}"),
                actual: ledger.max_awake.to_string(),
            },
        );
    }
    CheckReport::pass(NAME)
}

/// What a bound check is measured against.
#[derive(Debug, Clone, Copy)]
pub enum BoundInput<'a> {
    Detnaml {
        m: u64,
        upper_bound: u128,
        ledger: &'a EnergyLedger,
    },
    Randnaml {
        n: u64,
        ledger: &'a EnergyLedger,
    },
}

/// `M + ⌈log2 N⌉ + 1`, the comparison curve of the energy sweep.
pub fn energy_curve(m: u64, upper_bound: u128) -> u64 {
    m + u64::from(crate::codeword::ceil_log2(upper_bound)) + 1
}

/// `(maxAwake / (log2 n)², totalSlots / (n log2 n))`; `None` for `n < 2`.
pub fn randnaml_ratios(n: u64, ledger: &EnergyLedger) -> Option<(f64, f64)> {
    (n >= 2).then(|| {
        let lg = (n as f64).log2();
        (
            ledger.max_awake as f64 / (lg * lg),
            ledger.total_slots as f64 / (n as f64 * lg),
        )
    })
}

pub fn check_bounds(input: BoundInput<'_>, constants: &BoundConstants) -> CheckReport {
    const NAME: &str = "bounds";
    let fail = |expected: String, actual: String| {
        CheckReport::fail(
            NAME,
            Counterexample {
                slot: None,
                node: None,
                expected,
                actual,
            },
        )
    };
    match input {
        BoundInput::Detnaml {
            m,
            upper_bound,
            ledger,
        } => {
            let Ok(layout) = SeasonLayout::for_upper_bound(upper_bound) else {
                return fail("N ≥ 2".into(), upper_bound.to_string());
            };
            let exact = m * layout.season_length;
            if ledger.total_slots != exact {
                return fail(
                    format!("total slots {exact}"),
                    ledger.total_slots.to_string(),
                );
            }
            let lg = f64::from(crate::codeword::ceil_log2(upper_bound));
            let limit = energy_curve(m, upper_bound) as f64 + constants.c_other * lg;
            if ledger.max_awake as f64 > limit {
                return fail(
                    format!("max awake ≤ {limit:.1}"),
                    ledger.max_awake.to_string(),
                );
            }
            CheckReport::pass(NAME)
        }
        BoundInput::Randnaml { n, ledger } => {
            let Some((energy, time)) = randnaml_ratios(n, ledger) else {
                return CheckReport::pass(NAME);
            };
            if energy > constants.c_energy {
                return fail(
                    format!("max awake / log² n ≤ {}", constants.c_energy),
                    format!("{energy:.3}"),
                );
            }
            if time > constants.c_time {
                return fail(
                    format!("total slots / (n log n) ≤ {}", constants.c_time),
                    format!("{time:.3}"),
                );
            }
            CheckReport::pass(NAME)
        }
    }
}
