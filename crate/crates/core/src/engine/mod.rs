//! Synchronous slot loop for single-hop beeping networks.
//!
//! Protocols plug in as per-node state machines. The engine only visits a
//! node at the slots the node announces through [`NodeMachine::next_wake`],
//! so long stretches where everyone sleeps cost nothing to simulate while
//! the global clock still advances over them.

pub mod channel;
pub mod ledger;
pub mod trace;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::io;

pub use channel::{resolve_channel, ChannelOutcome, SlotAction};
pub use ledger::{Charge, EnergyLedger, NodeEnergy};
pub use trace::{read_trace, TraceEvent, TraceSink, TraceView, TraceWriter};

/// Absolute slot index on the global clock.
pub type Slot = u64;

/// Action chosen for one slot together with the ledger bucket it is charged to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Activity {
    pub action: SlotAction,
    pub charge: Charge,
}

impl Activity {
    pub const SLEEP: Activity = Activity {
        action: SlotAction::Sleep,
        charge: Charge::Other,
    };

    pub fn beep(charge: Charge) -> Self {
        Self {
            action: SlotAction::Beep,
            charge,
        }
    }

    pub fn listen(charge: Charge) -> Self {
        Self {
            action: SlotAction::Listen,
            charge,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FailureKind {
    /// Two nodes ended up with the same label (colliding identifiers).
    DuplicateLabel { label: u64, other_node: usize },
    /// A group still had unlabeled members when its period ran out.
    GroupOverflow { group: u64 },
    /// A handoff or counting window stayed silent after labels had been assigned.
    EmptyGroup { group: u64 },
}

impl FailureKind {
    pub fn name(&self) -> &'static str {
        match self {
            FailureKind::DuplicateLabel { .. } => "duplicate label",
            FailureKind::GroupOverflow { .. } => "group overflow",
            FailureKind::EmptyGroup { .. } => "empty group",
        }
    }
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureKind::DuplicateLabel { label, other_node } => {
                write!(
                    f,
                    "duplicate label {label} (also held by node {other_node})"
                )
            }
            FailureKind::GroupOverflow { group } => write!(f, "group overflow in group {group}"),
            FailureKind::EmptyGroup { group } => write!(f, "empty group {group}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Failure {
    pub slot: Slot,
    pub node: usize,
    pub kind: FailureKind,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "slot {} node {}: {}", self.slot, self.node, self.kind)
    }
}

/// Something a node reports while settling a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeEvent {
    Labeled(u64),
    /// A node-local observation of a protocol failure. The engine turns it
    /// into a [`Failure`] when the run-level context confirms it.
    Suspect(Suspicion),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suspicion {
    GroupOverflow {
        group: u64,
    },
    /// The node heard an all-silent label broadcast from `group`.
    SilentBroadcast {
        group: u64,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum FailurePolicy {
    Halt,
    #[default]
    RecordAndContinue,
}

/// A protocol participant.
pub trait NodeMachine {
    /// Earliest slot `≥ from` at which the node might be awake, or `None` if
    /// it never wakes again. Returning a slot where the node then sleeps is
    /// allowed.
    fn next_wake(&self, from: Slot) -> Option<Slot>;

    /// Chooses the node's action for `slot`.
    fn act(&mut self, slot: Slot) -> Activity;

    /// Called after the slot resolves, for every node that was asked to act.
    /// `heard` is `Some` only if the node listened.
    fn settle(&mut self, slot: Slot, heard: Option<ChannelOutcome>) -> Option<NodeEvent>;

    fn label(&self) -> Option<u64>;

    fn trace_view(&self) -> TraceView {
        TraceView::default()
    }
}

pub struct RunOptions<'a> {
    pub policy: FailurePolicy,
    pub trace: Option<&'a mut dyn TraceSink>,
}

impl Default for RunOptions<'_> {
    fn default() -> Self {
        Self {
            policy: FailurePolicy::RecordAndContinue,
            trace: None,
        }
    }
}

impl<'a> RunOptions<'a> {
    pub fn with_trace(trace: &'a mut dyn TraceSink) -> Self {
        Self {
            policy: FailurePolicy::RecordAndContinue,
            trace: Some(trace),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunReport<M> {
    pub total_slots: Slot,
    pub labels: Vec<Option<u64>>,
    pub ledger: EnergyLedger,
    pub failures: Vec<Failure>,
    /// Slot at which a [`FailurePolicy::Halt`] run stopped.
    pub halted_at: Option<Slot>,
    pub nodes: Vec<M>,
}

impl<M> RunReport<M> {
    pub fn is_failure_free(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }

    /// Distinct failure names in order of first appearance.
    pub fn failure_names(&self) -> Vec<&'static str> {
        let mut names: Vec<&'static str> = Vec::new();
        for f in &self.failures {
            if !names.contains(&f.kind.name()) {
                names.push(f.kind.name());
            }
        }
        names
    }

    /// Stable textual rendering of everything except the node states, used
    /// to compare replays byte for byte.
    pub fn fingerprint(&self) -> String {
        format!(
            "{}|{:?}|{:?}|{:?}|{:?}",
            self.total_slots, self.labels, self.ledger, self.failures, self.halted_at
        )
    }
}

/// Runs `nodes` from slot 0 until `horizon` (exclusive).
pub fn run<M: NodeMachine>(
    mut nodes: Vec<M>,
    horizon: Slot,
    mut opts: RunOptions<'_>,
) -> io::Result<RunReport<M>> {
    let mut ledger = EnergyLedger::new(nodes.len());
    let mut failures = Vec::new();
    let mut label_owner: HashMap<u64, usize> = HashMap::new();
    let mut halted_at = None;

    let mut queue: BinaryHeap<Reverse<(Slot, usize)>> = nodes
        .iter()
        .enumerate()
        .filter_map(|(i, n)| n.next_wake(0).map(|s| Reverse((s, i))))
        .collect();

    let mut batch: Vec<(usize, SlotAction)> = Vec::new();
    let mut charges: Vec<Charge> = Vec::new();

    while let Some(&Reverse((slot, _))) = queue.peek() {
        if slot >= horizon {
            break;
        }
        batch.clear();
        charges.clear();
        while let Some(&Reverse((s, node))) = queue.peek() {
            if s != slot {
                break;
            }
            queue.pop();
            let activity = nodes[node].act(slot);
            batch.push((node, activity.action));
            charges.push(activity.charge);
        }

        let busy = batch.iter().any(|(_, a)| *a == SlotAction::Beep);
        let outcome = if busy {
            ChannelOutcome::BeepHeard
        } else {
            ChannelOutcome::Silence
        };

        for (k, &(node, action)) in batch.iter().enumerate() {
            let heard = (action == SlotAction::Listen).then_some(outcome);
            ledger.record(node, action, charges[k]);
            let event = nodes[node].settle(slot, heard);
            match event {
                Some(NodeEvent::Labeled(label)) => {
                    if let Some(&other) = label_owner.get(&label) {
                        failures.push(Failure {
                            slot,
                            node,
                            kind: FailureKind::DuplicateLabel {
                                label,
                                other_node: other,
                            },
                        });
                    } else {
                        label_owner.insert(label, node);
                    }
                }
                Some(NodeEvent::Suspect(Suspicion::GroupOverflow { group })) => {
                    failures.push(Failure {
                        slot,
                        node,
                        kind: FailureKind::GroupOverflow { group },
                    });
                }
                // Silence is the correct offset only while nobody holds a label yet.
                Some(NodeEvent::Suspect(Suspicion::SilentBroadcast { group }))
                    if !label_owner.is_empty() =>
                {
                    failures.push(Failure {
                        slot,
                        node,
                        kind: FailureKind::EmptyGroup { group },
                    });
                }
                Some(NodeEvent::Suspect(Suspicion::SilentBroadcast { .. })) => {}
                None => {}
            }
            if action.is_awake() {
                if let Some(sink) = opts.trace.as_deref_mut() {
                    sink.record(TraceEvent::new(
                        slot,
                        node,
                        action,
                        heard,
                        nodes[node].trace_view(),
                    ))?;
                }
            }
            if let Some(next) = nodes[node].next_wake(slot + 1) {
                debug_assert!(next > slot);
                queue.push(Reverse((next, node)));
            }
        }

        if opts.policy == FailurePolicy::Halt && !failures.is_empty() {
            halted_at = Some(slot);
            break;
        }
    }

    if let Some(sink) = opts.trace.as_deref_mut() {
        sink.finish()?;
    }
    let total_slots = halted_at.map_or(horizon, |s| s + 1);
    ledger.total_slots = total_slots;
    let labels = nodes.iter().map(NodeMachine::label).collect();
    Ok(RunReport {
        total_slots,
        labels,
        ledger,
        failures,
        halted_at,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Beeps or listens on a fixed script, then stays asleep.
    struct Scripted {
        script: Vec<SlotAction>,
        heard: Vec<Option<ChannelOutcome>>,
        label_at: Option<(Slot, u64)>,
        label: Option<u64>,
    }

    impl Scripted {
        fn new(script: Vec<SlotAction>) -> Self {
            Self {
                script,
                heard: Vec::new(),
                label_at: None,
                label: None,
            }
        }
    }

    impl NodeMachine for Scripted {
        fn next_wake(&self, from: Slot) -> Option<Slot> {
            (from as usize..self.script.len())
                .find(|&s| {
                    self.script[s].is_awake() || self.label_at.is_some_and(|(l, _)| l == s as u64)
                })
                .map(|s| s as Slot)
        }
        fn act(&mut self, slot: Slot) -> Activity {
            Activity {
                action: self.script[slot as usize],
                charge: Charge::Other,
            }
        }
        fn settle(&mut self, slot: Slot, heard: Option<ChannelOutcome>) -> Option<NodeEvent> {
            self.heard.push(heard);
            match self.label_at {
                Some((s, l)) if s == slot => {
                    self.label = Some(l);
                    Some(NodeEvent::Labeled(l))
                }
                _ => None,
            }
        }
        fn label(&self) -> Option<u64> {
            self.label
        }
    }

    use SlotAction::*;

    #[test]
    fn delivers_outcomes_only_to_listeners_and_meters_energy() {
        let nodes = vec![
            Scripted::new(vec![Beep, Listen, Sleep]),
            Scripted::new(vec![Listen, Listen, Beep]),
            Scripted::new(vec![Sleep, Sleep, Listen]),
        ];
        let report = run(nodes, 5, RunOptions::default()).unwrap();
        assert_eq!(report.total_slots, 5);
        assert_eq!(
            report.nodes[0].heard,
            vec![None, Some(ChannelOutcome::Silence)]
        );
        assert_eq!(
            report.nodes[1].heard,
            vec![
                Some(ChannelOutcome::BeepHeard),
                Some(ChannelOutcome::Silence),
                None
            ]
        );
        assert_eq!(report.nodes[2].heard, vec![Some(ChannelOutcome::BeepHeard)]);
        for e in &report.ledger.nodes {
            assert_eq!(e.awake(), e.beeps + e.listens);
        }
        assert_eq!(report.ledger.node(1).awake(), 3);
        assert_eq!(report.ledger.max_awake, 3);
    }

    #[test]
    fn duplicate_labels_are_reported_and_halt_stops_early() {
        let mk = || {
            let mut s = Scripted::new(vec![Listen, Listen, Listen, Listen]);
            s.label_at = Some((1, 7));
            s
        };
        let report = run(vec![mk(), mk()], 4, RunOptions::default()).unwrap();
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].slot, 1);
        assert_eq!(report.failure_names(), vec!["duplicate label"]);
        assert_eq!(report.ledger.node(0).awake(), 4);

        let opts = RunOptions {
            policy: FailurePolicy::Halt,
            trace: None,
        };
        let report = run(vec![mk(), mk()], 4, opts).unwrap();
        assert_eq!(report.halted_at, Some(1));
        assert_eq!(report.total_slots, 2);
        assert_eq!(report.ledger.node(0).awake(), 2);
    }

    #[test]
    fn trace_events_are_strictly_increasing_per_node() {
        let nodes = vec![
            Scripted::new(vec![Beep, Sleep, Listen, Beep]),
            Scripted::new(vec![Listen, Listen, Sleep, Listen]),
        ];
        let mut events: Vec<TraceEvent> = Vec::new();
        run(nodes, 4, RunOptions::with_trace(&mut events)).unwrap();
        assert_eq!(events.len(), 6);
        for node in 0..2 {
            let slots: Vec<u64> = events
                .iter()
                .filter(|e| e.node == node)
                .map(|e| e.slot)
                .collect();
            assert!(slots.windows(2).all(|w| w[0] < w[1]));
        }
        assert!(events.iter().all(|e| e.action != Sleep));
    }

    #[test]
    fn empty_run_is_all_sleep() {
        let report = run(Vec::<Scripted>::new(), 10, RunOptions::default()).unwrap();
        assert_eq!(report.total_slots, 10);
        assert_eq!(report.ledger.max_awake, 0);
    }
}
