//! Per-node state machine of the grouped naming and counting protocol.

use super::schedule::Schedule;
use crate::codeword::NodeIdentity;
use crate::engine::{
    Activity, ChannelOutcome, Charge, NodeEvent, NodeMachine, Slot, Suspicion, TraceView,
};
use crate::naming::{DetNamlDriver, NamingState, SeasonLayout};

/// Accumulates a most-significant-first broadcast heard over a window.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct BitReceiver {
    value: u128,
}

impl BitReceiver {
    fn push(&mut self, heard: Option<ChannelOutcome>) {
        self.value = (self.value << 1) | u128::from(heard.is_some_and(ChannelOutcome::heard_beep));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Approx,
    Receive,
    Naming,
    OverflowCheck,
    Watch,
    Send,
    Count,
    Idle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandNamlNode {
    pub identity: NodeIdentity,
    group: u64,
    schedule: Schedule,
    counting: bool,
    driver: DetNamlDriver,
    /// Cumulative label carried over from the previous group.
    pub label_offset: u64,
    receiver: BitReceiver,
    label: Option<u64>,
    labeled_in: Option<u64>,
    watch_heard_beep: bool,
    /// Set at the end of the watch season: whether this node holds its group's last label.
    pub is_last: Option<bool>,
    overflow_reported: bool,
    count: Option<u64>,
    last_phase: Phase,
    last_slot: Slot,
}

impl RandNamlNode {
    pub fn new(identity: NodeIdentity, schedule: Schedule, counting: bool) -> Self {
        let group = identity.group.expect("grouped identity");
        let layout = SeasonLayout {
            bit_count: identity.codeword.width(),
            season_length: schedule.season_length,
        };
        let driver = DetNamlDriver::new(
            NamingState::new(identity.codeword),
            layout,
            schedule.period_start(group),
            Some(schedule.naming_seasons),
        );
        Self {
            identity,
            group,
            schedule,
            counting,
            driver,
            label_offset: 0,
            receiver: BitReceiver::default(),
            label: None,
            labeled_in: None,
            watch_heard_beep: false,
            is_last: None,
            overflow_reported: false,
            count: None,
            last_phase: Phase::Idle,
            last_slot: 0,
        }
    }

    pub fn group(&self) -> u64 {
        self.group
    }

    /// Network size learned in the counting window.
    pub fn count(&self) -> Option<u64> {
        self.count
    }

    /// Label within the group, before the offset was added.
    pub fn local_label(&self) -> Option<u64> {
        self.driver.state.label
    }

    fn receive_window(&self) -> Option<(Slot, Slot)> {
        (self.group >= 2).then(|| {
            let start = self.schedule.handoff_start(self.group - 1);
            (start, start + self.schedule.handoff_length)
        })
    }

    fn overflow_slot(&self) -> Slot {
        self.schedule
            .season_start(self.group, self.schedule.naming_seasons + 1)
    }

    fn watch_window(&self) -> Option<(Slot, Slot)> {
        self.labeled_in.map(|j| {
            let start = self.schedule.season_start(self.group, j + 1);
            (start, start + self.schedule.season_length)
        })
    }

    fn is_broadcaster(&self) -> bool {
        self.is_last == Some(true) && self.group == self.schedule.group_count
    }

    fn send_window(&self) -> Option<(Slot, Slot)> {
        (self.is_last == Some(true) && self.group < self.schedule.group_count).then(|| {
            let start = self.schedule.handoff_start(self.group);
            (start, start + self.schedule.handoff_length)
        })
    }

    fn count_window(&self) -> Option<(Slot, Slot)> {
        self.counting.then(|| {
            let start = self.schedule.counting_start();
            (start, start + self.schedule.handoff_length)
        })
    }

    fn label_bit(&self, window_start: Slot, slot: Slot) -> bool {
        let width = self.schedule.handoff_length;
        let pos = slot - window_start;
        let label = u128::from(self.label.unwrap_or(0));
        (label >> (width - 1 - pos)) & 1 == 1
    }

    /// Next slot in `[from, end)` carrying a 1-bit of this node's label.
    fn next_one_bit(&self, window: (Slot, Slot), from: Slot) -> Option<Slot> {
        (from.max(window.0)..window.1).find(|&s| self.label_bit(window.0, s))
    }

    fn phase_at(&self, slot: Slot) -> Phase {
        let within = |w: Option<(Slot, Slot)>| w.is_some_and(|(a, b)| a <= slot && slot < b);
        if slot < self.schedule.origin {
            Phase::Approx
        } else if within(self.receive_window()) {
            Phase::Receive
        } else if self.label.is_some() && within(self.watch_window()) {
            Phase::Watch
        } else if self.label.is_none()
            && slot >= self.schedule.period_start(self.group)
            && slot < self.overflow_slot()
        {
            Phase::Naming
        } else if self.label.is_none() && !self.overflow_reported && slot == self.overflow_slot() {
            Phase::OverflowCheck
        } else if within(self.send_window()) {
            Phase::Send
        } else if within(self.count_window()) {
            Phase::Count
        } else {
            Phase::Idle
        }
    }
}

impl NodeMachine for RandNamlNode {
    fn next_wake(&self, from: Slot) -> Option<Slot> {
        if from < self.schedule.origin {
            return Some(from);
        }
        if let Some((start, end)) = self.receive_window() {
            if from < end {
                return Some(from.max(start));
            }
        }
        if self.label.is_none() {
            if let Some(s) = self.driver.next_wake(from) {
                return Some(s);
            }
            let overflow = self.overflow_slot();
            if !self.overflow_reported && from <= overflow {
                return Some(overflow);
            }
        } else {
            if let Some((start, end)) = self.watch_window() {
                if from < end {
                    return Some(from.max(start));
                }
            }
            if let Some(w) = self.send_window() {
                if let Some(s) = self.next_one_bit(w, from) {
                    return Some(s);
                }
            }
        }
        let (start, end) = self.count_window()?;
        if self.is_broadcaster() {
            self.next_one_bit((start, end), from)
        } else if from < end {
            Some(from.max(start))
        } else {
            None
        }
    }

    fn act(&mut self, slot: Slot) -> Activity {
        let phase = self.phase_at(slot);
        self.last_phase = phase;
        self.last_slot = slot;
        match phase {
            Phase::Approx | Phase::Receive | Phase::Watch => Activity::listen(Charge::Other),
            Phase::Naming => self.driver.act(slot),
            Phase::Send => {
                let (start, _) = self.send_window().expect("send phase");
                if self.label_bit(start, slot) {
                    Activity::beep(Charge::Other)
                } else {
                    Activity::SLEEP
                }
            }
            Phase::Count if self.is_broadcaster() => {
                let (start, _) = self.count_window().expect("count phase");
                if self.label_bit(start, slot) {
                    Activity::beep(Charge::Other)
                } else {
                    Activity::SLEEP
                }
            }
            Phase::Count => Activity::listen(Charge::Other),
            Phase::OverflowCheck | Phase::Idle => Activity::SLEEP,
        }
    }

    fn settle(&mut self, slot: Slot, heard: Option<ChannelOutcome>) -> Option<NodeEvent> {
        match self.last_phase {
            Phase::Receive => {
                self.receiver.push(heard);
                let (_, end) = self.receive_window().expect("receive phase");
                if slot + 1 == end {
                    self.label_offset = self.receiver.value as u64;
                    self.receiver = BitReceiver::default();
                    if self.label_offset == 0 {
                        return Some(NodeEvent::Suspect(Suspicion::SilentBroadcast {
                            group: self.group - 1,
                        }));
                    }
                }
                None
            }
            Phase::Naming => {
                let local = self.driver.settle(slot, heard)?;
                let label = local + self.label_offset;
                self.label = Some(label);
                self.labeled_in = Some(local);
                Some(NodeEvent::Labeled(label))
            }
            Phase::OverflowCheck => {
                self.overflow_reported = true;
                Some(NodeEvent::Suspect(Suspicion::GroupOverflow {
                    group: self.group,
                }))
            }
            Phase::Watch => {
                self.watch_heard_beep |= heard.is_some_and(ChannelOutcome::heard_beep);
                let (_, end) = self.watch_window().expect("watch phase");
                if slot + 1 == end {
                    self.is_last = Some(!self.watch_heard_beep);
                    if self.counting && self.is_broadcaster() {
                        self.count = self.label;
                    }
                }
                None
            }
            Phase::Count if !self.is_broadcaster() => {
                self.receiver.push(heard);
                let (_, end) = self.count_window().expect("count phase");
                if slot + 1 == end {
                    let count = self.receiver.value as u64;
                    self.count = Some(count);
                    if count == 0 {
                        return Some(NodeEvent::Suspect(Suspicion::SilentBroadcast {
                            group: self.schedule.group_count,
                        }));
                    }
                }
                None
            }
            Phase::Approx | Phase::Send | Phase::Count | Phase::Idle => None,
        }
    }

    fn label(&self) -> Option<u64> {
        self.label
    }

    fn trace_view(&self) -> TraceView {
        let period = self.schedule.period_of(self.last_slot);
        match self.last_phase {
            Phase::Naming => TraceView {
                season: self.driver.current_season(),
                period: Some(self.group),
                label: self.label,
                ..self.driver.trace_view()
            },
            Phase::Watch => TraceView {
                season: self.labeled_in.map(|j| j + 1),
                period: Some(self.group),
                label: self.label,
                ..TraceView::default()
            },
            _ => TraceView {
                period,
                label: self.label,
                ..TraceView::default()
            },
        }
    }
}
