//! The energy-efficient deterministic naming protocol.

use super::state::{test, test_actions, NamingState, SeasonLayout, Status};
use crate::codeword::{cid_width, encode_cid, Codeword};
use crate::engine::{
    self, Activity, ChannelOutcome, Charge, NodeEvent, NodeMachine, RunOptions, RunReport, Slot,
    TraceView,
};
use crate::error::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct PendingTest {
    pair: u32,
    charge: Charge,
    heard: Option<ChannelOutcome>,
}

/// Runs one node's naming seasons inside a window of the global clock that
/// starts at `origin` and spans `seasons` seasons (unbounded if `None`).
///
/// Labels produced here are local: season `j` yields label `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetNamlDriver {
    pub state: NamingState,
    layout: SeasonLayout,
    origin: Slot,
    seasons: Option<u64>,
    pending: Option<PendingTest>,
    last_season: Option<u64>,
}

impl DetNamlDriver {
    pub fn new(
        state: NamingState,
        layout: SeasonLayout,
        origin: Slot,
        seasons: Option<u64>,
    ) -> Self {
        Self {
            state,
            layout,
            origin,
            seasons,
            pending: None,
            last_season: None,
        }
    }

    pub fn layout(&self) -> SeasonLayout {
        self.layout
    }

    /// First slot after the window, if bounded.
    pub fn end(&self) -> Option<Slot> {
        self.seasons
            .map(|s| self.origin + s * self.layout.season_length)
    }

    /// `(season, in-season position)` of an absolute slot inside the window.
    fn locate(&self, slot: Slot) -> (u64, u64) {
        let rel = slot - self.origin;
        (
            rel / self.layout.season_length + 1,
            rel % self.layout.season_length,
        )
    }

    fn slot_of(&self, season: u64, pair: u32) -> Slot {
        self.origin + (season - 1) * self.layout.season_length + 2 * u64::from(pair)
    }

    fn in_window(&self, season: u64) -> bool {
        self.seasons.is_none_or(|s| season <= s)
    }

    /// Season in which the most recently played slot fell.
    pub fn current_season(&self) -> Option<u64> {
        self.last_season
    }

    /// First TEST a `Null` node performs at or after pair `from` of `season`.
    fn null_wake(&self, season: u64, from: u32) -> Option<Slot> {
        let mut season = season;
        let mut from = from;
        loop {
            if !self.in_window(season) {
                return None;
            }
            if season == 1 && from == 0 {
                return Some(self.slot_of(1, 0));
            }
            if let Some(p) = self.state.next_scheduled_pair(from) {
                if p < self.layout.bit_count {
                    return Some(self.slot_of(season, p));
                }
            }
            if from == 0 && season > 1 {
                // Nothing scheduled in a whole season: nothing will ever be.
                return None;
            }
            season += 1;
            from = 0;
        }
    }

    pub fn next_wake(&self, from: Slot) -> Option<Slot> {
        if self.state.label.is_some() {
            return None;
        }
        let from = from.max(self.origin);
        if self.pending.is_some() {
            return Some(from);
        }
        let (season, pos) = self.locate(from);
        if !self.in_window(season) {
            return None;
        }
        let next_pair = pos.div_ceil(2) as u32;
        let status = if season > self.state.season {
            Status::Null
        } else {
            self.state.status
        };
        match status {
            Status::Candidate if next_pair < self.layout.bit_count => {
                Some(self.slot_of(season, next_pair))
            }
            Status::Candidate | Status::Eliminated | Status::Eliminator => {
                self.null_wake(season + 1, 0)
            }
            Status::Null if next_pair < self.layout.bit_count => self.null_wake(season, next_pair),
            Status::Null => self.null_wake(season + 1, 0),
        }
    }

    pub fn act(&mut self, slot: Slot) -> Activity {
        if slot < self.origin || self.state.label.is_some() {
            return Activity::SLEEP;
        }
        let (season, pos) = self.locate(slot);
        if !self.in_window(season) {
            return Activity::SLEEP;
        }
        self.last_season = Some(season);
        self.state.advance_to(season);
        let pair = (pos / 2) as u32;
        let bit = self.state.bit(pair);
        if pos % 2 == 0 {
            if self.state.should_wake(pair, season) {
                let charge = self.state.charge_for(pair);
                self.pending = Some(PendingTest {
                    pair,
                    charge,
                    heard: None,
                });
                return Activity {
                    action: test_actions(bit)[0],
                    charge,
                };
            }
            Activity::SLEEP
        } else {
            match self.pending {
                Some(p) if p.pair == pair => Activity {
                    action: test_actions(bit)[1],
                    charge: p.charge,
                },
                _ => Activity::SLEEP,
            }
        }
    }

    /// Settles a slot; returns the local label if the node was just labeled.
    pub fn settle(&mut self, slot: Slot, heard: Option<ChannelOutcome>) -> Option<u64> {
        let mut pending = self.pending?;
        let (_, pos) = self.locate(slot);
        if pos % 2 == 0 {
            pending.heard = heard;
            self.pending = Some(pending);
            return None;
        }
        self.pending = None;
        let pair = pending.pair;
        let heard = pending
            .heard
            .or(heard)
            .expect("a TEST exchange always listens once");
        let result = test(self.state.bit(pair), heard);
        self.state.apply(pair, result);
        if pair == self.layout.last_pair() && self.state.status == Status::Candidate {
            return self.state.finish_season();
        }
        None
    }

    pub fn trace_view(&self) -> TraceView {
        TraceView {
            season: self.last_season,
            period: None,
            status: Some(self.state.status),
            stl: self.state.stl,
            stn: self.state.stn_slots(),
            label: self.state.label,
        }
    }
}

/// A stand-alone node running the protocol from slot 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetNamlNode {
    pub id: u128,
    pub driver: DetNamlDriver,
}

impl NodeMachine for DetNamlNode {
    fn next_wake(&self, from: Slot) -> Option<Slot> {
        self.driver.next_wake(from)
    }

    fn act(&mut self, slot: Slot) -> Activity {
        self.driver.act(slot)
    }

    fn settle(&mut self, slot: Slot, heard: Option<ChannelOutcome>) -> Option<NodeEvent> {
        self.driver.settle(slot, heard).map(NodeEvent::Labeled)
    }

    fn label(&self) -> Option<u64> {
        self.driver.state.label
    }

    fn trace_view(&self) -> TraceView {
        self.driver.trace_view()
    }
}

/// Names the nodes holding `ids` (identifiers in `1..=upper_bound`).
///
/// The run lasts exactly `ids.len()` seasons.
pub fn detnaml_run(
    ids: &[u128],
    upper_bound: u128,
    opts: RunOptions<'_>,
) -> Result<RunReport<DetNamlNode>, SimError> {
    let width = cid_width(upper_bound)?;
    let codewords = ids
        .iter()
        .map(|&id| {
            check_id(id, upper_bound)?;
            Ok(encode_cid(id, width)?)
        })
        .collect::<Result<Vec<_>, SimError>>()?;
    run_codewords(
        &codewords,
        SeasonLayout::for_upper_bound(upper_bound)?,
        opts,
    )
}

/// Runs the protocol on explicit code-words, which must all be
/// `layout.bit_count` bits wide.
pub fn run_codewords(
    codewords: &[Codeword],
    layout: SeasonLayout,
    opts: RunOptions<'_>,
) -> Result<RunReport<DetNamlNode>, SimError> {
    if let Some(cw) = codewords.iter().find(|c| c.width() != layout.bit_count) {
        return Err(SimError::Invalid(format!(
            "code-word {cw:?} is not {} bits wide",
            layout.bit_count
        )));
    }
    let nodes = codewords
        .iter()
        .map(|&cw| DetNamlNode {
            id: cw.value(),
            driver: DetNamlDriver::new(NamingState::new(cw), layout, 0, None),
        })
        .collect();
    let horizon = codewords.len() as u64 * layout.season_length;
    Ok(engine::run(nodes, horizon, opts)?)
}

pub(crate) fn check_id(id: u128, upper_bound: u128) -> Result<(), SimError> {
    if id == 0 || id > upper_bound {
        return Err(SimError::Invalid(format!(
            "identifier {id} outside 1..={upper_bound}"
        )));
    }
    Ok(())
}
