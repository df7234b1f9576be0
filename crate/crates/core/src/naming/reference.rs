//! Always-awake naming: every unlabeled node plays every TEST of every
//! season until it is eliminated for that season. Used as an oracle.

use super::state::{test, test_actions, SeasonLayout, Status};
use crate::codeword::{cid_width, encode_cid, Codeword};
use crate::engine::{
    self, Activity, ChannelOutcome, Charge, NodeEvent, NodeMachine, RunOptions, RunReport, Slot,
    TraceView,
};
use crate::error::SimError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceNode {
    pub id: u128,
    codeword: Codeword,
    layout: SeasonLayout,
    eliminated_in: Option<u64>,
    label: Option<u64>,
    last_season: u64,
}

impl ReferenceNode {
    pub fn new(codeword: Codeword, layout: SeasonLayout) -> Self {
        Self {
            id: codeword.value(),
            codeword,
            layout,
            eliminated_in: None,
            label: None,
            last_season: 0,
        }
    }

    fn locate(&self, slot: Slot) -> (u64, u64) {
        (
            slot / self.layout.season_length + 1,
            slot % self.layout.season_length,
        )
    }
}

impl NodeMachine for ReferenceNode {
    fn next_wake(&self, from: Slot) -> Option<Slot> {
        if self.label.is_some() {
            return None;
        }
        let (season, _) = self.locate(from);
        if self.eliminated_in == Some(season) {
            Some(season * self.layout.season_length)
        } else {
            Some(from)
        }
    }

    fn act(&mut self, slot: Slot) -> Activity {
        let (season, pos) = self.locate(slot);
        self.last_season = season;
        let bit = self.codeword.bit((pos / 2) as u32);
        Activity {
            action: test_actions(bit)[(pos % 2) as usize],
            charge: Charge::Other,
        }
    }

    fn settle(&mut self, slot: Slot, heard: Option<ChannelOutcome>) -> Option<NodeEvent> {
        let (season, pos) = self.locate(slot);
        if let Some(heard) = heard {
            let bit = self.codeword.bit((pos / 2) as u32);
            if test(bit, heard) == Status::Eliminated {
                self.eliminated_in = Some(season);
            }
        }
        if pos + 1 == self.layout.season_length && self.eliminated_in != Some(season) {
            self.label = Some(season);
            return Some(NodeEvent::Labeled(season));
        }
        None
    }

    fn label(&self) -> Option<u64> {
        self.label
    }

    fn trace_view(&self) -> TraceView {
        let status = if self.label.is_some() || self.eliminated_in != Some(self.last_season) {
            Status::Candidate
        } else {
            Status::Eliminated
        };
        TraceView {
            season: Some(self.last_season),
            status: Some(status),
            label: self.label,
            ..TraceView::default()
        }
    }
}

/// Always-awake counterpart of [`super::detnaml_run`].
pub fn reference_detnaml_run(
    ids: &[u128],
    upper_bound: u128,
    opts: RunOptions<'_>,
) -> Result<RunReport<ReferenceNode>, SimError> {
    let width = cid_width(upper_bound)?;
    let layout = SeasonLayout::for_upper_bound(upper_bound)?;
    let nodes = ids
        .iter()
        .map(|&id| {
            super::detnaml::check_id(id, upper_bound)?;
            Ok(ReferenceNode::new(encode_cid(id, width)?, layout))
        })
        .collect::<Result<Vec<_>, SimError>>()?;
    let horizon = ids.len() as u64 * layout.season_length;
    Ok(engine::run(nodes, horizon, opts)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naming::detnaml_run;

    #[test]
    fn reference_labels_four_nodes() {
        let report = reference_detnaml_run(&[12, 10, 6, 3], 15, RunOptions::default()).unwrap();
        assert_eq!(report.labels, vec![Some(1), Some(2), Some(3), Some(4)]);
        let opt = detnaml_run(&[12, 10, 6, 3], 15, RunOptions::default()).unwrap();
        assert_eq!(opt.labels, report.labels);
    }

    #[test]
    fn single_node() {
        let report = reference_detnaml_run(&[1], 2, RunOptions::default()).unwrap();
        assert_eq!(report.labels, vec![Some(1)]);
    }

    #[test]
    fn reference_burns_more_energy() {
        let ids = [200u128, 180, 77, 76, 3, 1];
        let r = reference_detnaml_run(&ids, 255, RunOptions::default()).unwrap();
        let o = detnaml_run(&ids, 255, RunOptions::default()).unwrap();
        assert_eq!(r.labels, o.labels);
        assert!(o.ledger.max_awake <= r.ledger.max_awake);
    }
}
