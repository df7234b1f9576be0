//! Per-node energy accounting.
//!
//! Every BEEP or LISTEN costs one awake slot. Awake slots are additionally
//! split into the three buckets of the naming analysis: wake-ups at the
//! node's listen slot, wake-ups at its notify slots, and everything else.

use super::channel::SlotAction;

/// Which bucket an awake slot is charged to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Charge {
    Stl,
    Stn,
    Other,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NodeEnergy {
    pub beeps: u64,
    pub listens: u64,
    pub w_stl: u64,
    pub w_stn: u64,
    pub w_other: u64,
}

impl NodeEnergy {
    pub fn awake(&self) -> u64 {
        self.beeps + self.listens
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnergyLedger {
    pub nodes: Vec<NodeEnergy>,
    pub total_slots: u64,
    pub max_awake: u64,
}

impl EnergyLedger {
    pub fn new(nodes: usize) -> Self {
        Self {
            nodes: vec![NodeEnergy::default(); nodes],
            total_slots: 0,
            max_awake: 0,
        }
    }

    pub fn record(&mut self, node: usize, action: SlotAction, charge: Charge) {
        let e = &mut self.nodes[node];
        match action {
            SlotAction::Sleep => return,
            SlotAction::Beep => e.beeps += 1,
            SlotAction::Listen => e.listens += 1,
        }
        match charge {
            Charge::Stl => e.w_stl += 1,
            Charge::Stn => e.w_stn += 1,
            Charge::Other => e.w_other += 1,
        }
        self.max_awake = self.max_awake.max(e.awake());
    }

    pub fn node(&self, node: usize) -> &NodeEnergy {
        &self.nodes[node]
    }

    pub fn max_w_stl(&self) -> u64 {
        self.nodes.iter().map(|e| e.w_stl).max().unwrap_or(0)
    }

    pub fn max_w_stn(&self) -> u64 {
        self.nodes.iter().map(|e| e.w_stn).max().unwrap_or(0)
    }

    pub fn max_w_other(&self) -> u64 {
        self.nodes.iter().map(|e| e.w_other).max().unwrap_or(0)
    }
}
