//! The global slot plan every node derives from `u` alone.
//!
//! ```text
//! | approx | period 1 | period 2 | ... | period G | counting |
//!            |
//!            +-- seasons 1..=2⌈log2 N⌉ | watch season | handoff window
//! ```

use super::approx::Approximation;
use crate::codeword::{ceil_log2, cid_width};
use crate::engine::Slot;
use crate::error::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    pub group_count: u64,
    pub season_length: u64,
    pub naming_seasons: u64,
    pub watch_seasons: u64,
    pub handoff_length: u64,
    pub period_length: u64,
    /// Start of the counting window, relative to [`Schedule::origin`].
    pub counting_slot: u64,
    /// Absolute slot at which period 1 begins (after the approximation phase).
    pub origin: Slot,
}

/// `max(1, ⌈2u / max(1, log2 2u)⌉)`.
pub fn group_count(u: u64) -> u64 {
    let two_u = 2.0 * u as f64;
    let per_group = two_u.log2().max(1.0);
    ((two_u / per_group).ceil() as u64).max(1)
}

impl Schedule {
    pub fn build(approx: &Approximation) -> Result<Self, SimError> {
        let n = approx.upper_bound;
        let width = u64::from(cid_width(n)?);
        let season_length = 2 * width;
        // ⌈2·log2 N⌉ = ⌈log2 N²⌉
        let naming_seasons = match n.checked_mul(n) {
            Some(sq) => u64::from(ceil_log2(sq)),
            None => return Err(SimError::Invalid(format!("upper bound {n} too large"))),
        };
        let watch_seasons = 1;
        let handoff_length = width;
        let period_length = (naming_seasons + watch_seasons) * season_length + handoff_length;
        let group_count = group_count(approx.u);
        Ok(Self {
            group_count,
            season_length,
            naming_seasons,
            watch_seasons,
            handoff_length,
            period_length,
            counting_slot: group_count * period_length,
            origin: approx.charge,
        })
    }

    /// First slot of period `k` (1-based).
    pub fn period_start(&self, k: u64) -> Slot {
        self.origin + (k - 1) * self.period_length
    }

    /// First slot of season `j` (1-based) of period `k`.
    pub fn season_start(&self, k: u64, j: u64) -> Slot {
        self.period_start(k) + (j - 1) * self.season_length
    }

    /// First slot of period `k`'s handoff window.
    pub fn handoff_start(&self, k: u64) -> Slot {
        self.period_start(k) + (self.naming_seasons + self.watch_seasons) * self.season_length
    }

    /// Absolute start of the counting window.
    pub fn counting_start(&self) -> Slot {
        self.origin + self.counting_slot
    }

    /// Total slots of a naming run.
    pub fn naming_horizon(&self) -> Slot {
        self.counting_start()
    }

    /// Total slots of a counting run.
    pub fn counting_horizon(&self) -> Slot {
        self.counting_start() + self.handoff_length
    }

    /// Period containing `slot`, if any.
    pub fn period_of(&self, slot: Slot) -> Option<u64> {
        (slot >= self.origin && slot < self.counting_start())
            .then(|| (slot - self.origin) / self.period_length + 1)
    }
}
