use std::fmt;
use std::str::FromStr;

use crate::codeword::{cid_width, Codeword, CodewordError};
use crate::engine::{ChannelOutcome, Charge, SlotAction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Null,
    Candidate,
    Eliminated,
    /// Only ever a TEST result; stored as `Candidate`.
    Eliminator,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Null => "NULL",
            Status::Candidate => "CANDIDATE",
            Status::Eliminated => "ELIMINATED",
            Status::Eliminator => "ELIMINATOR",
        })
    }
}

impl FromStr for Status {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "NULL" => Ok(Status::Null),
            "CANDIDATE" => Ok(Status::Candidate),
            "ELIMINATED" => Ok(Status::Eliminated),
            "ELIMINATOR" => Ok(Status::Eliminator),
            other => Err(format!("unknown status {other:?}")),
        }
    }
}

/// The slot at which a node last got eliminated.
///
/// `Sentinel` is set when the node eliminates someone and matches no slot,
/// exactly like `None`; the two only differ in traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Stl {
    #[default]
    None,
    Sentinel,
    /// TEST pair index `i`, i.e. in-season slot `t_{2i}`.
    Pair(u32),
}

impl fmt::Display for Stl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stl::None => f.write_str("-"),
            Stl::Sentinel => f.write_str("-2"),
            Stl::Pair(i) => write!(f, "{}", 2 * i),
        }
    }
}

impl FromStr for Stl {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "-" => Ok(Stl::None),
            "-2" => Ok(Stl::Sentinel),
            _ => {
                let slot: u32 = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
                if slot % 2 == 1 {
                    return Err(format!("STL slot {slot} is odd"));
                }
                Ok(Stl::Pair(slot / 2))
            }
        }
    }
}

/// Slot layout of one season.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeasonLayout {
    /// Number of TEST pairs, `⌈log2 N⌉ + 1`.
    pub bit_count: u32,
    pub season_length: u64,
}

impl SeasonLayout {
    pub fn for_upper_bound(upper_bound: u128) -> Result<Self, CodewordError> {
        let bit_count = cid_width(upper_bound)?;
        Ok(Self {
            bit_count,
            season_length: 2 * u64::from(bit_count),
        })
    }

    pub fn last_pair(&self) -> u32 {
        self.bit_count - 1
    }
}

/// Slot actions of one TEST exchange for a node whose current bit is `bit`.
pub fn test_actions(bit: bool) -> [SlotAction; 2] {
    if bit {
        [SlotAction::Listen, SlotAction::Beep]
    } else {
        [SlotAction::Beep, SlotAction::Listen]
    }
}

/// TEST result from what the node heard in the slot it listened in.
pub fn test(bit: bool, heard: ChannelOutcome) -> Status {
    match (bit, heard.heard_beep()) {
        (false, true) => Status::Eliminated,
        (true, true) => Status::Eliminator,
        (_, false) => Status::Candidate,
    }
}

/// Per-node state of the energy-efficient naming protocol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamingState {
    pub codeword: Codeword,
    pub status: Status,
    pub stl: Stl,
    stn: u128,
    pub label: Option<u64>,
    /// Season currently being played (1-based).
    pub season: u64,
    season_stl: Stl,
    season_stn: u128,
}

impl NamingState {
    pub fn new(codeword: Codeword) -> Self {
        Self {
            codeword,
            status: Status::Null,
            stl: Stl::None,
            stn: 0,
            label: None,
            season: 1,
            season_stl: Stl::None,
            season_stn: 0,
        }
    }

    pub fn bit(&self, pair: u32) -> bool {
        self.codeword.bit(pair)
    }

    pub fn stn_contains(&self, pair: u32) -> bool {
        self.stn >> pair & 1 == 1
    }

    pub fn insert_stn(&mut self, pair: u32) {
        self.stn |= 1 << pair;
    }

    pub fn stn_pairs(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.codeword.width()).filter(move |&p| self.stn_contains(p))
    }

    /// STN as even in-season slot indices.
    pub fn stn_slots(&self) -> Vec<u32> {
        self.stn_pairs().map(|p| 2 * p).collect()
    }

    /// Smallest pair `≥ from` matching the STL or an STN entry.
    pub fn next_scheduled_pair(&self, from: u32) -> Option<u32> {
        let stn = if from >= 128 {
            0
        } else {
            self.stn >> from << from
        };
        let from_stn = (stn != 0).then(|| stn.trailing_zeros());
        let from_stl = match self.stl {
            Stl::Pair(p) if p >= from => Some(p),
            _ => None,
        };
        match (from_stn, from_stl) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Whether the node executes TEST at pair `pair` of season `season`.
    pub fn should_wake(&self, pair: u32, season: u64) -> bool {
        match self.status {
            Status::Candidate => true,
            Status::Null => self.stl == Stl::Pair(pair) || self.stn_contains(pair) || season == 1,
            Status::Eliminated | Status::Eliminator => false,
        }
    }

    /// Ledger bucket for a TEST at `pair`, judged against the STL and STN the
    /// node held when the season began.
    pub fn charge_for(&self, pair: u32) -> Charge {
        if self.season_stn >> pair & 1 == 1 {
            Charge::Stn
        } else if self.season_stl == Stl::Pair(pair) {
            Charge::Stl
        } else {
            Charge::Other
        }
    }

    /// Bookkeeping after a TEST at `pair` returned `result`.
    pub fn apply(&mut self, pair: u32, result: Status) {
        match result {
            Status::Candidate => {
                self.stn &= !(1 << pair);
                if !self.bit(pair) {
                    self.stl = Stl::None;
                }
                self.status = Status::Candidate;
            }
            Status::Eliminated => {
                self.stl = Stl::Pair(pair);
                self.status = Status::Eliminated;
            }
            Status::Eliminator => {
                self.insert_stn(pair);
                self.stl = Stl::Sentinel;
                self.status = Status::Candidate;
            }
            Status::Null => {}
        }
    }

    /// Closes the current season: a surviving candidate takes the season's
    /// index as its label, then everyone unlabeled starts the next season
    /// with a `Null` status.
    pub fn finish_season(&mut self) -> Option<u64> {
        let mut new_label = None;
        if self.label.is_none() && self.status == Status::Candidate {
            self.label = Some(self.season);
            new_label = self.label;
        }
        self.status = Status::Null;
        self.season += 1;
        self.season_stl = self.stl;
        self.season_stn = self.stn;
        new_label
    }

    /// Closes seasons until `season` is the current one.
    pub fn advance_to(&mut self, season: u64) {
        while self.season < season {
            self.finish_season();
        }
    }
}

/// Result of closing a season over all nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeasonEnd {
    pub season: u64,
    /// Indices of the nodes labeled this season.
    pub labeled: Vec<usize>,
}

impl SeasonEnd {
    pub fn is_duplicate(&self) -> bool {
        self.labeled.len() > 1
    }
}

/// Closes the current season on every unlabeled state.
pub fn season_end(states: &mut [NamingState]) -> SeasonEnd {
    let season = states
        .iter()
        .filter(|s| s.label.is_none())
        .map(|s| s.season)
        .max()
        .unwrap_or(0);
    let labeled = states
        .iter_mut()
        .enumerate()
        .filter(|(_, s)| s.label.is_none())
        .filter_map(|(i, s)| s.finish_season().map(|_| i))
        .collect();
    SeasonEnd { season, labeled }
}
