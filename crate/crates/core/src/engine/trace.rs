//! Line-oriented event trace.
//!
//! One event per line, tab-separated, in this column order:
//! `slot season period node action outcome status stl stn label`.
//! Absent values are written as `-`; the STN set is a comma-joined list of
//! even in-season slot indices; the STL sentinel is written as `-2`.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use super::channel::{ChannelOutcome, SlotAction};
use crate::naming::{Status, Stl};

/// Node-side state exposed to the trace after each slot.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TraceView {
    pub season: Option<u64>,
    pub period: Option<u64>,
    pub status: Option<Status>,
    pub stl: Stl,
    /// Even in-season slot indices.
    pub stn: Vec<u32>,
    pub label: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub slot: u64,
    pub season: Option<u64>,
    pub period: Option<u64>,
    pub node: usize,
    pub action: SlotAction,
    pub outcome: Option<ChannelOutcome>,
    pub status: Option<Status>,
    pub stl: Stl,
    pub stn: Vec<u32>,
    pub label: Option<u64>,
}

impl TraceEvent {
    pub fn new(
        slot: u64,
        node: usize,
        action: SlotAction,
        outcome: Option<ChannelOutcome>,
        view: TraceView,
    ) -> Self {
        Self {
            slot,
            season: view.season,
            period: view.period,
            node,
            action,
            outcome,
            status: view.status,
            stl: view.stl,
            stn: view.stn,
            label: view.label,
        }
    }
}

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stn = if self.stn.is_empty() {
            "-".to_string()
        } else {
            self.stn
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.slot,
            opt(&self.season),
            opt(&self.period),
            self.node,
            self.action,
            opt(&self.outcome),
            opt(&self.status),
            self.stl,
            stn,
            opt(&self.label),
        )
    }
}

#[derive(Debug, thiserror::Error)]
#[error("trace line {line}: {reason}")]
pub struct TraceParseError {
    pub line: usize,
    pub reason: String,
}

fn parse_opt<T: FromStr>(s: &str) -> Result<Option<T>, String>
where
    T::Err: fmt::Display,
{
    if s == "-" {
        Ok(None)
    } else {
        s.parse().map(Some).map_err(|e| format!("{s:?}: {e}"))
    }
}

fn parse_req<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    s.parse().map_err(|e| format!("{s:?}: {e}"))
}

impl FromStr for TraceEvent {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(format!("expected 10 columns, found {}", cols.len()));
        }
        let stn = if cols[8] == "-" {
            Vec::new()
        } else {
            cols[8]
                .split(',')
                .map(parse_req::<u32>)
                .collect::<Result<_, _>>()?
        };
        Ok(Self {
            slot: parse_req(cols[0])?,
            season: parse_opt(cols[1])?,
            period: parse_opt(cols[2])?,
            node: parse_req(cols[3])?,
            action: parse_req(cols[4])?,
            outcome: parse_opt(cols[5])?,
            status: parse_opt(cols[6])?,
            stl: parse_req(cols[7])?,
            stn,
            label: parse_opt(cols[9])?,
        })
    }
}

/// Reads a whole trace written by [`TraceWriter`].
pub fn read_trace<R: BufRead>(reader: R) -> Result<Vec<TraceEvent>, TraceParseError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| TraceParseError {
            line: i + 1,
            reason: e.to_string(),
        })?;
        if line.is_empty() {
            continue;
        }
        out.push(line.parse().map_err(|reason| TraceParseError {
            line: i + 1,
            reason,
        })?);
    }
    Ok(out)
}

pub trait TraceSink {
    fn record(&mut self, event: TraceEvent) -> io::Result<()>;
    fn finish(&mut self) -> io::Result<()> {
        Ok(())
    }
}

impl TraceSink for Vec<TraceEvent> {
    fn record(&mut self, event: TraceEvent) -> io::Result<()> {
        self.push(event);
        Ok(())
    }
}

pub struct TraceWriter<W: Write> {
    out: io::BufWriter<W>,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        Self {
            out: io::BufWriter::new(out),
        }
    }
}

impl<W: Write> TraceSink for TraceWriter<W> {
    fn record(&mut self, event: TraceEvent) -> io::Result<()> {
        writeln!(self.out, "{event}")
    }

    fn finish(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}
