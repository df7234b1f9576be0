//! Parameter sweeps and their CSV rows.

use std::fs::OpenOptions;
use std::io;
use std::path::Path;

use serde::Serialize;

use crate::codeword::{ceil_log2, sample_distinct_ids};
use crate::engine::RunOptions;
use crate::error::SimError;
use crate::naming::detnaml_run;
use crate::randnaml::{counting_run, randnaml_run, ApproxMode, RandNamlConfig, RandNamlReport};
use crate::rng::{stream_rng, RUN_STREAM};
use crate::verify::energy_curve;

/// `count` points from `from` to `to`, evenly spaced on a log scale and rounded.
pub fn geometric_points(from: u64, to: u64, count: usize) -> Result<Vec<u64>, SimError> {
    if from == 0 || to < from || count == 0 {
        return Err(SimError::Invalid(format!(
            "bad sweep range {from}..={to} with {count} points"
        )));
    }
    if count == 1 {
        return Ok(vec![from]);
    }
    let ratio = (to as f64 / from as f64).powf(1.0 / (count - 1) as f64);
    let mut points: Vec<u64> = (0..count)
        .map(|i| match i {
            0 => from,
            i if i == count - 1 => to,
            i => (from as f64 * ratio.powi(i as i32)).round() as u64,
        })
        .collect();
    points.dedup();
    Ok(points)
}

/// One energy measurement of the deterministic protocol on `⌈log2 n²⌉` nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnergyRow {
    pub n: u64,
    #[serde(rename = "N")]
    pub upper_bound: u128,
    #[serde(rename = "M")]
    pub m: u64,
    pub seed: u64,
    #[serde(rename = "maxAwake")]
    pub max_awake: u64,
    /// `M + ⌈log2 N⌉ + 1`; this crate's comparison curve.
    #[serde(rename = "boundValue")]
    pub bound_value: u64,
}

pub const ENERGY_HEADER: [&str; 6] = ["n", "N", "M", "seed", "maxAwake", "boundValue"];

/// Runs the deterministic protocol with `N = n²` and `M = ⌈log2 N⌉` distinct identifiers.
pub fn energy_point(n: u64, seed: u64) -> Result<EnergyRow, SimError> {
    let upper_bound = u128::from(n) * u128::from(n);
    if upper_bound < 2 {
        return Err(SimError::Invalid("n must be at least 2".into()));
    }
    let m = u64::from(ceil_log2(upper_bound));
    let ids = sample_distinct_ids(m as usize, upper_bound, &mut stream_rng(seed, RUN_STREAM))?;
    let report = detnaml_run(&ids, upper_bound, RunOptions::default())?;
    if !report.is_failure_free() {
        return Err(SimError::Invalid(format!(
            "energy sweep run failed: {:?}",
            report.failure_names()
        )));
    }
    Ok(EnergyRow {
        n,
        upper_bound,
        m,
        seed,
        max_awake: report.ledger.max_awake,
        bound_value: energy_curve(m, upper_bound),
    })
}

/// Summary of a grouped naming or counting run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RandNamlRow {
    pub n: u64,
    pub u: u64,
    #[serde(rename = "N")]
    pub upper_bound: u128,
    #[serde(rename = "groupCount")]
    pub group_count: u64,
    pub seed: u64,
    #[serde(rename = "totalSlots")]
    pub total_slots: u64,
    #[serde(rename = "maxAwake")]
    pub max_awake: u64,
    /// `;`-joined failure names, empty when clean.
    pub failures: String,
}

pub const RANDNAML_HEADER: [&str; 8] = [
    "n",
    "u",
    "N",
    "groupCount",
    "seed",
    "totalSlots",
    "maxAwake",
    "failures",
];

impl RandNamlRow {
    pub fn from_report(report: &RandNamlReport, n: u64, seed: u64) -> Self {
        Self {
            n,
            u: report.approximation.u,
            upper_bound: report.approximation.upper_bound,
            group_count: report.schedule.group_count,
            seed,
            total_slots: report.run.total_slots,
            max_awake: report.run.ledger.max_awake,
            failures: report.run.failure_names().join(";"),
        }
    }
}

pub fn randnaml_point(
    n: u64,
    seed: u64,
    mode: ApproxMode,
    counting: bool,
) -> Result<(RandNamlRow, RandNamlReport), SimError> {
    let config = RandNamlConfig::new(n, seed).with_mode(mode);
    let report = if counting {
        counting_run(&config, RunOptions::default())?
    } else {
        randnaml_run(&config, RunOptions::default())?
    };
    Ok((RandNamlRow::from_report(&report, n, seed), report))
}

/// Appends rows to a CSV file, writing the header only when the file is new or empty.
pub struct CsvAppender {
    writer: csv::Writer<std::fs::File>,
}

impl CsvAppender {
    pub fn open(path: &Path, header: &[&str]) -> io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let fresh = file.metadata()?.len() == 0;
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(file);
        if fresh {
            writer.write_record(header)?;
        }
        Ok(Self { writer })
    }

    /// Writes and flushes one row, so an interrupted sweep keeps what it has.
    pub fn append<T: Serialize>(&mut self, row: &T) -> io::Result<()> {
        self.writer.serialize(row)?;
        self.writer.flush()
    }
}

impl Drop for CsvAppender {
    fn drop(&mut self) {
        let _ = self.writer.flush();
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}
