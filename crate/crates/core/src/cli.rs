//! Command-line front end: single runs, end-to-end counting and sweeps.
//!
//! Exit status is 0 when every enabled check passed, 1 on a protocol failure
//! or failed check, and 2 on invalid arguments or unreadable input.

use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::codeword::sample_distinct_ids;
use crate::engine::{RunOptions, TraceSink, TraceWriter};
use crate::error::SimError;
use crate::naming::{detnaml_run, reference_detnaml_run};
use crate::randnaml::{counting_run, randnaml_run, ApproxMode, RandNamlConfig};
use crate::rng::{stream_rng, RUN_STREAM};
use crate::sweep::{self, CsvAppender, RandNamlRow, ENERGY_HEADER, RANDNAML_HEADER};
use crate::verify::{self, BoundInput, CheckReport, FROZEN};

#[derive(Debug, Parser)]
#[command(
    name = "beepnet",
    version,
    about = "Naming and counting on simulated beeping networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write one line per awake node-slot to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Append a summary row to this CSV file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Approx::Exact)]
    pub approx: Approx,
    /// Cross-check against the always-awake oracle.
    #[arg(long)]
    pub reference: bool,
    /// Check time and energy against the frozen bound constants.
    #[arg(long)]
    pub check_bounds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Approx {
    Exact,
    Jittered,
}

impl From<Approx> for ApproxMode {
    fn from(a: Approx) -> Self {
        match a {
            Approx::Exact => ApproxMode::Exact,
            Approx::Jittered => ApproxMode::Jittered,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Deterministic naming of ⌈log2 n²⌉ nodes with N = n².
    Energy,
    Randnaml,
    Count,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Name M nodes holding distinct identifiers in 1..=N.
    Detnaml {
        #[arg(long, default_value_t = 0, conflicts_with = "ids")]
        m: usize,
        #[arg(long = "upper-bound", short = 'N')]
        upper_bound: u128,
        /// Identifiers, one per line, instead of sampling M of them.
        #[arg(long)]
        ids: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Name n anonymous nodes.
    Randnaml {
        #[arg(long)]
        n: Option<u64>,
        /// `id group` pairs, one node per line, instead of random draws.
        #[arg(long, required_unless_present = "n")]
        assign: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Name n anonymous nodes, then let every node learn n.
    Count {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, required_unless_present = "n")]
        assign: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Repeat runs over a range of sizes and write one CSV row per run.
    Sweep {
        #[arg(long, value_enum, default_value_t = Algorithm::Energy)]
        algorithm: Algorithm,
        #[arg(long, requires = "to", conflicts_with = "sizes")]
        from: Option<u64>,
        #[arg(long)]
        to: Option<u64>,
        /// Number of geometrically spaced sizes between --from and --to.
        #[arg(long, default_value_t = 5)]
        points: usize,
        /// Explicit comma-separated sizes.
        #[arg(long = "n", value_delimiter = ',', required_unless_present = "from")]
        sizes: Vec<u64>,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[command(flatten)]
        common: Common,
    },
}

/// Failure that maps to an exit status.
#[derive(Debug)]
enum Outcome {
    Protocol(String),
    Usage(String),
}

impl From<SimError> for Outcome {
    fn from(e: SimError) -> Self {
        Outcome::Usage(e.to_string())
    }
}

impl From<io::Error> for Outcome {
    fn from(e: io::Error) -> Self {
        Outcome::Usage(e.to_string())
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Outcome::Protocol(msg)) => {
            eprintln!("failure: {msg}");
            ExitCode::from(1)
        }
        Err(Outcome::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> Result<(), Outcome> {
    match cli.command {
        Command::Detnaml {
            m,
            upper_bound,
            ids,
            common,
        } => cmd_detnaml(m, upper_bound, ids.as_deref(), &common),
        Command::Randnaml { n, assign, common } => {
            cmd_randnaml(n, assign.as_deref(), &common, false)
        }
        Command::Count { n, assign, common } => cmd_randnaml(n, assign.as_deref(), &common, true),
        Command::Sweep {
            algorithm,
            from,
            to,
            points,
            sizes,
            seeds,
            common,
        } => {
            let sizes = match (from, to) {
                (Some(a), Some(b)) => sweep::geometric_points(a, b, points)?,
                _ => sizes,
            };
            cmd_sweep(algorithm, &sizes, seeds, &common)
        }
    }
}

fn parse_lines<T, F>(path: &Path, mut parse: F) -> Result<Vec<T>, Outcome>
where
    F: FnMut(&str) -> Option<T>,
{
    let text =
        fs::read_to_string(path).map_err(|e| Outcome::Usage(format!("{}: {e}", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            parse(l.trim()).ok_or_else(|| {
                Outcome::Usage(format!("{}:{}: cannot parse {l:?}", path.display(), i + 1))
            })
        })
        .collect()
}

fn open_trace(path: Option<&Path>) -> Result<Option<TraceWriter<File>>, Outcome> {
    Ok(match path {
        Some(p) => Some(TraceWriter::new(File::create(p)?)),
        None => None,
    })
}

fn options(trace: &mut Option<TraceWriter<File>>) -> RunOptions<'_> {
    match trace {
        Some(t) => RunOptions::with_trace(t as &mut dyn TraceSink),
        None => RunOptions::default(),
    }
}

fn require(checks: &[CheckReport]) -> Result<(), Outcome> {
    for c in checks {
        eprintln!("{c}");
    }
    match checks.iter().find(|c| !c.passed()) {
        Some(c) => Err(Outcome::Protocol(c.to_string())),
        None => Ok(()),
    }
}

#[derive(serde::Serialize)]
struct DetNamlRow {
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    upper_bound: u128,
    seed: u64,
    #[serde(rename = "totalSlots")]
    total_slots: u64,
    #[serde(rename = "maxAwake")]
    max_awake: u64,
    #[serde(rename = "wStl")]
    w_stl: u64,
    #[serde(rename = "wStn")]
    w_stn: u64,
    #[serde(rename = "wOther")]
    w_other: u64,
    failures: String,
}

const DETNAML_HEADER: [&str; 9] = [
    "M",
    "N",
    "seed",
    "totalSlots",
    "maxAwake",
    "wStl",
    "wStn",
    "wOther",
    "failures",
];

fn cmd_detnaml(
    m: usize,
    upper_bound: u128,
    ids: Option<&Path>,
    common: &Common,
) -> Result<(), Outcome> {
    let ids = match ids {
        Some(path) => parse_lines(path, |l| l.parse::<u128>().ok())?,
        None => sample_distinct_ids(m, upper_bound, &mut stream_rng(common.seed, RUN_STREAM))
            .map_err(SimError::from)?,
    };
    let mut trace = open_trace(common.trace.as_deref())?;
    let report = detnaml_run(&ids, upper_bound, options(&mut trace))?;

    let mut out = io::stdout().lock();
    for (id, label) in ids.iter().zip(&report.labels) {
        match label {
            Some(l) => writeln!(out, "{id}\t{l}")?,
            None => writeln!(out, "{id}\t-")?,
        }
    }
    let ledger = &report.ledger;
    eprintln!(
        "M={} N={upper_bound} totalSlots={} maxAwake={} wStl={} wStn={} wOther={}",
        ids.len(),
        report.total_slots,
        ledger.max_awake,
        ledger.max_w_stl(),
        ledger.max_w_stn(),
        ledger.max_w_other()
    );
    if let Some(path) = &common.csv {
        CsvAppender::open(path, &DETNAML_HEADER)?.append(&DetNamlRow {
            m: ids.len(),
            upper_bound,
            seed: common.seed,
            total_slots: report.total_slots,
            max_awake: ledger.max_awake,
            w_stl: ledger.max_w_stl(),
            w_stn: ledger.max_w_stn(),
            w_other: ledger.max_w_other(),
            failures: report.failure_names().join(";"),
        })?;
    }
    if let Some(f) = report.first_failure() {
        return Err(Outcome::Protocol(format!(
            "{} (slot {}, node {})",
            f.kind, f.slot, f.node
        )));
    }

    let mut checks = vec![verify::check_energy_identity(ledger)];
    if common.reference {
        let reference = reference_detnaml_run(&ids, upper_bound, RunOptions::default())?;
        let expected: Vec<u64> = reference.labels.iter().map(|l| l.unwrap_or(0)).collect();
        checks.push(verify::check_labels(
            "matches always-awake oracle",
            &expected,
            &report.labels,
        ));
    }
    if common.check_bounds {
        checks.push(verify::check_bounds(
            BoundInput::Detnaml {
                m: ids.len() as u64,
                upper_bound,
                ledger,
            },
            &FROZEN,
        ));
    }
    require(&checks)
}

fn cmd_randnaml(
    n: Option<u64>,
    assign: Option<&Path>,
    common: &Common,
    counting: bool,
) -> Result<(), Outcome> {
    let mut config =
        RandNamlConfig::new(n.unwrap_or(0), common.seed).with_mode(common.approx.into());
    if let Some(path) = assign {
        let pairs = parse_lines(path, |l| {
            let mut it = l.split_whitespace();
            let id = it.next()?.parse().ok()?;
            let group = it.next()?.parse().ok()?;
            it.next().is_none().then_some((id, group))
        })?;
        config = config.with_assignment(pairs);
    }
    if config.n == 0 {
        return Err(Outcome::Usage("n must be at least 1".into()));
    }
    let mut trace = open_trace(common.trace.as_deref())?;
    let report = if counting {
        counting_run(&config, options(&mut trace))?
    } else {
        randnaml_run(&config, options(&mut trace))?
    };
    let row = RandNamlRow::from_report(&report, config.n, common.seed);
    println!(
        "n={} u={} N={} groupCount={} totalSlots={} maxAwake={}",
        row.n, row.u, row.upper_bound, row.group_count, row.total_slots, row.max_awake
    );
    if let Some(path) = &common.csv {
        CsvAppender::open(path, &RANDNAML_HEADER)?.append(&row)?;
    }
    if let Some(f) = report.run.first_failure() {
        return Err(Outcome::Protocol(format!(
            "{} (slot {}, node {})",
            f.kind, f.slot, f.node
        )));
    }

    let mut checks = vec![
        verify::check_permutation(&report.run.labels),
        verify::check_randnaml_labels(&report),
        verify::check_energy_identity(&report.run.ledger),
    ];
    if counting {
        let counts = report.counts();
        checks.push(verify::check_counts(config.n, &counts));
        println!("count={}", counts.first().copied().flatten().unwrap_or(0));
    }
    if common.check_bounds {
        checks.push(verify::check_bounds(
            BoundInput::Randnaml {
                n: config.n,
                ledger: &report.run.ledger,
            },
            &FROZEN,
        ));
    }
    require(&checks)
}

fn cmd_sweep(
    algorithm: Algorithm,
    sizes: &[u64],
    seeds: u64,
    common: &Common,
) -> Result<(), Outcome> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Outcome::Usage("sweep sizes must be positive".into()));
    }
    if seeds == 0 {
        return Err(Outcome::Usage("--seeds must be at least 1".into()));
    }
    let header: &[&str] = match algorithm {
        Algorithm::Energy => &ENERGY_HEADER,
        Algorithm::Randnaml | Algorithm::Count => &RANDNAML_HEADER,
    };
    let mut csv = common
        .csv
        .as_deref()
        .map(|p| CsvAppender::open(p, header))
        .transpose()?;
    let mut stdout = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(io::stdout());
    if csv.is_none() {
        stdout.write_record(header).map_err(io::Error::from)?;
    }

    let mut failed = 0u64;
    let mut trend: Vec<(f64, f64)> = Vec::new();
    for &n in sizes {
        let mut awake_sum = 0.0;
        for seed in common.seed..common.seed + seeds {
            match algorithm {
                Algorithm::Energy => {
                    let row = sweep::energy_point(n, seed)?;
                    if common.check_bounds {
                        let limit = row.bound_value as f64
                            + FROZEN.c_other * crate::codeword::ceil_log2(row.upper_bound) as f64;
                        if row.max_awake as f64 > limit {
                            failed += 1;
                        }
                    }
                    awake_sum += row.max_awake as f64;
                    emit(&mut csv, &mut stdout, &row)?;
                }
                Algorithm::Randnaml | Algorithm::Count => {
                    let counting = algorithm == Algorithm::Count;
                    let (row, report) =
                        sweep::randnaml_point(n, seed, common.approx.into(), counting)?;
                    let within_bounds = || {
                        verify::check_bounds(
                            BoundInput::Randnaml {
                                n,
                                ledger: &report.run.ledger,
                            },
                            &FROZEN,
                        )
                        .passed()
                    };
                    if !row.failures.is_empty() || (common.check_bounds && !within_bounds()) {
                        failed += 1;
                    }
                    emit(&mut csv, &mut stdout, &row)?;
                }
            }
        }
        if algorithm == Algorithm::Energy {
            let lg = crate::codeword::ceil_log2(u128::from(n) * u128::from(n)) as f64;
            trend.push((lg, awake_sum / seeds as f64));
        }
    }
    stdout.flush()?;
    if trend.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = trend.into_iter().unzip();
        eprintln!(
            "slope of mean maxAwake against log2 N: {:.3}",
            sweep::slope(&xs, &ys)
        );
    }
    let runs = sizes.len() as u64 * seeds;
    eprintln!("{} of {runs} runs clean", runs - failed);
    if failed > 0 {
        return Err(Outcome::Protocol(format!("{failed} of {runs} runs failed")));
    }
    Ok(())
}

fn emit<T: serde::Serialize>(
    csv: &mut Option<CsvAppender>,
    stdout: &mut csv::Writer<io::Stdout>,
    row: &T,
) -> Result<(), Outcome> {
    match csv {
        Some(c) => c.append(row)?,
        None => stdout.serialize(row).map_err(io::Error::from)?,
    }
    Ok(())
}
