//! Names anonymous nodes group by group and checks the result.
//!
//! ```text
//! cargo run --release --example grouped_naming [n] [seed]
//! ```

use beepnet::engine::RunOptions;
use beepnet::randnaml::{randnaml_run, RandNamlConfig};
use beepnet::verify::{check_bounds, check_permutation, check_randnaml_labels, BoundInput, FROZEN};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().map_or(Ok(256), |s| s.parse())?;
    let seed: u64 = args.next().map_or(Ok(7), |s| s.parse())?;

    let report = randnaml_run(&RandNamlConfig::new(n, seed), RunOptions::default())?;
    let s = &report.schedule;
    println!(
        "u = {}, N = {}, {} groups, period {} slots ({} naming seasons of {})",
        report.approximation.u,
        report.approximation.upper_bound,
        s.group_count,
        s.period_length,
        s.naming_seasons,
        s.season_length
    );
    let sizes: Vec<usize> = report.groups().iter().map(Vec::len).collect();
    println!(
        "group sizes: min {}, max {}, empty {}",
        sizes.iter().min().unwrap(),
        sizes.iter().max().unwrap(),
        sizes.iter().filter(|&&k| k == 0).count()
    );
    println!(
        "{} slots, max awake {}",
        report.run.total_slots, report.run.ledger.max_awake
    );

    if let Some(f) = report.run.first_failure() {
        println!("failed: {} at slot {} (node {})", f.kind, f.slot, f.node);
        return Ok(());
    }
    println!("{}", check_permutation(&report.run.labels));
    println!("{}", check_randnaml_labels(&report));
    println!(
        "{}",
        check_bounds(
            BoundInput::Randnaml {
                n,
                ledger: &report.run.ledger
            },
            &FROZEN
        )
    );
    Ok(())
}
