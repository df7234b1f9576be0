//! Cross-checks the sleeping protocol against the always-awake one and the sort oracle.
//!
//! ```text
//! cargo run --release --example oracle [instances]
//! ```

use beepnet::codeword::sample_distinct_ids;
use beepnet::engine::RunOptions;
use beepnet::naming::{detnaml_run, reference_detnaml_run};
use beepnet::rng::{stream_rng, RUN_STREAM};
use beepnet::verify::{check_energy_identity, check_labels, oracle_labels};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let instances: u64 = std::env::args().nth(1).map_or(Ok(200), |s| s.parse())?;
    let (mut fast_awake, mut ref_awake) = (0u64, 0u64);
    for k in 0..instances {
        let m = 1 + k % 64;
        let upper_bound = 16 * u128::from(m * m);
        let ids = sample_distinct_ids(m as usize, upper_bound, &mut stream_rng(k, RUN_STREAM))?;

        let fast = detnaml_run(&ids, upper_bound, RunOptions::default())?;
        let reference = reference_detnaml_run(&ids, upper_bound, RunOptions::default())?;
        let expected = oracle_labels(std::slice::from_ref(&ids))?.remove(0);

        for check in [
            check_labels("sleeping protocol vs sort oracle", &expected, &fast.labels),
            check_labels(
                "always-awake protocol vs sort oracle",
                &expected,
                &reference.labels,
            ),
            check_energy_identity(&fast.ledger),
        ] {
            if !check.passed() {
                println!("instance {k} (M = {m}): {check}");
                std::process::exit(1);
            }
        }
        fast_awake += fast.ledger.max_awake;
        ref_awake += reference.ledger.max_awake;
    }
    println!("{instances} instances agree");
    println!(
        "mean max awake: {:.1} sleeping, {:.1} always awake",
        fast_awake as f64 / instances as f64,
        ref_awake as f64 / instances as f64
    );
    Ok(())
}
