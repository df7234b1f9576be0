//! Every node learns the network size from the holder of the highest label.
//!
//! ```text
//! cargo run --release --example counting [n] [seeds]
//! ```

use beepnet::engine::RunOptions;
use beepnet::randnaml::{counting_run, ApproxMode, RandNamlConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().map_or(Ok(100), |s| s.parse())?;
    let seeds: u64 = args.next().map_or(Ok(10), |s| s.parse())?;

    for seed in 0..seeds {
        let config = RandNamlConfig::new(n, seed).with_mode(ApproxMode::Jittered);
        let report = counting_run(&config, RunOptions::default())?;
        match report.run.first_failure() {
            Some(f) => println!("seed {seed}: u = {:>4}, {}", report.approximation.u, f.kind),
            None => {
                let counts = report.counts();
                let agreed = counts.iter().all(|&c| c == Some(n));
                println!(
                    "seed {seed}: u = {:>4}, every node counted {} ({})",
                    report.approximation.u,
                    counts[0].unwrap(),
                    if agreed { "exact" } else { "MISMATCH" }
                );
            }
        }
    }
    Ok(())
}
