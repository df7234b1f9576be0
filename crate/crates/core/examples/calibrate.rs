//! Measures the ratios behind the frozen bound constants.
//!
//! ```text
//! cargo run --release --example calibrate
//! ```
//!
//! Prints the largest observed value of each ratio and that value times 1.1,
//! which is what `verify::FROZEN` holds.

use std::collections::BTreeMap;

use beepnet::codeword::ceil_log2;
use beepnet::randnaml::ApproxMode;
use beepnet::sweep::{energy_point, randnaml_point};
use beepnet::verify::randnaml_ratios;

const ENERGY_POINTS: [u64; 6] = [100, 1_000, 10_000, 1_000_000, 100_000_000, 10_000_000_000];
const SIZES: [u64; 3] = [1 << 10, 1 << 12, 1 << 14];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut c_other = 0.0f64;
    for &n in &ENERGY_POINTS {
        for seed in 0..20 {
            let row = energy_point(n, seed)?;
            let lg = f64::from(ceil_log2(row.upper_bound));
            let excess = (row.max_awake as f64 - row.bound_value as f64) / lg;
            c_other = c_other.max(excess);
        }
    }
    println!(
        "c  (energy sweep excess / log2 N): {c_other:.4} -> {:.4}",
        c_other * 1.1
    );

    let (mut c_energy, mut c_time) = (0.0f64, 0.0f64);
    for &n in &SIZES {
        let (mut clean, mut e_max, mut t_max) = (0, 0.0f64, 0.0f64);
        let mut first_kinds: BTreeMap<&str, u32> = BTreeMap::new();
        for seed in 0..100 {
            let (_, report) = randnaml_point(n, seed, ApproxMode::Exact, false)?;
            if let Some(f) = report.run.first_failure() {
                *first_kinds.entry(f.kind.name()).or_default() += 1;
                continue;
            }
            clean += 1;
            let (e, t) = randnaml_ratios(n, &report.run.ledger).expect("n >= 2");
            e_max = e_max.max(e);
            t_max = t_max.max(t);
        }
        println!("n = {n}: {clean}/100 clean, max awake / log² n = {e_max:.4}, slots / n log n = {t_max:.4}");
        println!("    first failure of the other runs: {first_kinds:?}");
        c_energy = c_energy.max(e_max);
        c_time = c_time.max(t_max);
    }
    println!(
        "C  (max awake / log² n): {c_energy:.4} -> {:.4}",
        c_energy * 1.1
    );
    println!(
        "C' (total slots / n log n): {c_time:.4} -> {:.4}",
        c_time * 1.1
    );
    Ok(())
}
