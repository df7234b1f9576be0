//! Max awake time of the deterministic protocol on ⌈log2 n²⌉ nodes as n grows.
//!
//! ```text
//! cargo run --release --example energy_sweep [out.csv]
//! ```
//!
//! `boundValue` is `M + ⌈log2 N⌉ + 1`, this crate's comparison curve.

use beepnet::sweep::{energy_point, geometric_points, slope, CsvAppender, ENERGY_HEADER};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1);
    let mut csv = out
        .as_deref()
        .map(|p| CsvAppender::open(p.as_ref(), &ENERGY_HEADER))
        .transpose()?;

    let seeds = 20;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    println!(
        "{:>12} {:>4} {:>10} {:>8} {:>6}",
        "n", "M", "mean awake", "max", "curve"
    );
    for n in geometric_points(100, 10_000_000_000, 9)? {
        let rows = (0..seeds)
            .map(|s| energy_point(n, s))
            .collect::<Result<Vec<_>, _>>()?;
        let mean = rows.iter().map(|r| r.max_awake as f64).sum::<f64>() / seeds as f64;
        let max = rows.iter().map(|r| r.max_awake).max().unwrap();
        println!(
            "{n:>12} {:>4} {mean:>10.1} {max:>8} {:>6}",
            rows[0].m, rows[0].bound_value
        );
        xs.push(rows[0].m as f64);
        ys.push(mean);
        if let Some(w) = csv.as_mut() {
            for r in &rows {
                w.append(r)?;
            }
        }
    }
    println!(
        "slope of mean max awake against log2 N: {:.2}",
        slope(&xs, &ys)
    );
    Ok(())
}
