//! Writes a trace to disk, reads it back and re-runs the checks offline.
//!
//! ```text
//! cargo run --example replay
//! ```

use std::fs::File;
use std::io::BufReader;

use beepnet::engine::{read_trace, RunOptions, TraceWriter};
use beepnet::naming::detnaml_run;
use beepnet::verify::check_one_label_per_season;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir();
    for (name, ids) in [
        ("distinct", vec![90u128, 17, 64, 33, 5]),
        ("collision", vec![90, 17, 17, 5]),
    ] {
        let path = dir.join(format!("beepnet-{name}.trace"));
        let mut sink = TraceWriter::new(File::create(&path)?);
        let report = detnaml_run(&ids, 100, RunOptions::with_trace(&mut sink))?;
        drop(sink);

        let trace = read_trace(BufReader::new(File::open(&path)?))?;
        println!("{name}: {} events in {}", trace.len(), path.display());
        println!("  run: {:?}", report.failure_names());
        println!("  offline: {}", check_one_label_per_season(&trace));
    }
    Ok(())
}
