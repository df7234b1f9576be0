//! Names four nodes and prints the per-slot trace plus each node's energy split.
//!
//! ```text
//! cargo run --example walkthrough [trace-file]
//! ```

use std::fs::File;

use beepnet::engine::{RunOptions, TraceEvent, TraceWriter};
use beepnet::naming::detnaml_run;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ids = [12u128, 10, 6, 3];
    let upper_bound = 15;

    let mut trace: Vec<TraceEvent> = Vec::new();
    let report = detnaml_run(&ids, upper_bound, RunOptions::with_trace(&mut trace))?;

    println!("slot\tseason\tperiod\tnode\taction\toutcome\tstatus\tstl\tstn\tlabel");
    for ev in &trace {
        println!("{ev}");
    }
    println!();
    for (i, (id, label)) in ids.iter().zip(&report.labels).enumerate() {
        let e = report.ledger.node(i);
        println!(
            "id {id:>2} -> label {}  awake {:>2} (stl {}, stn {}, other {})",
            label.unwrap(),
            e.awake(),
            e.w_stl,
            e.w_stn,
            e.w_other
        );
    }
    println!(
        "{} slots, max awake {}",
        report.total_slots, report.ledger.max_awake
    );

    if let Some(path) = std::env::args().nth(1) {
        let mut out = TraceWriter::new(File::create(&path)?);
        detnaml_run(&ids, upper_bound, RunOptions::with_trace(&mut out))?;
        println!("trace written to {path}");
    }
    Ok(())
}
