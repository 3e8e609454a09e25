//! Validates externally computed class scores (JSONL) and prints the
//! label counts and rejected rows.
//!
//! `cargo run --example import_scores [scores.jsonl]`

use std::collections::BTreeMap;
use std::error::Error;
use std::fs::File;
use std::path::PathBuf;

use crisis_pulse::sentiment::import_external_scores;

fn main() -> Result<(), Box<dyn Error>> {
    let path = std::env::args().nth(1).map_or_else(
        || PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixture/scores.jsonl"),
        PathBuf::from,
    );
    let out = import_external_scores(File::open(path)?)?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for p in &out.predictions {
        *counts.entry(p.label.to_string()).or_default() += 1;
    }
    println!("accepted {}: {counts:?}", out.predictions.len());
    for r in &out.rejected {
        println!("rejected line {}: {}", r.line_number, r.detail);
    }
    Ok(())
}
