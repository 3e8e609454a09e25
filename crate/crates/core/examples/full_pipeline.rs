//! Runs every stage on a config file (the bundled fixture by default) and
//! prints the stage reports.
//!
//! `cargo run --release --example full_pipeline [config.toml] [out-dir]`

use std::error::Error;
use std::path::PathBuf;

use crisis_pulse::pipeline::{files, Pipeline, RunConfig};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let config_path = args.next().map_or_else(
        || PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixture/config.toml"),
        PathBuf::from,
    );
    let mut config = RunConfig::load(&config_path)?;
    if let Some(out) = args.next() {
        config.out_dir = out.into();
    }
    let pipeline = Pipeline::new(config)?;
    let run = pipeline.run_all()?;
    for s in &run.stages {
        println!("{:<10} {:>5} ms  {:?}", s.stage.name(), s.millis, s.tallies);
    }

    let report = pipeline.out_path(files::REPORT);
    let summary: serde_json::Value = serde_json::from_reader(std::fs::File::open(&report)?)?;
    println!("report: {}", report.display());
    println!("links per tweet: {}", summary["link_distribution"]);
    println!("top bigram: {}", summary["bigrams"]["entries"][0]);
    Ok(())
}
