//! Parses the bundled tweet export and filters it by the tag manifest.
//!
//! `cargo run --example ingest_records [tweets.csv] [manifest.toml]`

use std::error::Error;
use std::fs::File;
use std::path::PathBuf;

use crisis_pulse::ingest::{filter_by_manifest, load_tag_manifest, parse_records, RecordFormat};

fn main() -> Result<(), Box<dyn Error>> {
    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixture");
    let mut args = std::env::args().skip(1);
    let tweets = args.next().map_or_else(|| fixture.join("tweets.csv"), PathBuf::from);
    let manifest = args.next().map_or_else(|| fixture.join("manifest.toml"), PathBuf::from);

    let parsed = parse_records(
        File::open(&tweets)?,
        RecordFormat::from_path(&tweets).ok_or("expected a .csv or .jsonl file")?,
    )?;
    for e in &parsed.errors {
        eprintln!("line {}: {}", e.line_number, e.detail);
    }
    let manifest = load_tag_manifest(&manifest)?;
    let kept = filter_by_manifest(&parsed.records, &manifest);
    println!("parsed    {}", parsed.records.len());
    println!("rejected  {}", parsed.errors.len());
    println!("off tag   {}", kept.off_tag);
    println!("outside   {}", kept.out_of_window);
    println!("undated   {}", kept.undated);
    println!("kept      {}", kept.kept.len());
    if let Some(first) = kept.kept.first() {
        println!("first     {} {} {:?}", first.tweet_id, first.datetime_raw, first.text);
    }
    Ok(())
}
