//! Frequency tables and the daily sentiment series for the bundled fixture,
//! with sentiment taken from the bundled external scores.

use std::error::Error;
use std::fs::File;
use std::io;
use std::path::PathBuf;

use crisis_pulse::analytics::{
    link_distribution, mention_frequency, ngram_counts, tag_frequency, temporal_histograms, user_activity,
    write_daily_csv, FrequencyTable,
};
use crisis_pulse::features::features_for;
use crisis_pulse::ingest::{filter_by_manifest, load_tag_manifest, parse_records, RecordFormat};
use crisis_pulse::prep::{preprocess, Lexicon};
use crisis_pulse::sentiment::import_external_scores;

fn show(name: &str, t: &FrequencyTable, n: usize) {
    println!("{name} (total {})", t.total);
    for (k, c) in t.head(n) {
        println!("  {k:<28} {c:>4} {:>5}%", t.percent(*c));
    }
}

fn main() -> Result<(), Box<dyn Error>> {
    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixture");
    let lex = Lexicon::default();
    let manifest = load_tag_manifest(&fixture.join("manifest.toml"))?;
    let parsed = parse_records(File::open(fixture.join("tweets.csv"))?, RecordFormat::Csv)?;
    let tweets = preprocess(filter_by_manifest(&parsed.records, &manifest).kept, &lex).tweets;
    let features: Vec<_> = tweets.iter().map(|t| features_for(t, lex.stopwords())).collect();
    let docs: Vec<Vec<String>> = tweets.iter().map(|t| t.tokens.clone()).collect();

    show("hashtags", &tag_frequency(&tweets), 5);
    show("mentions", &mention_frequency(&features), 5);
    show("users", &user_activity(&tweets), 5);
    show("links per tweet", &link_distribution(&features), 3);
    for n in 1..=3 {
        show(&format!("{n}-grams"), &ngram_counts(&docs, n)?.to_frequency_table(), 5);
    }

    let scores = import_external_scores(File::open(fixture.join("scores.jsonl"))?)?;
    let summary = temporal_histograms(
        &tweets,
        &scores.predictions,
        Some((manifest.date_from, manifest.date_to)),
    )?;
    show("hours", &summary.hourly, 24);
    println!("{:?}", summary.warnings);
    write_daily_csv(&summary.daily, io::stdout().lock())?;
    Ok(())
}
