//! Per-tweet features for the bundled fixture, written as CSV to stdout.

use std::error::Error;
use std::fs::File;
use std::io;
use std::path::PathBuf;

use crisis_pulse::features::{features_for, write_features_csv};
use crisis_pulse::ingest::{parse_records, RecordFormat};
use crisis_pulse::prep::{preprocess, Lexicon};

fn main() -> Result<(), Box<dyn Error>> {
    let lex = Lexicon::default();
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixture/tweets.csv");
    let tweets = preprocess(parse_records(File::open(path)?, RecordFormat::Csv)?.records, &lex).tweets;
    let rows: Vec<_> = tweets.iter().map(|t| features_for(t, lex.stopwords())).collect();
    for f in &rows {
        f.check_invariants()?;
    }
    write_features_csv(&rows, io::stdout().lock())?;
    Ok(())
}
