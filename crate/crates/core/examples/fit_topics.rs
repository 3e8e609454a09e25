//! Fits LDA to the bundled fixture and prints the top words per topic.
//!
//! `cargo run --release --example fit_topics [K] [iterations]`

use std::error::Error;
use std::fs::File;
use std::path::PathBuf;

use crisis_pulse::ingest::{parse_records, RecordFormat};
use crisis_pulse::lda::{build_vocabulary, fit_lda_traced, LdaConfig};
use crisis_pulse::prep::{preprocess, Lexicon};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().map_or(Ok(6), |s| s.parse())?;
    let iterations: usize = args.next().map_or(Ok(300), |s| s.parse())?;

    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixture/tweets.csv");
    let tweets = preprocess(
        parse_records(File::open(path)?, RecordFormat::Csv)?.records,
        &Lexicon::default(),
    )
    .tweets;
    let docs: Vec<Vec<String>> = tweets.into_iter().map(|t| t.tokens).collect();

    let vocab = build_vocabulary(&docs, 2, 0.6)?;
    let config = LdaConfig {
        iterations,
        burn_in: iterations / 5,
        seed: 42,
        ..LdaConfig::with_topics(k)
    };
    let (model, trace) = fit_lda_traced(&docs, &vocab, &config)?;
    println!(
        "V = {}, fitted docs = {}, skipped = {}",
        vocab.len(),
        model.doc_index.len(),
        model.skipped_docs.len()
    );
    if let (Some(first), Some(last)) = (trace.first(), trace.last()) {
        println!("training perplexity {first:.2} -> {last:.2}");
    }
    println!("held-in perplexity {:.2}", model.perplexity(&docs)?.value);
    for topic in 0..k {
        let words: Vec<String> = model
            .top_words(topic, 8)?
            .into_iter()
            .map(|(w, p)| format!("{w}:{p:.3}"))
            .collect();
        println!("topic {topic:2}  {}", words.join(" "));
    }
    Ok(())
}
