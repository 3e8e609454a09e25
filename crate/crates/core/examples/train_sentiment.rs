//! Trains the Naive Bayes classifier on the bundled labeled corpus and
//! reports held-out metrics.

use std::error::Error;
use std::fs::File;
use std::path::PathBuf;

use crisis_pulse::ingest::RecordFormat;
use crisis_pulse::prep::{tokenize, Lexicon};
use crisis_pulse::sentiment::{evaluate, read_labeled_corpus, split_train_test, train, LabeledDoc, SentimentLabel};

fn main() -> Result<(), Box<dyn Error>> {
    let lex = Lexicon::default();
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixture/labeled.csv");
    let docs: Vec<LabeledDoc> = read_labeled_corpus(File::open(path)?, RecordFormat::Csv)?
        .into_iter()
        .map(|t| LabeledDoc {
            tokens: tokenize(&t.text, &lex),
            label: t.label,
        })
        .filter(|d| !d.tokens.is_empty())
        .collect();

    let (train_docs, test_docs) = split_train_test(&docs, 0.9, 42)?;
    let model = train(&train_docs, 1.0)?;
    let m = evaluate(&model, &test_docs)?;
    println!("train {} / test {}", train_docs.len(), test_docs.len());
    println!("accuracy {:.3}", m.accuracy);
    for label in SentimentLabel::ALL {
        let c = m.class(label);
        println!(
            "{label:<9} p={:.3} r={:.3} f1={:.3} n={}",
            c.precision, c.recall, c.f1, c.support
        );
    }
    println!("confusion (rows actual) {:?}", m.confusion);

    for text in [
        "Kurtarıldı, umut var",
        "Büyüklük ve merkez açıklandı",
        "Korkunç bir yıkım",
    ] {
        let (label, s) = model.predict(&tokenize(text, &lex));
        println!(
            "{text:?} -> {label} [{:.3} {:.3} {:.3}]",
            s.negative, s.neutral, s.positive
        );
    }
    Ok(())
}
