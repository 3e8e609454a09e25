//! Cleans a few sample texts, then preprocesses the bundled fixture.

use std::error::Error;
use std::fs::File;
use std::path::PathBuf;

use crisis_pulse::ingest::{parse_records, RecordFormat};
use crisis_pulse::prep::{clean_text, normalize_datetime, preprocess, tokenize, Lexicon};

fn main() -> Result<(), Box<dyn Error>> {
    let lex = Lexicon::default();
    for text in [
        "@AFADBaskanlik #deprem İzmir'de yardım! https://t.co/abc",
        "IŞIK YOK, Bayraklı'da enkaz altında ses var 🙏",
        "Geçmiş olsun İzmir www.example.com",
    ] {
        println!("{text}");
        println!("  clean  {:?}", clean_text(text));
        println!("  tokens {:?}", tokenize(text, &lex));
    }
    for raw in ["2020-10-30T11:51:00Z", "2020-10-30 14:51:00", "30/10/2020"] {
        match normalize_datetime(raw) {
            Ok(t) => println!("{raw} -> {t}"),
            Err(e) => println!("{raw} -> {e}"),
        }
    }

    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixture/tweets.csv");
    let parsed = parse_records(File::open(path)?, RecordFormat::Csv)?;
    let out = preprocess(parsed.records, &lex);
    println!("{}", serde_json::to_string_pretty(&out.report)?);
    for f in &out.datetime_failures {
        println!("bad datetime {:?} on {}", f.datetime_raw, f.tweet_id);
    }
    Ok(())
}
