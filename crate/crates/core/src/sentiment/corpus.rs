//! Labeled training corpora: CSV with `text,label` columns or JSONL
//! `{text, label}` objects.

use std::io::{BufRead, BufReader, Read};

use serde::Deserialize;

use super::{SentimentError, SentimentLabel};
use crate::ingest::RecordFormat;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct LabeledText {
    pub text: String,
    pub label: SentimentLabel,
}

pub fn read_labeled_corpus<R: Read>(input: R, format: RecordFormat) -> Result<Vec<LabeledText>, SentimentError> {
    match format {
        RecordFormat::Csv => {
            let mut reader = csv::Reader::from_reader(input);
            let mut out = Vec::new();
            for row in reader.deserialize::<LabeledText>() {
                match row {
                    Ok(r) => out.push(r),
                    Err(e) => {
                        let line = e.position().map_or(0, |p| p.line());
                        return Err(SentimentError::BadCorpusRow {
                            line,
                            detail: e.to_string(),
                        });
                    }
                }
            }
            Ok(out)
        }
        RecordFormat::Jsonl => {
            let mut out = Vec::new();
            for (i, line) in BufReader::new(input).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let row = serde_json::from_str(&line).map_err(|e| SentimentError::BadCorpusRow {
                    line: i as u64 + 1,
                    detail: e.to_string(),
                })?;
                out.push(row);
            }
            Ok(out)
        }
    }
}
