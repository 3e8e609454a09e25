//! Import of class scores produced outside this crate (for example by a
//! fine-tuned transformer), one JSON object per line.

use std::io::{BufRead, BufReader, Read};

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use super::{ClassScores, SentimentError, SentimentPrediction};

/// Allowed distance of a row's score sum from 1 before it is rejected.
pub const SCORE_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedScore {
    pub line_number: u64,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ImportOutcome {
    pub predictions: Vec<SentimentPrediction>,
    pub rejected: Vec<RejectedScore>,
}

#[derive(Deserialize)]
struct Row<'a> {
    #[serde(borrow)]
    tweet_id: &'a RawValue,
    negative: f64,
    neutral: f64,
    positive: f64,
}

fn parse_row(line: &str) -> Result<SentimentPrediction, String> {
    let row: Row = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let raw_id = row.tweet_id.get();
    let tweet_id = if raw_id.starts_with('"') {
        serde_json::from_str::<String>(raw_id).map_err(|e| e.to_string())?
    } else {
        raw_id.to_string()
    };
    if tweet_id.is_empty() || !tweet_id.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("tweet_id {tweet_id:?} is not a decimal digit string"));
    }
    let scores = [row.negative, row.neutral, row.positive];
    if scores.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(format!("scores must be finite and nonnegative: {scores:?}"));
    }
    let sum: f64 = scores.iter().sum();
    if (sum - 1.0).abs() > SCORE_SUM_TOLERANCE {
        return Err(format!("scores sum to {sum}, not 1"));
    }
    let scores = ClassScores::from_array(scores.map(|s| s / sum));
    Ok(SentimentPrediction {
        tweet_id,
        label: scores.argmax(),
        scores,
    })
}

/// Reads `{tweet_id, negative, neutral, positive}` rows. Rows are validated
/// and renormalized; invalid rows are rejected with their line number.
pub fn import_external_scores<R: Read>(input: R) -> Result<ImportOutcome, SentimentError> {
    let mut out = ImportOutcome::default();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_row(line.trim()) {
            Ok(p) => out.predictions.push(p),
            Err(detail) => out.rejected.push(RejectedScore {
                line_number: i as u64 + 1,
                detail,
            }),
        }
    }
    Ok(out)
}
