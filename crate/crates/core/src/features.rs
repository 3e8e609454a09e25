//! Per-tweet engineered features.

use std::collections::HashSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::ingest::RawTweet;
use crate::prep::scan::{hashtag_spans, mention_spans, url_spans};
use crate::prep::{fold_tag_case, turkish_lowercase, CleanTweet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TweetFeatures {
    pub tweet_id: String,
    pub mentions: Vec<String>,
    pub hashtags: Vec<String>,
    pub hashtag_count: usize,
    pub url_count: usize,
    pub raw_word_count: usize,
    pub clean_word_count: usize,
    /// Distinct tokens in the cleaned text.
    pub unique_word_count: usize,
    /// Raw-text tokens that are stopwords.
    pub stopword_count: usize,
    /// Mean characters per cleaned token; 0 for an empty token list.
    pub avg_word_length: f64,
    pub raw_char_count: usize,
    pub clean_char_count: usize,
    pub word_count_diff: usize,
}

impl TweetFeatures {
    /// Checks the structural identities between fields.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.clean_word_count > self.raw_word_count {
            return Err(format!(
                "clean_word_count {} > raw_word_count {}",
                self.clean_word_count, self.raw_word_count
            ));
        }
        if self.word_count_diff != self.raw_word_count - self.clean_word_count {
            return Err("word_count_diff mismatch".into());
        }
        if self.unique_word_count > self.clean_word_count {
            return Err("unique_word_count > clean_word_count".into());
        }
        if self.hashtag_count != self.hashtags.len() {
            return Err("hashtag_count mismatch".into());
        }
        let letters = self
            .clean_char_count
            .saturating_sub(self.clean_word_count.saturating_sub(1));
        let expected = if self.clean_word_count == 0 {
            0.0
        } else {
            letters as f64 / self.clean_word_count as f64
        };
        if self.avg_word_length != expected {
            return Err(format!("avg_word_length {} != {expected}", self.avg_word_length));
        }
        Ok(())
    }
}

/// Mentioned handles in order of appearance, duplicates kept.
pub fn extract_mentions(raw_text: &str) -> Vec<String> {
    mention_spans(raw_text).into_iter().map(|m| m.word).collect()
}

/// Hashtags, case folded and without `#`, with their count.
pub fn extract_hashtags(raw_text: &str) -> (Vec<String>, usize) {
    let tags: Vec<String> = hashtag_spans(raw_text)
        .into_iter()
        .map(|h| fold_tag_case(&h.word))
        .collect();
    let n = tags.len();
    (tags, n)
}

pub fn count_urls(raw_text: &str) -> usize {
    url_spans(raw_text).len()
}

fn stopword_hits(raw_text: &str, stopwords: &HashSet<String>) -> usize {
    raw_text
        .split_whitespace()
        .map(|t| {
            turkish_lowercase(t)
                .chars()
                .filter(|c| c.is_alphanumeric())
                .collect::<String>()
        })
        .filter(|t| !t.is_empty() && stopwords.contains(t))
        .count()
}

/// Computes every feature of one tweet from its raw record and the cleaned
/// form derived from it.
pub fn extract_features(raw: &RawTweet, clean: &CleanTweet, stopwords: &HashSet<String>) -> TweetFeatures {
    let raw_text = raw.text.as_str();
    let (hashtags, hashtag_count) = extract_hashtags(raw_text);
    let raw_word_count = raw_text.split_whitespace().count();
    let clean_word_count = clean.tokens.len();
    let unique_word_count = clean.tokens.iter().collect::<HashSet<_>>().len();
    let token_chars: usize = clean.tokens.iter().map(|t| t.chars().count()).sum();
    let avg_word_length = if clean_word_count == 0 {
        0.0
    } else {
        token_chars as f64 / clean_word_count as f64
    };
    TweetFeatures {
        tweet_id: clean.tweet_id.clone(),
        mentions: extract_mentions(raw_text),
        hashtags,
        hashtag_count,
        url_count: count_urls(raw_text),
        raw_word_count,
        clean_word_count,
        unique_word_count,
        stopword_count: stopword_hits(raw_text, stopwords),
        avg_word_length,
        raw_char_count: raw_text.chars().count(),
        clean_char_count: clean.clean_text.chars().count(),
        word_count_diff: raw_word_count.saturating_sub(clean_word_count),
    }
}

/// Features for a cleaned tweet, using the raw text it carries.
pub fn features_for(clean: &CleanTweet, stopwords: &HashSet<String>) -> TweetFeatures {
    extract_features(&clean.to_raw(), clean, stopwords)
}

pub const FEATURE_CSV_HEADER: [&str; 13] = [
    "tweet_id",
    "mentions",
    "hashtags",
    "hashtag_count",
    "url_count",
    "raw_word_count",
    "clean_word_count",
    "unique_word_count",
    "stopword_count",
    "avg_word_length",
    "raw_char_count",
    "clean_char_count",
    "word_count_diff",
];

/// Writes one CSV row per tweet. List columns are joined with `;`.
pub fn write_features_csv<W: Write>(rows: &[TweetFeatures], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FEATURE_CSV_HEADER)?;
    for f in rows {
        w.write_record([
            f.tweet_id.clone(),
            f.mentions.join(";"),
            f.hashtags.join(";"),
            f.hashtag_count.to_string(),
            f.url_count.to_string(),
            f.raw_word_count.to_string(),
            f.clean_word_count.to_string(),
            f.unique_word_count.to_string(),
            f.stopword_count.to_string(),
            format!("{:.6}", f.avg_word_length),
            f.raw_char_count.to_string(),
            f.clean_char_count.to_string(),
            f.word_count_diff.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
