//! Record preprocessing: deduplication, empty-text removal, timestamp
//! normalization, text cleaning, stopword removal and suffix stripping.

mod clean;
mod datetime;
mod lexicon;
pub mod scan;

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

pub use clean::{clean_text, fold_tag_case, turkish_lowercase};
pub use datetime::{normalize_datetime, DatetimeError, LocalTimestamp, LOCAL_OFFSET_SECS};
pub use lexicon::{parse_table, remove_stopwords, strip_suffixes, Lexicon, MAX_STRIP_PASSES, MIN_STEM_CHARS};

use crate::ingest::RawTweet;

/// A deduplicated, normalized, tokenized tweet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanTweet {
    pub tweet_id: String,
    pub timestamp: LocalTimestamp,
    pub hashtag: String,
    pub username: String,
    pub raw_text: String,
    /// `tokens` joined by single spaces.
    pub clean_text: String,
    pub tokens: Vec<String>,
}

impl CleanTweet {
    /// The record this tweet was prepared from, with the timestamp in its
    /// normalized rendering.
    pub fn to_raw(&self) -> RawTweet {
        RawTweet {
            hashtag: self.hashtag.clone(),
            datetime_raw: self.timestamp.to_string(),
            tweet_id: self.tweet_id.clone(),
            text: self.raw_text.clone(),
            username: self.username.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrepReport {
    pub input_count: usize,
    pub duplicate_count: usize,
    pub empty_text_count: usize,
    pub datetime_failure_count: usize,
    pub output_count: usize,
}

impl PrepReport {
    pub fn is_consistent(&self) -> bool {
        self.input_count
            .checked_sub(self.duplicate_count + self.empty_text_count + self.datetime_failure_count)
            == Some(self.output_count)
    }
}

/// A record dropped because its datetime did not parse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatetimeFailure {
    pub tweet_id: String,
    pub datetime_raw: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrepOutcome {
    /// Ordered by (timestamp, tweet_id).
    pub tweets: Vec<CleanTweet>,
    pub report: PrepReport,
    pub datetime_failures: Vec<DatetimeFailure>,
}

/// Keeps the first record for each tweet id.
pub fn dedupe(records: Vec<RawTweet>) -> (Vec<RawTweet>, usize) {
    let mut seen = HashSet::with_capacity(records.len());
    let before = records.len();
    let kept: Vec<RawTweet> = records
        .into_iter()
        .filter(|r| seen.insert(r.tweet_id.clone()))
        .collect();
    let dropped = before - kept.len();
    (kept, dropped)
}

/// Removes records whose text is empty or whitespace only.
pub fn drop_missing_text(records: Vec<RawTweet>) -> (Vec<RawTweet>, usize) {
    let before = records.len();
    let kept: Vec<RawTweet> = records.into_iter().filter(|r| !r.text.trim().is_empty()).collect();
    let dropped = before - kept.len();
    (kept, dropped)
}

/// Numeric order on decimal id strings without parsing them.
pub fn compare_tweet_ids(a: &str, b: &str) -> Ordering {
    let ta = a.trim_start_matches('0');
    let tb = b.trim_start_matches('0');
    ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb)).then_with(|| a.cmp(b))
}

/// Cleans, splits, drops stopwords and strips suffixes.
pub fn tokenize(raw_text: &str, lexicon: &Lexicon) -> Vec<String> {
    let cleaned = clean_text(raw_text);
    let tokens: Vec<String> = cleaned.split_whitespace().map(str::to_string).collect();
    remove_stopwords(tokens, lexicon.stopwords())
        .iter()
        .map(|t| strip_suffixes(t, lexicon.suffixes()))
        .collect()
}

/// Runs the full preprocessing chain over raw records.
///
/// Dropping unused columns happens implicitly: only the fields of
/// [`CleanTweet`] are carried forward, and no row is lost to it.
pub fn preprocess(records: Vec<RawTweet>, lexicon: &Lexicon) -> PrepOutcome {
    let input_count = records.len();
    let (records, duplicate_count) = dedupe(records);
    let (records, empty_text_count) = drop_missing_text(records);

    let mut tweets = Vec::with_capacity(records.len());
    let mut datetime_failures = Vec::new();
    for r in records {
        let timestamp = match normalize_datetime(&r.datetime_raw) {
            Ok(ts) => ts,
            Err(_) => {
                datetime_failures.push(DatetimeFailure {
                    tweet_id: r.tweet_id,
                    datetime_raw: r.datetime_raw,
                });
                continue;
            }
        };
        let tokens = tokenize(&r.text, lexicon);
        tweets.push(CleanTweet {
            tweet_id: r.tweet_id,
            timestamp,
            hashtag: r.hashtag,
            username: r.username,
            raw_text: r.text,
            clean_text: tokens.join(" "),
            tokens,
        });
    }
    tweets.sort_by(|a, b| {
        a.timestamp
            .cmp(&b.timestamp)
            .then_with(|| compare_tweet_ids(&a.tweet_id, &b.tweet_id))
    });

    let report = PrepReport {
        input_count,
        duplicate_count,
        empty_text_count,
        datetime_failure_count: datetime_failures.len(),
        output_count: tweets.len(),
    };
    debug_assert!(report.is_consistent());
    PrepOutcome {
        tweets,
        report,
        datetime_failures,
    }
}
