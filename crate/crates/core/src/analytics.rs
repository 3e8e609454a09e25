//! Corpus-level aggregates: frequency rankings, n-gram tables, temporal
//! histograms and the daily sentiment series.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;

use chrono::NaiveDate;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::features::{extract_hashtags, TweetFeatures};
use crate::prep::CleanTweet;
use crate::sentiment::{SentimentLabel, SentimentPrediction};

#[derive(Debug, thiserror::Error)]
pub enum AnalyticsError {
    #[error("n-gram order must be 1, 2 or 3, got {0}")]
    BadOrder(usize),
    #[error("date range {from}..={to} is inverted")]
    InvertedRange { from: NaiveDate, to: NaiveDate },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Percentage of `count` in `total` in tenths, rounded half up.
pub fn percent_tenths(count: u64, total: u64) -> u64 {
    if total == 0 {
        return 0;
    }
    let num = count as u128 * 2000 + total as u128;
    (num / (2 * total as u128)) as u64
}

/// `percent_tenths` rendered with one decimal, e.g. `51.0`.
pub fn format_percent(count: u64, total: u64) -> String {
    let t = percent_tenths(count, total);
    format!("{}.{}", t / 10, t % 10)
}

/// Nonzero counts sorted by (−count, key).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    pub entries: Vec<(String, u64)>,
    pub total: u64,
}

impl FrequencyTable {
    pub fn from_counts(counts: impl IntoIterator<Item = (String, u64)>) -> Self {
        let mut merged: HashMap<String, u64> = HashMap::new();
        for (k, c) in counts {
            *merged.entry(k).or_default() += c;
        }
        let mut entries: Vec<(String, u64)> = merged.into_iter().filter(|(_, c)| *c > 0).collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let total = entries.iter().map(|(_, c)| c).sum();
        Self { entries, total }
    }

    pub fn from_keys<S: Into<String>>(keys: impl IntoIterator<Item = S>) -> Self {
        Self::from_counts(keys.into_iter().map(|k| (k.into(), 1)))
    }

    pub fn get(&self, key: &str) -> u64 {
        self.entries.iter().find(|(k, _)| k == key).map_or(0, |(_, c)| *c)
    }

    pub fn head(&self, n: usize) -> &[(String, u64)] {
        &self.entries[..n.min(self.entries.len())]
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn percent(&self, count: u64) -> String {
        format_percent(count, self.total)
    }

    /// `key,count,percent` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), AnalyticsError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["key", "count", "percent"])?;
        for (k, c) in &self.entries {
            w.write_record([k.clone(), c.to_string(), self.percent(*c)])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Serialize)]
struct EntryView<'a> {
    key: &'a str,
    count: u64,
    percent: f64,
}

impl Serialize for FrequencyTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<EntryView> = self
            .entries
            .iter()
            .map(|(k, c)| EntryView {
                key: k,
                count: *c,
                percent: percent_tenths(*c, self.total) as f64 / 10.0,
            })
            .collect();
        let mut st = s.serialize_struct("FrequencyTable", 2)?;
        st.serialize_field("total", &self.total)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NgramTable {
    pub n: usize,
    /// Sorted by (−count, tuple).
    pub entries: Vec<(Vec<String>, u64)>,
}

impl NgramTable {
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(_, c)| c).sum()
    }

    /// The same counts keyed by space-joined grams.
    pub fn to_frequency_table(&self) -> FrequencyTable {
        FrequencyTable {
            entries: self.entries.iter().map(|(g, c)| (g.join(" "), *c)).collect(),
            total: self.total(),
        }
    }
}

/// Sliding-window n-grams inside each document.
pub fn ngram_counts<S: AsRef<str>>(docs: &[Vec<S>], n: usize) -> Result<NgramTable, AnalyticsError> {
    if !(1..=3).contains(&n) {
        return Err(AnalyticsError::BadOrder(n));
    }
    let mut counts: HashMap<Vec<&str>, u64> = HashMap::new();
    for doc in docs {
        let words: Vec<&str> = doc.iter().map(AsRef::as_ref).collect();
        for w in words.windows(n) {
            *counts.entry(w.to_vec()).or_default() += 1;
        }
    }
    let mut entries: Vec<(Vec<String>, u64)> = counts
        .into_iter()
        .map(|(g, c)| (g.into_iter().map(str::to_string).collect(), c))
        .collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(NgramTable { n, entries })
}

/// Hashtag occurrences in the raw text, case folded.
pub fn tag_frequency(tweets: &[CleanTweet]) -> FrequencyTable {
    FrequencyTable::from_keys(tweets.iter().flat_map(|t| extract_hashtags(&t.raw_text).0))
}

pub fn mention_frequency(features: &[TweetFeatures]) -> FrequencyTable {
    FrequencyTable::from_keys(features.iter().flat_map(|f| f.mentions.iter().cloned()))
}

/// Tweets per posting username.
pub fn user_activity(tweets: &[CleanTweet]) -> FrequencyTable {
    FrequencyTable::from_keys(tweets.iter().map(|t| t.username.clone()))
}

/// Tweets bucketed by URL count into `0`, `1` and `2+`.
pub fn link_distribution(features: &[TweetFeatures]) -> FrequencyTable {
    FrequencyTable::from_keys(features.iter().map(|f| match f.url_count {
        0 => "0",
        1 => "1",
        _ => "2+",
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DailySummary {
    pub date: NaiveDate,
    pub negative: u64,
    pub neutral: u64,
    pub positive: u64,
    /// Tweets with no prediction. They count toward `total` only.
    pub unlabeled: u64,
    pub total: u64,
}

impl DailySummary {
    fn empty(date: NaiveDate) -> Self {
        Self {
            date,
            negative: 0,
            neutral: 0,
            positive: 0,
            unlabeled: 0,
            total: 0,
        }
    }

    pub fn count(&self, label: SentimentLabel) -> u64 {
        match label {
            SentimentLabel::Negative => self.negative,
            SentimentLabel::Neutral => self.neutral,
            SentimentLabel::Positive => self.positive,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.negative + self.neutral + self.positive + self.unlabeled == self.total
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TemporalWarnings {
    /// Predictions whose tweet id is not in the corpus.
    pub unknown_prediction_ids: u64,
    /// Repeated predictions for one tweet; the first one is used.
    pub duplicate_predictions: u64,
    /// Tweets with no prediction.
    pub unlabeled_tweets: u64,
    /// Tweets dated outside the daily range.
    pub out_of_range_tweets: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemporalSummary {
    pub monthly: FrequencyTable,
    pub hourly: FrequencyTable,
    pub daily: Vec<DailySummary>,
    pub warnings: TemporalWarnings,
}

/// Monthly (`YYYY-MM`) and hourly (`00`..`23`, local time) tweet counts plus
/// one [`DailySummary`] per date of `range`, zero days included. Without a
/// range the span of the tweets is used.
pub fn temporal_histograms(
    tweets: &[CleanTweet],
    predictions: &[SentimentPrediction],
    range: Option<(NaiveDate, NaiveDate)>,
) -> Result<TemporalSummary, AnalyticsError> {
    let mut warnings = TemporalWarnings::default();
    let ids: HashSet<&str> = tweets.iter().map(|t| t.tweet_id.as_str()).collect();
    let mut label_of: HashMap<&str, SentimentLabel> = HashMap::new();
    for p in predictions {
        if !ids.contains(p.tweet_id.as_str()) {
            warnings.unknown_prediction_ids += 1;
        } else if label_of.contains_key(p.tweet_id.as_str()) {
            warnings.duplicate_predictions += 1;
        } else {
            label_of.insert(&p.tweet_id, p.label);
        }
    }

    let monthly = FrequencyTable::from_keys(tweets.iter().map(|t| t.timestamp.month_key()));
    let hourly = FrequencyTable::from_keys(tweets.iter().map(|t| format!("{:02}", t.timestamp.hour())));

    let (from, to) = match range {
        Some((from, to)) if from > to => return Err(AnalyticsError::InvertedRange { from, to }),
        Some(r) => r,
        None => match (
            tweets.iter().map(|t| t.timestamp.date()).min(),
            tweets.iter().map(|t| t.timestamp.date()).max(),
        ) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Ok(TemporalSummary {
                    monthly,
                    hourly,
                    daily: Vec::new(),
                    warnings,
                })
            }
        },
    };
    let mut days: BTreeMap<NaiveDate, DailySummary> = from
        .iter_days()
        .take_while(|d| *d <= to)
        .map(|d| (d, DailySummary::empty(d)))
        .collect();
    for t in tweets {
        let label = label_of.get(t.tweet_id.as_str()).copied();
        if label.is_none() {
            warnings.unlabeled_tweets += 1;
        }
        let Some(day) = days.get_mut(&t.timestamp.date()) else {
            warnings.out_of_range_tweets += 1;
            continue;
        };
        day.total += 1;
        match label {
            Some(SentimentLabel::Negative) => day.negative += 1,
            Some(SentimentLabel::Neutral) => day.neutral += 1,
            Some(SentimentLabel::Positive) => day.positive += 1,
            None => day.unlabeled += 1,
        }
    }
    Ok(TemporalSummary {
        monthly,
        hourly,
        daily: days.into_values().collect(),
        warnings,
    })
}

/// `date,negative,neutral,positive,total` rows.
pub fn write_daily_csv<W: Write>(daily: &[DailySummary], out: W) -> Result<(), AnalyticsError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["date", "negative", "neutral", "positive", "total"])?;
    for d in daily {
        w.write_record([
            d.date.to_string(),
            d.negative.to_string(),
            d.neutral.to_string(),
            d.positive.to_string(),
            d.total.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prep::{normalize_datetime, LocalTimestamp};
    use crate::sentiment::ClassScores;

    fn tweet(id: &str, at: &str, user: &str, text: &str) -> CleanTweet {
        CleanTweet {
            tweet_id: id.into(),
            timestamp: normalize_datetime(at).unwrap(),
            hashtag: String::new(),
            username: user.into(),
            raw_text: text.into(),
            clean_text: String::new(),
            tokens: Vec::new(),
        }
    }

    fn pred(id: &str, label: SentimentLabel) -> SentimentPrediction {
        SentimentPrediction {
            tweet_id: id.into(),
            label,
            scores: ClassScores::from_array([1.0 / 3.0; 3]),
        }
    }

    fn date(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    #[test]
    fn bigrams_stay_inside_documents() {
        let docs = vec![vec!["geçmiş", "olsun", "izmir"], vec!["izmir"]];
        let t = ngram_counts(&docs, 2).unwrap();
        let got: Vec<(String, u64)> = t.entries.iter().map(|(g, c)| (g.join(" "), *c)).collect();
        assert_eq!(got, [("geçmiş olsun".to_string(), 1), ("olsun izmir".to_string(), 1)]);
        assert!(ngram_counts(&docs, 4).is_err());
        assert!(ngram_counts(&docs, 0).is_err());
        assert!(ngram_counts(&[vec!["a", "b"]], 3).unwrap().entries.is_empty());
    }

    #[test]
    fn user_activity_ranks() {
        let tweets = [
            tweet("1", "2020-10-30 10:00:00", "u2", ""),
            tweet("2", "2020-10-30 10:00:00", "u1", ""),
            tweet("3", "2020-10-30 10:00:00", "u1", ""),
            tweet("4", "2020-10-30 10:00:00", "u1", ""),
        ];
        let t = user_activity(&tweets);
        assert_eq!(t.entries, [("u1".to_string(), 3), ("u2".to_string(), 1)]);
        assert_eq!(t.total, 4);
        assert_eq!(user_activity(&[]), FrequencyTable::default());
    }

    #[test]
    fn tag_counts_fold_case() {
        let tweets = [
            tweet("1", "2020-10-30 10:00:00", "u", "#Deprem #İzmir"),
            tweet("2", "2020-10-30 10:00:00", "u", "#DEPREM"),
        ];
        let t = tag_frequency(&tweets);
        assert_eq!(t.entries[0], ("deprem".to_string(), 2));
        assert_eq!(t.get("izmir"), 1);
    }

    #[test]
    fn percent_rounding() {
        assert_eq!(format_percent(51, 100), "51.0");
        assert_eq!(format_percent(1, 3), "33.3");
        assert_eq!(format_percent(2, 3), "66.7");
        assert_eq!(format_percent(1, 8), "12.5");
        assert_eq!(format_percent(1, 16), "6.3");
        assert_eq!(format_percent(0, 0), "0.0");
        assert_eq!(format_percent(7, 7), "100.0");
    }

    #[test]
    fn percent_json_is_one_decimal() {
        let t = FrequencyTable::from_counts([("a".to_string(), 1), ("b".to_string(), 2)]);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"total":3,"entries":[{"key":"b","count":2,"percent":66.7},{"key":"a","count":1,"percent":33.3}]}"#
        );
    }

    #[test]
    fn monthly_hourly_daily() {
        let tweets = [
            tweet("1", "2020-10-30 14:51:00", "u", ""),
            tweet("2", "2020-10-30 09:00:00", "u", ""),
            tweet("3", "2020-11-01 14:00:00", "u", ""),
        ];
        let preds = [
            pred("1", SentimentLabel::Negative),
            pred("3", SentimentLabel::Positive),
            pred("99", SentimentLabel::Positive),
        ];
        let s = temporal_histograms(&tweets, &preds, Some((date("2020-10-30"), date("2020-11-02")))).unwrap();
        assert_eq!(
            s.monthly.entries,
            [("2020-10".to_string(), 2), ("2020-11".to_string(), 1)]
        );
        assert_eq!(s.hourly.get("14"), 2);
        assert_eq!(s.hourly.get("09"), 1);
        assert_eq!(s.daily.len(), 4);
        assert_eq!(
            s.daily[0],
            DailySummary {
                date: date("2020-10-30"),
                negative: 1,
                neutral: 0,
                positive: 0,
                unlabeled: 1,
                total: 2
            }
        );
        assert_eq!(s.daily[1].total, 0);
        assert_eq!(s.daily[3].total, 0);
        assert!(s.daily.iter().all(DailySummary::is_consistent));
        assert_eq!(s.warnings.unknown_prediction_ids, 1);
        assert_eq!(s.warnings.unlabeled_tweets, 1);
    }

    #[test]
    fn daily_range_defaults_to_tweet_span() {
        let tweets = [
            tweet("1", "2020-10-30 00:00:00", "u", ""),
            tweet("2", "2020-11-02 23:59:59", "u", ""),
        ];
        let s = temporal_histograms(&tweets, &[], None).unwrap();
        assert_eq!(s.daily.len(), 4);
        let s = temporal_histograms(&tweets, &[], Some((date("2020-10-31"), date("2020-11-01")))).unwrap();
        assert_eq!(s.warnings.out_of_range_tweets, 2);
        assert!(temporal_histograms(&tweets, &[], Some((date("2020-11-01"), date("2020-10-31")))).is_err());
    }

    #[test]
    fn duplicate_prediction_uses_first() {
        let tweets = [tweet("1", "2020-10-30 00:00:00", "u", "")];
        let preds = [pred("1", SentimentLabel::Neutral), pred("1", SentimentLabel::Positive)];
        let s = temporal_histograms(&tweets, &preds, None).unwrap();
        assert_eq!(s.daily[0].neutral, 1);
        assert_eq!(s.warnings.duplicate_predictions, 1);
    }

    #[test]
    fn link_buckets() {
        let f = |n| TweetFeatures {
            tweet_id: "1".into(),
            mentions: vec![],
            hashtags: vec![],
            hashtag_count: 0,
            url_count: n,
            raw_word_count: 0,
            clean_word_count: 0,
            unique_word_count: 0,
            stopword_count: 0,
            avg_word_length: 0.0,
            raw_char_count: 0,
            clean_char_count: 0,
            word_count_diff: 0,
        };
        let t = link_distribution(&[f(0), f(1), f(1), f(3)]);
        assert_eq!(t.get("0"), 1);
        assert_eq!(t.get("1"), 2);
        assert_eq!(t.get("2+"), 1);
        let t = link_distribution(&[f(0), f(0)]);
        assert_eq!(t.entries, [("0".to_string(), 2)]);
    }

    #[test]
    fn csv_outputs() {
        let t = FrequencyTable::from_keys(["x", "y", "x"]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "key,count,percent\nx,2,66.7\ny,1,33.3\n"
        );

        let d =
            DailySummary::empty(LocalTimestamp::from_local(date("2020-10-30").and_hms_opt(0, 0, 0).unwrap()).date());
        let mut buf = Vec::new();
        write_daily_csv(&[d], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "date,negative,neutral,positive,total\n2020-10-30,0,0,0,0\n"
        );
    }
}
