//! Random tweet corpora and group-by oracles for the aggregate tables.

use std::collections::{BTreeMap, HashMap};

use chrono::{Duration, NaiveDate, NaiveDateTime};
use rand::seq::IndexedRandom;
use rand::Rng;

use crisis_pulse::analytics::{
    link_distribution, mention_frequency, ngram_counts, tag_frequency, temporal_histograms, user_activity,
    FrequencyTable,
};
use crisis_pulse::features::{features_for, TweetFeatures};
use crisis_pulse::ingest::RawTweet;
use crisis_pulse::prep::{preprocess, CleanTweet, Lexicon};
use crisis_pulse::sentiment::{ClassScores, SentimentLabel, SentimentPrediction};

use super::*;

const TAGS: &[&str] = &[
    "#deprem",
    "#İzmirDepremi",
    "#izmirdepremi",
    "#IZMIR",
    "#enkaz",
    "#SesVer",
];
const HANDLES: &[&str] = &["@AFADBaskanlik", "@izmirbld", "@a", "@KizilayTR"];

pub struct Corpus {
    pub tweets: Vec<CleanTweet>,
    pub features: Vec<TweetFeatures>,
    pub predictions: Vec<SentimentPrediction>,
}

pub fn random_corpus(seed: u64) -> Corpus {
    let mut r = rng(seed);
    let start: NaiveDateTime = "2020-10-28T00:00:00".parse().unwrap();
    let n = r.random_range(0..120);
    let raw: Vec<RawTweet> = (0..n)
        .map(|i| {
            let mut text = random_text(&mut r);
            for _ in 0..r.random_range(0..3) {
                text.push(' ');
                text.push_str(TAGS.choose(&mut r).unwrap());
            }
            if r.random_bool(0.4) {
                text = format!("{} {text}", HANDLES.choose(&mut r).unwrap());
            }
            text.push_str(" geçmiş olsun izmir");
            let t = start + Duration::minutes(r.random_range(0..60 * 24 * 12));
            RawTweet {
                hashtag: "deprem".into(),
                datetime_raw: t.format("%Y-%m-%d %H:%M:%S").to_string(),
                tweet_id: (1000 + i).to_string(),
                text,
                username: format!("user{}", r.random_range(0..8)),
            }
        })
        .collect();
    let lex = Lexicon::default();
    let tweets = preprocess(raw, &lex).tweets;
    let features = tweets.iter().map(|t| features_for(t, lex.stopwords())).collect();
    let mut predictions = Vec::new();
    for t in &tweets {
        for _ in 0..r.random_range(0..3) {
            let label = *SentimentLabel::ALL.choose(&mut r).unwrap();
            let mut a = [0.0; 3];
            a[label.index()] = 1.0;
            predictions.push(SentimentPrediction {
                tweet_id: t.tweet_id.clone(),
                label,
                scores: ClassScores::from_array(a),
            });
        }
    }
    if r.random_bool(0.3) {
        predictions.push(SentimentPrediction {
            tweet_id: "999999".into(),
            label: SentimentLabel::Neutral,
            scores: ClassScores::from_array([0.0, 1.0, 0.0]),
        });
    }
    Corpus {
        tweets,
        features,
        predictions,
    }
}

fn assert_table(name: &str, got: &FrequencyTable, keys: Vec<String>) {
    let expected = group_count(keys.iter().map(String::as_str));
    assert_eq!(got.entries, expected, "{name}");
    assert_eq!(got.total, keys.len() as u64, "{name} total");
}

fn oracle_ngrams(docs: &[Vec<String>], n: usize) -> Vec<String> {
    let mut out = Vec::new();
    for d in docs {
        if d.len() >= n {
            for i in 0..=d.len() - n {
                out.push(d[i..i + n].join(" "));
            }
        }
    }
    out
}

/// Compares every table and the daily series with plain group-by counts.
/// Panics on the first mismatch.
pub fn check_corpus(c: &Corpus) {
    let tokens: Vec<Vec<String>> = c.tweets.iter().map(|t| t.tokens.clone()).collect();
    for n in 1..=3 {
        let table = ngram_counts(&tokens, n).unwrap().to_frequency_table();
        assert_table(&format!("{n}-grams"), &table, oracle_ngrams(&tokens, n));
    }
    assert_table(
        "tags",
        &tag_frequency(&c.tweets),
        c.tweets.iter().flat_map(|t| oracle_hashtags(&t.raw_text)).collect(),
    );
    assert_table(
        "mentions",
        &mention_frequency(&c.features),
        c.tweets.iter().flat_map(|t| oracle_mentions(&t.raw_text)).collect(),
    );
    assert_table(
        "users",
        &user_activity(&c.tweets),
        c.tweets.iter().map(|t| t.username.clone()).collect(),
    );
    assert_table(
        "links",
        &link_distribution(&c.features),
        c.tweets
            .iter()
            .map(|t| match oracle_url_spans(&t.raw_text).len() {
                0 => "0".to_string(),
                1 => "1".to_string(),
                _ => "2+".to_string(),
            })
            .collect(),
    );

    let range = (
        "2020-10-30".parse::<NaiveDate>().unwrap(),
        "2020-11-05".parse::<NaiveDate>().unwrap(),
    );
    let summary = temporal_histograms(&c.tweets, &c.predictions, Some(range)).unwrap();
    let naive = |t: &CleanTweet| t.timestamp.naive();
    assert_table(
        "monthly",
        &summary.monthly,
        c.tweets.iter().map(|t| naive(t).format("%Y-%m").to_string()).collect(),
    );
    assert_table(
        "hourly",
        &summary.hourly,
        c.tweets.iter().map(|t| naive(t).format("%H").to_string()).collect(),
    );

    let mut first: HashMap<&str, SentimentLabel> = HashMap::new();
    for p in &c.predictions {
        first.entry(p.tweet_id.as_str()).or_insert(p.label);
    }
    let mut by_day: BTreeMap<NaiveDate, [u64; 5]> = BTreeMap::new();
    let mut day = range.0;
    while day <= range.1 {
        by_day.insert(day, [0; 5]);
        day = day.succ_opt().unwrap();
    }
    let mut in_range = 0;
    for t in &c.tweets {
        if let Some(row) = by_day.get_mut(&naive(t).date()) {
            in_range += 1;
            row[first.get(t.tweet_id.as_str()).map_or(3, |l| l.index())] += 1;
            row[4] += 1;
        }
    }
    let got: Vec<(NaiveDate, [u64; 5])> = summary
        .daily
        .iter()
        .map(|d| (d.date, [d.negative, d.neutral, d.positive, d.unlabeled, d.total]))
        .collect();
    assert_eq!(got, by_day.into_iter().collect::<Vec<_>>());
    assert_eq!(summary.daily.iter().map(|d| d.total).sum::<u64>(), in_range);
    assert!(summary.daily.iter().all(|d| d.is_consistent()));
    assert_eq!(summary.warnings.out_of_range_tweets, c.tweets.len() as u64 - in_range);
}
