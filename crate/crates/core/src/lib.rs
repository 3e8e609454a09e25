//! Batch analytics for tweet corpora collected around a disaster: record
//! ingest, Turkish-aware cleaning, per-tweet features, LDA topics, sentiment
//! and aggregate tables with SVG charts.
//!
//! Stages in data-flow order:
//!
//! | module | does | example |
//! |---|---|---|
//! | [`ingest`] | parse CSV/JSONL exports, apply the tag manifest | `ingest_records` |
//! | [`prep`] | dedupe, normalize timestamps, clean and tokenize | `clean_tweets` |
//! | [`features`] | mentions, hashtags, URLs and word counts per tweet | `extract_features` |
//! | [`lda`] | vocabulary, collapsed Gibbs LDA, perplexity | `fit_topics` |
//! | [`sentiment`] | Naive Bayes train/evaluate, external score import | `train_sentiment`, `import_scores` |
//! | [`analytics`] | frequency and n-gram tables, daily series | `analytics_tables` |
//! | [`chart`] | SVG bar charts and topic panels | `render_charts` |
//! | [`pipeline`] | config, on-disk stages, report.json | `full_pipeline` |
//!
//! Run an example with `cargo run --example <name>`.

pub mod analytics;
pub mod chart;
pub mod features;
pub mod ingest;
pub mod lda;
pub mod pipeline;
pub mod prep;
pub mod sentiment;
