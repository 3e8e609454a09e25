use std::collections::BTreeMap;
use std::io::{BufReader, Write};

use serde::Serialize;

use crate::analytics::{
    link_distribution, mention_frequency, ngram_counts, tag_frequency, temporal_histograms, user_activity,
    write_daily_csv, DailySummary, FrequencyTable, TemporalWarnings,
};
use crate::chart::{render_svg_bar, render_topic_panel, write_svg, BarSeries};
use crate::features::TweetFeatures;
use crate::ingest::TagManifest;
use crate::lda::TopicTable;
use crate::prep::{CleanTweet, PrepReport};
use crate::sentiment::{EvalMetrics, SentimentLabel, SentimentPrediction};

use super::{
    create, files, open, read_json, read_jsonl, write_json, IngestReport, LdaReport, Pipeline, PipelineError, PrepFile,
    SentimentEvalFile, SentimentMode, Stage, StageResult,
};

/// Ranked tables in `report.json` keep this many rows. The CSV tables are
/// complete.
pub const REPORT_TABLE_LIMIT: usize = 50;
const CHART_BARS: usize = 20;

/// Outputs of the earlier stages that `report.json` lists when present.
const STAGE_FILES: [&str; 14] = [
    files::RAW,
    files::INGEST_REPORT,
    files::CLEAN,
    files::PREP_REPORT,
    files::FEATURES_CSV,
    files::FEATURES_JSONL,
    files::TOPICS_JSON,
    files::TOPICS_CSV,
    files::TOPIC_ASSIGNMENTS,
    files::LDA_REPORT,
    files::SENTIMENT,
    files::SENTIMENT_MODEL,
    files::SENTIMENT_EVAL,
    files::SENTIMENT_IMPORT,
];

#[derive(Debug, Clone, Serialize)]
pub struct IngestCounts {
    pub parsed: usize,
    pub rejected: usize,
    pub off_tag: usize,
    pub out_of_window: usize,
    pub kept: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TopicWords {
    pub topic: usize,
    pub words: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LdaSummary {
    pub k: usize,
    pub vocabulary_size: usize,
    pub fitted_documents: usize,
    pub skipped_documents: usize,
    pub perplexity: f64,
    pub topics: Vec<TopicWords>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SentimentSummary {
    pub source: SentimentMode,
    pub predictions: usize,
    pub counts: BTreeMap<SentimentLabel, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<EvalMetrics>,
}

/// Contents of `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub manifest: TagManifest,
    pub ingest: IngestCounts,
    pub prep: PrepReport,
    pub lda: LdaSummary,
    pub sentiment: SentimentSummary,
    pub link_distribution: FrequencyTable,
    pub monthly: FrequencyTable,
    pub hourly: FrequencyTable,
    pub daily: Vec<DailySummary>,
    pub temporal_warnings: TemporalWarnings,
    pub table_limit: usize,
    pub tags: FrequencyTable,
    pub mentions: FrequencyTable,
    pub users: FrequencyTable,
    pub unigrams: FrequencyTable,
    pub bigrams: FrequencyTable,
    pub trigrams: FrequencyTable,
    /// Every file in the output directory after this stage, sorted.
    pub artifacts: Vec<String>,
}

fn truncated(t: &FrequencyTable, n: usize) -> FrequencyTable {
    FrequencyTable {
        entries: t.head(n).to_vec(),
        total: t.total,
    }
}

fn ranked_chart(table: &FrequencyTable, title: &str) -> Result<Option<String>, PipelineError> {
    if table.is_empty() {
        return Ok(None);
    }
    let head = table.head(CHART_BARS);
    let cats: Vec<String> = head.iter().map(|(k, _)| k.clone()).collect();
    let vals: Vec<f64> = head.iter().map(|(_, c)| *c as f64).collect();
    render_svg_bar(&cats, &[BarSeries::new("count", vals)], title)
        .map(Some)
        .map_err(|e| PipelineError::validation("report", e.to_string()))
}

impl Pipeline {
    pub(super) fn report(&self) -> StageResult {
        let stage = Stage::Report;
        let chart_err = |e: crate::chart::ChartError| PipelineError::validation(stage.name(), e.to_string());
        let manifest = self.manifest()?;
        let ingest: IngestReport = read_json(stage, &self.out_path(files::INGEST_REPORT))?;
        let prep: PrepFile = read_json(stage, &self.out_path(files::PREP_REPORT))?;
        let tweets: Vec<CleanTweet> = read_jsonl(stage, &self.out_path(files::CLEAN))?;
        let features: Vec<TweetFeatures> = read_jsonl(stage, &self.out_path(files::FEATURES_JSONL))?;
        let topics = TopicTable::from_reader(BufReader::new(open(&self.out_path(files::TOPICS_JSON))?))
            .map_err(|e| PipelineError::validation(stage.name(), e.to_string()))?;
        let lda: LdaReport = read_json(stage, &self.out_path(files::LDA_REPORT))?;
        let predictions: Vec<SentimentPrediction> = read_jsonl(stage, &self.out_path(files::SENTIMENT))?;
        let mode = self.config.sentiment.mode;
        let evaluation = match mode {
            SentimentMode::Train => {
                Some(read_json::<SentimentEvalFile>(stage, &self.out_path(files::SENTIMENT_EVAL))?.metrics)
            }
            _ => None,
        };

        for dir in [files::TABLES_DIR, files::CHARTS_DIR] {
            let p = self.out_path(dir);
            if p.exists() {
                std::fs::remove_dir_all(&p).map_err(|e| PipelineError::io(&p, e))?;
            }
        }

        let tags = tag_frequency(&tweets);
        let mentions = mention_frequency(&features);
        let users = user_activity(&tweets);
        let links = link_distribution(&features);
        let docs: Vec<Vec<&str>> = tweets
            .iter()
            .map(|t| t.tokens.iter().map(String::as_str).collect())
            .collect();
        let grams = [1, 2, 3].map(|n| ngram_counts(&docs, n).expect("order in range").to_frequency_table());
        let temporal = temporal_histograms(&tweets, &predictions, Some((manifest.date_from, manifest.date_to)))
            .map_err(|e| PipelineError::validation(stage.name(), e.to_string()))?;

        let tables: [(&str, &FrequencyTable); 9] = [
            ("tags.csv", &tags),
            ("mentions.csv", &mentions),
            ("users.csv", &users),
            ("links.csv", &links),
            ("unigrams.csv", &grams[0]),
            ("bigrams.csv", &grams[1]),
            ("trigrams.csv", &grams[2]),
            ("monthly.csv", &temporal.monthly),
            ("hourly.csv", &temporal.hourly),
        ];
        let mut written: Vec<String> = Vec::new();
        for (name, table) in tables {
            let path = self.out_path(files::TABLES_DIR).join(name);
            let mut w = create(&path)?;
            table
                .write_csv(&mut w)
                .map_err(|e| PipelineError::validation(stage.name(), e.to_string()))?;
            w.flush().map_err(|e| PipelineError::io(&path, e))?;
            written.push(format!("{}/{name}", files::TABLES_DIR));
        }
        let daily_path = self.out_path(files::TABLES_DIR).join("daily_sentiment.csv");
        write_daily_csv(&temporal.daily, create(&daily_path)?)
            .map_err(|e| PipelineError::validation(stage.name(), e.to_string()))?;
        written.push(format!("{}/daily_sentiment.csv", files::TABLES_DIR));

        let mut charts: Vec<(&str, String)> = Vec::new();
        let dates: Vec<String> = temporal.daily.iter().map(|d| d.date.to_string()).collect();
        let series = [
            (SentimentLabel::Negative, "#d62728"),
            (SentimentLabel::Neutral, "#7f7f7f"),
            (SentimentLabel::Positive, "#2ca02c"),
        ]
        .map(|(label, color)| {
            BarSeries::new(
                label.as_str(),
                temporal.daily.iter().map(|d| d.count(label) as f64).collect(),
            )
            .with_color(color)
        });
        charts.push((
            "daily_sentiment.svg",
            render_svg_bar(&dates, &series, "Tweets per day by sentiment").map_err(chart_err)?,
        ));
        let hours: Vec<String> = (0..24).map(|h| format!("{h:02}")).collect();
        let per_hour: Vec<f64> = hours.iter().map(|h| temporal.hourly.get(h) as f64).collect();
        charts.push((
            "hourly.svg",
            render_svg_bar(&hours, &[BarSeries::new("tweets", per_hour)], "Tweets per hour of day")
                .map_err(chart_err)?,
        ));
        if let Some(svg) = ranked_chart(&tags, "Top hashtags")? {
            charts.push(("top_hashtags.svg", svg));
        }
        if let Some(svg) = ranked_chart(&mentions, "Most mentioned users")? {
            charts.push(("top_mentions.svg", svg));
        }
        let top_n = self.config.lda.top_words;
        let topic_words: Vec<TopicWords> = (0..topics.num_topics())
            .map(|k| TopicWords {
                topic: k,
                words: topics.top_words(k, top_n).expect("topic in range"),
            })
            .collect();
        let panel: Vec<Vec<(String, f64)>> = topic_words.iter().map(|t| t.words.clone()).collect();
        charts.push((
            "topics.svg",
            render_topic_panel(&panel, "Topic top words").map_err(chart_err)?,
        ));
        let charts_dir = self.out_path(files::CHARTS_DIR);
        std::fs::create_dir_all(&charts_dir).map_err(|e| PipelineError::io(&charts_dir, e))?;
        for (name, svg) in &charts {
            write_svg(svg, &self.out_path(files::CHARTS_DIR).join(name)).map_err(chart_err)?;
            written.push(format!("{}/{name}", files::CHARTS_DIR));
        }

        let mut counts: BTreeMap<SentimentLabel, u64> = SentimentLabel::ALL.iter().map(|l| (*l, 0)).collect();
        for p in &predictions {
            *counts.get_mut(&p.label).expect("all labels present") += 1;
        }

        let mut artifacts: Vec<String> = STAGE_FILES
            .iter()
            .filter(|f| self.out_path(f).is_file())
            .map(|f| f.to_string())
            .chain(written)
            .chain([files::REPORT.to_string()])
            .collect();
        artifacts.sort();
        let summary = RunSummary {
            manifest,
            ingest: IngestCounts {
                parsed: ingest.parsed,
                rejected: ingest.rejected,
                off_tag: ingest.off_tag,
                out_of_window: ingest.out_of_window,
                kept: ingest.kept,
            },
            prep: prep.report,
            lda: LdaSummary {
                k: lda.config.k,
                vocabulary_size: lda.vocabulary_size,
                fitted_documents: lda.fitted_documents,
                skipped_documents: lda.skipped_tweets.len(),
                perplexity: lda.perplexity,
                topics: topic_words,
            },
            sentiment: SentimentSummary {
                source: mode,
                predictions: predictions.len(),
                counts,
                evaluation,
            },
            link_distribution: links,
            monthly: temporal.monthly,
            hourly: temporal.hourly,
            daily: temporal.daily,
            temporal_warnings: temporal.warnings,
            table_limit: REPORT_TABLE_LIMIT,
            tags: truncated(&tags, REPORT_TABLE_LIMIT),
            mentions: truncated(&mentions, REPORT_TABLE_LIMIT),
            users: truncated(&users, REPORT_TABLE_LIMIT),
            unigrams: truncated(&grams[0], REPORT_TABLE_LIMIT),
            bigrams: truncated(&grams[1], REPORT_TABLE_LIMIT),
            trigrams: truncated(&grams[2], REPORT_TABLE_LIMIT),
            artifacts,
        };
        write_json(&self.out_path(files::REPORT), &summary)?;

        let tallies = BTreeMap::from([
            ("days", summary.daily.len() as u64),
            ("charts", charts.len() as u64),
            ("tweets", tweets.len() as u64),
        ]);
        Ok((vec![files::REPORT, files::TABLES_DIR, files::CHARTS_DIR], tallies))
    }
}
