//! End-to-end orchestration. Each stage reads the files written by the
//! stages before it and writes its own outputs under the run's output
//! directory, so any stage can be rerun on its own.

mod config;
mod error;
mod report;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::features::{features_for, write_features_csv, TweetFeatures};
use crate::ingest::{
    filter_by_manifest, load_tag_manifest, parse_records, write_records, RecordError, RecordFormat, TagManifest,
};
use crate::lda::{build_vocabulary, fit_lda_traced, write_assignments, write_topics_csv, LdaConfig};
use crate::prep::{preprocess, tokenize, CleanTweet, DatetimeFailure, Lexicon, PrepReport};
use crate::sentiment::{
    evaluate, import_external_scores, read_labeled_corpus, split_train_test, train, EvalMetrics, LabeledDoc,
    RejectedScore, SentimentModel, SentimentPrediction,
};

pub use config::{RunConfig, SentimentMode, SentimentSettings, TopicSettings, CONFIG_ENV};
pub use error::{ErrorKind, PipelineError};
pub use report::{RunSummary, REPORT_TABLE_LIMIT};

/// Output file names, relative to the output directory.
pub mod files {
    pub const RAW: &str = "raw.jsonl";
    pub const INGEST_REPORT: &str = "ingest_report.json";
    pub const CLEAN: &str = "clean.jsonl";
    pub const PREP_REPORT: &str = "prep_report.json";
    pub const FEATURES_CSV: &str = "features.csv";
    pub const FEATURES_JSONL: &str = "features.jsonl";
    pub const TOPICS_JSON: &str = "topics.json";
    pub const TOPICS_CSV: &str = "topics.csv";
    pub const TOPIC_ASSIGNMENTS: &str = "topic_assignments.bin";
    pub const LDA_REPORT: &str = "lda_report.json";
    pub const SENTIMENT: &str = "sentiment.jsonl";
    pub const SENTIMENT_MODEL: &str = "sentiment_model.json";
    pub const SENTIMENT_EVAL: &str = "sentiment_eval.json";
    pub const SENTIMENT_IMPORT: &str = "sentiment_import.json";
    pub const REPORT: &str = "report.json";
    pub const TABLES_DIR: &str = "tables";
    pub const CHARTS_DIR: &str = "charts";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Ingest,
    Clean,
    Features,
    Topics,
    Sentiment,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Ingest,
        Stage::Clean,
        Stage::Features,
        Stage::Topics,
        Stage::Sentiment,
        Stage::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Clean => "clean",
            Stage::Features => "features",
            Stage::Topics => "topics",
            Stage::Sentiment => "sentiment",
            Stage::Report => "report",
        }
    }
}

/// What one stage did. Printed, never written to the output directory, as
/// the timing would make outputs differ between runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageReport {
    pub stage: Stage,
    pub millis: u64,
    pub artifacts: Vec<String>,
    pub tallies: BTreeMap<&'static str, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub prep: Option<PrepReport>,
    pub stages: Vec<StageReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputSummary {
    /// File name only, so reports do not depend on where inputs live.
    pub file: String,
    pub records: usize,
    pub errors: Vec<RecordError>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IngestReport {
    pub inputs: Vec<InputSummary>,
    pub parsed: usize,
    pub rejected: usize,
    pub off_tag: usize,
    pub out_of_window: usize,
    /// Kept records whose datetime does not parse; dropped by `clean`.
    pub undated: usize,
    pub kept: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrepFile {
    pub report: PrepReport,
    pub datetime_failures: Vec<DatetimeFailure>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LdaReport {
    pub config: LdaConfig,
    pub vocabulary_size: usize,
    pub documents: usize,
    pub fitted_documents: usize,
    /// Tweet ids with no in-vocabulary token.
    pub skipped_tweets: Vec<String>,
    pub tokens: usize,
    pub perplexity: f64,
    /// Training perplexity after each sweep past burn-in.
    pub perplexity_trace: Vec<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SentimentEvalFile {
    pub train_size: usize,
    pub test_size: usize,
    /// Labeled texts left with no token after preprocessing.
    pub dropped_empty: usize,
    pub metrics: EvalMetrics,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SentimentImportFile {
    pub accepted: usize,
    pub rejected: Vec<RejectedScore>,
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn open(path: &Path) -> Result<File, PipelineError> {
    match File::open(path) {
        Ok(f) => Ok(f),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(PipelineError::missing(path)),
        Err(e) => Err(PipelineError::io(path, e)),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, PipelineError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| PipelineError::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| PipelineError::io(path, e))
}

fn read_jsonl<T: DeserializeOwned>(stage: Stage, path: &Path) -> Result<Vec<T>, PipelineError> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(open(path)?).lines().enumerate() {
        let line = line.map_err(|e| PipelineError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(&line)
            .map_err(|e| PipelineError::validation(stage.name(), format!("{}:{}: {e}", file_name(path), i + 1)))?;
        out.push(row);
    }
    Ok(out)
}

fn read_json<T: DeserializeOwned>(stage: Stage, path: &Path) -> Result<T, PipelineError> {
    serde_json::from_reader(BufReader::new(open(path)?))
        .map_err(|e| PipelineError::validation(stage.name(), format!("{}: {e}", file_name(path))))
}

fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), PipelineError> {
    let mut w = create(path)?;
    for r in rows {
        serde_json::to_writer(&mut w, r).map_err(|e| PipelineError::io(path, e.into()))?;
        w.write_all(b"\n").map_err(|e| PipelineError::io(path, e))?;
    }
    w.flush().map_err(|e| PipelineError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), PipelineError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| PipelineError::io(path, e.into()))?;
    w.write_all(b"\n").map_err(|e| PipelineError::io(path, e))?;
    w.flush().map_err(|e| PipelineError::io(path, e))
}

/// A configured run: settings plus the loaded word tables.
#[derive(Debug, Clone)]
pub struct Pipeline {
    config: RunConfig,
    lexicon: Lexicon,
}

impl Pipeline {
    pub fn new(config: RunConfig) -> Result<Self, PipelineError> {
        config.validate()?;
        for p in [&config.stopwords, &config.suffixes].into_iter().flatten() {
            if !p.exists() {
                return Err(PipelineError::missing(p));
            }
        }
        let lexicon = Lexicon::from_files(config.stopwords.as_deref(), config.suffixes.as_deref())
            .map_err(|e| PipelineError::validation("config", format!("word tables: {e}")))?;
        Ok(Self { config, lexicon })
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn out_path(&self, name: &str) -> PathBuf {
        self.config.out_dir.join(name)
    }

    fn manifest(&self) -> Result<TagManifest, PipelineError> {
        let path = &self.config.manifest;
        if !path.exists() {
            return Err(PipelineError::missing(path));
        }
        load_tag_manifest(path).map_err(|e| PipelineError::validation("manifest", e.to_string()))
    }

    /// Runs one stage and times it.
    pub fn run_stage(&self, stage: Stage) -> Result<StageReport, PipelineError> {
        let start = Instant::now();
        let (artifacts, tallies) = match stage {
            Stage::Ingest => self.ingest()?,
            Stage::Clean => self.clean()?,
            Stage::Features => self.features()?,
            Stage::Topics => self.topics()?,
            Stage::Sentiment => self.sentiment()?,
            Stage::Report => self.report()?,
        };
        Ok(StageReport {
            stage,
            millis: start.elapsed().as_millis() as u64,
            artifacts: artifacts.into_iter().map(str::to_string).collect(),
            tallies,
        })
    }

    /// Every stage in order.
    pub fn run_all(&self) -> Result<RunReport, PipelineError> {
        let stages = Stage::ALL
            .into_iter()
            .map(|s| self.run_stage(s))
            .collect::<Result<Vec<_>, _>>()?;
        let prep = read_json::<PrepFile>(Stage::Report, &self.out_path(files::PREP_REPORT))?.report;
        Ok(RunReport {
            prep: Some(prep),
            stages,
        })
    }

    fn ingest(&self) -> StageResult {
        let stage = Stage::Ingest.name();
        let manifest = self.manifest()?;
        let mut inputs = Vec::new();
        let mut records = Vec::new();
        for path in &self.config.inputs {
            let format = RecordFormat::from_path(path).ok_or_else(|| {
                PipelineError::validation(stage, format!("{}: expected a .csv or .jsonl file", file_name(path)))
            })?;
            let parsed = parse_records(BufReader::new(open(path)?), format)
                .map_err(|e| PipelineError::validation(stage, format!("{}: {e}", file_name(path))))?;
            inputs.push(InputSummary {
                file: file_name(path),
                records: parsed.records.len(),
                errors: parsed.errors,
            });
            records.extend(parsed.records);
        }
        let filtered = filter_by_manifest(&records, &manifest);
        let report = IngestReport {
            parsed: records.len(),
            rejected: inputs.iter().map(|i| i.errors.len()).sum(),
            inputs,
            off_tag: filtered.off_tag,
            out_of_window: filtered.out_of_window,
            undated: filtered.undated,
            kept: filtered.kept.len(),
        };
        let raw = self.out_path(files::RAW);
        let w = create(&raw)?;
        write_records(&filtered.kept, RecordFormat::Jsonl, w)
            .map_err(|e| PipelineError::validation(stage, e.to_string()))?;
        write_json(&self.out_path(files::INGEST_REPORT), &report)?;
        Ok((
            vec![files::RAW, files::INGEST_REPORT],
            BTreeMap::from([
                ("parsed", report.parsed as u64),
                ("rejected", report.rejected as u64),
                ("off_tag", report.off_tag as u64),
                ("out_of_window", report.out_of_window as u64),
                ("kept", report.kept as u64),
            ]),
        ))
    }

    fn clean(&self) -> StageResult {
        let raw = self.out_path(files::RAW);
        let parsed = parse_records(BufReader::new(open(&raw)?), RecordFormat::Jsonl)
            .map_err(|e| PipelineError::validation("clean", e.to_string()))?;
        if let Some(e) = parsed.errors.first() {
            return Err(PipelineError::validation(
                "clean",
                format!("{}:{}: {}", files::RAW, e.line_number, e.detail),
            ));
        }
        let outcome = preprocess(parsed.records, &self.lexicon);
        write_jsonl(&self.out_path(files::CLEAN), &outcome.tweets)?;
        let r = outcome.report;
        write_json(
            &self.out_path(files::PREP_REPORT),
            &PrepFile {
                report: r,
                datetime_failures: outcome.datetime_failures,
            },
        )?;
        Ok((
            vec![files::CLEAN, files::PREP_REPORT],
            BTreeMap::from([
                ("input", r.input_count as u64),
                ("duplicates", r.duplicate_count as u64),
                ("empty_text", r.empty_text_count as u64),
                ("datetime_failures", r.datetime_failure_count as u64),
                ("output", r.output_count as u64),
            ]),
        ))
    }

    fn load_clean(&self, stage: Stage) -> Result<Vec<CleanTweet>, PipelineError> {
        read_jsonl(stage, &self.out_path(files::CLEAN))
    }

    fn features(&self) -> StageResult {
        let tweets = self.load_clean(Stage::Features)?;
        let rows: Vec<TweetFeatures> = tweets
            .iter()
            .map(|t| features_for(t, self.lexicon.stopwords()))
            .collect();
        let path = self.out_path(files::FEATURES_CSV);
        write_features_csv(&rows, create(&path)?).map_err(|e| PipelineError::io(&path, e.into()))?;
        write_jsonl(&self.out_path(files::FEATURES_JSONL), &rows)?;
        Ok((
            vec![files::FEATURES_CSV, files::FEATURES_JSONL],
            BTreeMap::from([("tweets", rows.len() as u64)]),
        ))
    }

    fn topics(&self) -> StageResult {
        let stage = Stage::Topics;
        let invalid = |e: crate::lda::LdaError| PipelineError::validation(stage.name(), e.to_string());
        let tweets = self.load_clean(stage)?;
        let docs: Vec<Vec<&str>> = tweets
            .iter()
            .map(|t| t.tokens.iter().map(String::as_str).collect())
            .collect();
        let settings = &self.config.lda;
        let vocab = build_vocabulary(&docs, settings.min_df, settings.max_df_ratio).map_err(invalid)?;
        let lda_config = settings.lda_config(self.config.seed);
        let (model, trace) = fit_lda_traced(&docs, &vocab, &lda_config).map_err(invalid)?;
        let perplexity = model.perplexity(&docs).map_err(invalid)?;

        let table = model.topic_table();
        table
            .to_writer(create(&self.out_path(files::TOPICS_JSON))?)
            .map_err(invalid)?;
        write_topics_csv(&table, settings.top_words, create(&self.out_path(files::TOPICS_CSV))?).map_err(invalid)?;
        let mut w = create(&self.out_path(files::TOPIC_ASSIGNMENTS))?;
        write_assignments(&model, &mut w).map_err(invalid)?;
        w.flush()
            .map_err(|e| PipelineError::io(&self.out_path(files::TOPIC_ASSIGNMENTS), e))?;

        let report = LdaReport {
            config: lda_config,
            vocabulary_size: vocab.len(),
            documents: docs.len(),
            fitted_documents: model.doc_index.len(),
            skipped_tweets: perplexity.skipped.iter().map(|&i| tweets[i].tweet_id.clone()).collect(),
            tokens: perplexity.tokens,
            perplexity: perplexity.value,
            perplexity_trace: trace,
            warnings: model.warnings.clone(),
        };
        write_json(&self.out_path(files::LDA_REPORT), &report)?;
        Ok((
            vec![
                files::TOPICS_JSON,
                files::TOPICS_CSV,
                files::TOPIC_ASSIGNMENTS,
                files::LDA_REPORT,
            ],
            BTreeMap::from([
                ("vocabulary", vocab.len() as u64),
                ("fitted_documents", report.fitted_documents as u64),
                ("skipped_documents", report.skipped_tweets.len() as u64),
                ("tokens", report.tokens as u64),
            ]),
        ))
    }

    fn sentiment(&self) -> StageResult {
        let stage = Stage::Sentiment.name();
        let invalid = |e: crate::sentiment::SentimentError| PipelineError::validation(stage, e.to_string());
        let tweets = self.load_clean(Stage::Sentiment)?;
        let s = &self.config.sentiment;
        let mut artifacts = vec![files::SENTIMENT];
        let mut tallies = BTreeMap::new();
        // outputs of the other modes would be stale
        for name in [files::SENTIMENT_MODEL, files::SENTIMENT_EVAL, files::SENTIMENT_IMPORT] {
            let p = self.out_path(name);
            if p.exists() {
                std::fs::remove_file(&p).map_err(|e| PipelineError::io(&p, e))?;
            }
        }

        let predict = |model: &SentimentModel| -> Vec<SentimentPrediction> {
            tweets
                .iter()
                .map(|t| model.predict_tweet(&t.tweet_id, &t.tokens))
                .collect()
        };
        let predictions = match s.mode {
            SentimentMode::Train => {
                let path = s.labeled.as_deref().expect("validated");
                let format = RecordFormat::from_path(path).ok_or_else(|| {
                    PipelineError::validation(stage, format!("{}: expected a .csv or .jsonl file", file_name(path)))
                })?;
                let texts = read_labeled_corpus(BufReader::new(open(path)?), format).map_err(invalid)?;
                let total = texts.len();
                let docs: Vec<LabeledDoc> = texts
                    .into_iter()
                    .map(|t| LabeledDoc {
                        tokens: tokenize(&t.text, &self.lexicon),
                        label: t.label,
                    })
                    .filter(|d| !d.tokens.is_empty())
                    .collect();
                let dropped_empty = total - docs.len();
                let (train_docs, test_docs) =
                    split_train_test(&docs, s.train_ratio, self.config.seed).map_err(invalid)?;
                let model = train(&train_docs, s.smoothing).map_err(invalid)?;
                let metrics = evaluate(&model, &test_docs).map_err(invalid)?;
                model
                    .to_writer(create(&self.out_path(files::SENTIMENT_MODEL))?)
                    .map_err(invalid)?;
                tallies.insert("train", train_docs.len() as u64);
                tallies.insert("test", test_docs.len() as u64);
                tallies.insert("dropped_empty", dropped_empty as u64);
                write_json(
                    &self.out_path(files::SENTIMENT_EVAL),
                    &SentimentEvalFile {
                        train_size: train_docs.len(),
                        test_size: test_docs.len(),
                        dropped_empty,
                        metrics,
                    },
                )?;
                artifacts.extend([files::SENTIMENT_MODEL, files::SENTIMENT_EVAL]);
                predict(&model)
            }
            SentimentMode::Apply => {
                let path = s.model.as_deref().expect("validated");
                let model = SentimentModel::from_reader(BufReader::new(open(path)?)).map_err(invalid)?;
                predict(&model)
            }
            SentimentMode::Import => {
                let path = s.scores.as_deref().expect("validated");
                let outcome = import_external_scores(open(path)?).map_err(invalid)?;
                tallies.insert("rejected", outcome.rejected.len() as u64);
                write_json(
                    &self.out_path(files::SENTIMENT_IMPORT),
                    &SentimentImportFile {
                        accepted: outcome.predictions.len(),
                        rejected: outcome.rejected,
                    },
                )?;
                artifacts.push(files::SENTIMENT_IMPORT);
                outcome.predictions
            }
        };
        tallies.insert("predictions", predictions.len() as u64);
        write_jsonl(&self.out_path(files::SENTIMENT), &predictions)?;
        Ok((artifacts, tallies))
    }
}

type StageResult = Result<(Vec<&'static str>, BTreeMap<&'static str, u64>), PipelineError>;
