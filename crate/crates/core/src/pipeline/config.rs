use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::lda::LdaConfig;
use crate::sentiment::DEFAULT_SMOOTHING;

use super::PipelineError;

pub const CONFIG_ENV: &str = "CRISIS_PULSE_CONFIG";

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopicSettings {
    #[serde(default = "default_k")]
    pub k: usize,
    /// Defaults to 50/K.
    pub alpha: Option<f64>,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default)]
    pub burn_in: usize,
    #[serde(default = "default_min_df")]
    pub min_df: usize,
    #[serde(default = "default_max_df_ratio")]
    pub max_df_ratio: f64,
    #[serde(default = "default_top_words")]
    pub top_words: usize,
}

fn default_k() -> usize {
    crate::lda::DEFAULT_TOPICS
}
fn default_beta() -> f64 {
    crate::lda::DEFAULT_BETA
}
fn default_iterations() -> usize {
    crate::lda::DEFAULT_ITERATIONS
}
fn default_min_df() -> usize {
    2
}
fn default_max_df_ratio() -> f64 {
    0.5
}
fn default_top_words() -> usize {
    10
}
fn default_train_ratio() -> f64 {
    0.9
}
fn default_smoothing() -> f64 {
    DEFAULT_SMOOTHING
}

impl Default for TopicSettings {
    fn default() -> Self {
        Self {
            k: default_k(),
            alpha: None,
            beta: default_beta(),
            iterations: default_iterations(),
            burn_in: 0,
            min_df: default_min_df(),
            max_df_ratio: default_max_df_ratio(),
            top_words: default_top_words(),
        }
    }
}

impl TopicSettings {
    pub fn lda_config(&self, seed: u64) -> LdaConfig {
        let mut c = LdaConfig::with_topics(self.k);
        if let Some(a) = self.alpha {
            c.alpha = a;
        }
        c.beta = self.beta;
        c.iterations = self.iterations;
        c.burn_in = self.burn_in;
        c.seed = seed;
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentMode {
    /// Train on a labeled corpus, evaluate on a held-out split, classify.
    Train,
    /// Classify with a previously saved model.
    Apply,
    /// Take class scores computed elsewhere.
    Import,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SentimentSettings {
    pub mode: SentimentMode,
    pub labeled: Option<PathBuf>,
    #[serde(default = "default_train_ratio")]
    pub train_ratio: f64,
    #[serde(default = "default_smoothing")]
    pub smoothing: f64,
    pub model: Option<PathBuf>,
    pub scores: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub manifest: PathBuf,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    pub stopwords: Option<PathBuf>,
    pub suffixes: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub lda: TopicSettings,
    pub sentiment: SentimentSettings,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    /// Parses a config; relative paths are taken relative to `base`.
    pub fn from_toml_str(text: &str, base: &Path) -> Result<Self, PipelineError> {
        let mut c: RunConfig = toml::from_str(text).map_err(|e| PipelineError::validation("config", e.to_string()))?;
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        c.inputs.iter_mut().for_each(rebase);
        rebase(&mut c.manifest);
        rebase(&mut c.out_dir);
        for p in [
            c.stopwords.as_mut(),
            c.suffixes.as_mut(),
            c.sentiment.labeled.as_mut(),
            c.sentiment.model.as_mut(),
            c.sentiment.scores.as_mut(),
        ]
        .into_iter()
        .flatten()
        {
            rebase(p);
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => PipelineError::missing(path),
            _ => PipelineError::io(path, e),
        })?;
        Self::from_toml_str(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::validation("config", m));
        if self.inputs.is_empty() {
            return bad("`inputs` lists no files".into());
        }
        self.lda
            .lda_config(self.seed)
            .validate()
            .map_err(|e| PipelineError::validation("config", e.to_string()))?;
        if self.lda.top_words == 0 {
            return bad("lda.top_words must be at least 1".into());
        }
        let s = &self.sentiment;
        let given = [
            ("labeled", s.labeled.is_some(), SentimentMode::Train),
            ("model", s.model.is_some(), SentimentMode::Apply),
            ("scores", s.scores.is_some(), SentimentMode::Import),
        ];
        for (field, present, mode) in given {
            if present != (s.mode == mode) {
                let need = if present { "must not be set" } else { "is required" };
                return bad(format!("sentiment.{field} {need} in {:?} mode", s.mode).to_lowercase());
            }
        }
        if !(s.train_ratio > 0.0 && s.train_ratio < 1.0) {
            return bad(format!(
                "sentiment.train_ratio must lie in (0, 1), got {}",
                s.train_ratio
            ));
        }
        if !(s.smoothing > 0.0 && s.smoothing.is_finite()) {
            return bad(format!("sentiment.smoothing must be positive, got {}", s.smoothing));
        }
        Ok(())
    }
}
