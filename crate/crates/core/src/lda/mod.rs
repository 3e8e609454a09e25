//! LDA topic modeling by collapsed Gibbs sampling.

mod persist;
mod sampler;
mod vocab;

use serde::{Deserialize, Serialize};

pub use persist::{read_assignments, write_assignments, write_topics_csv, TopicTable};
pub use sampler::{fit_lda, fit_lda_traced, gibbs_conditional, LdaSampler};
pub use vocab::{build_vocabulary, Vocabulary};

pub const DEFAULT_TOPICS: usize = 15;
pub const DEFAULT_BETA: f64 = 0.01;
pub const DEFAULT_ITERATIONS: usize = 1000;

#[derive(Debug, thiserror::Error)]
pub enum LdaError {
    #[error("invalid LDA configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),
    #[error("vocabulary is empty (min_df = {min_df}, max_df_ratio = {max_df_ratio}); relax the thresholds")]
    EmptyVocabulary { min_df: usize, max_df_ratio: f64 },
    #[error("no document has an in-vocabulary token")]
    NoDocuments,
    #[error("topic {topic} out of range for K = {k}")]
    TopicOutOfRange { topic: usize, k: usize },
    #[error("expected {expected} documents, got {got}")]
    DocCountMismatch { expected: usize, got: usize },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad assignments file: {0}")]
    BadAssignments(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    /// Sweeps excluded from the perplexity trace of [`fit_lda_traced`].
    pub burn_in: usize,
    pub seed: u64,
}

impl LdaConfig {
    /// `k` topics with α = 50/K and the remaining defaults.
    pub fn with_topics(k: usize) -> Self {
        Self {
            k,
            alpha: 50.0 / k.max(1) as f64,
            beta: DEFAULT_BETA,
            iterations: DEFAULT_ITERATIONS,
            burn_in: 0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), LdaError> {
        let bad = |m: String| Err(LdaError::InvalidConfig(m));
        if self.k < 1 {
            return bad("K must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be positive, got {}", self.beta));
        }
        if self.iterations < 1 {
            return bad("iterations must be at least 1".into());
        }
        if self.burn_in > self.iterations {
            return bad("burn_in exceeds iterations".into());
        }
        if self.k > u32::MAX as usize {
            return bad("K too large".into());
        }
        Ok(())
    }
}

impl Default for LdaConfig {
    fn default() -> Self {
        Self::with_topics(DEFAULT_TOPICS)
    }
}

/// A fitted model. Immutable once built.
#[derive(Debug, Clone)]
pub struct LdaModel {
    pub config: LdaConfig,
    pub vocab: Vocabulary,
    /// K × V.
    pub phi: Vec<Vec<f64>>,
    /// One row per fitted document, K columns.
    pub theta: Vec<Vec<f64>>,
    pub assignments: Vec<Vec<u32>>,
    doc_topic: Vec<u32>,
    word_topic: Vec<u32>,
    topic_totals: Vec<u32>,
    /// Input position of each theta row.
    pub doc_index: Vec<usize>,
    /// Input positions of documents with no in-vocabulary token.
    pub skipped_docs: Vec<usize>,
    pub warnings: Vec<String>,
}

impl LdaModel {
    pub fn num_topics(&self) -> usize {
        self.config.k
    }

    pub fn doc_topic_count(&self, row: usize, k: usize) -> u32 {
        self.doc_topic[row * self.config.k + k]
    }

    pub fn topic_word_count(&self, k: usize, w: usize) -> u32 {
        self.word_topic[w * self.config.k + k]
    }

    pub fn topic_total(&self, k: usize) -> u32 {
        self.topic_totals[k]
    }

    pub fn top_words(&self, topic: usize, n: usize) -> Result<Vec<(String, f64)>, LdaError> {
        rank_words(&self.phi, &self.vocab, topic, n)
    }

    /// Perplexity of the documents the model was fitted on. `docs` must be
    /// the same list passed to [`fit_lda`].
    pub fn perplexity<S: AsRef<str>>(&self, docs: &[Vec<S>]) -> Result<PerplexityReport, LdaError> {
        let expected = self.doc_index.len() + self.skipped_docs.len();
        if docs.len() != expected {
            return Err(LdaError::DocCountMismatch {
                expected,
                got: docs.len(),
            });
        }
        let encoded: Vec<Vec<usize>> = self.doc_index.iter().map(|&i| self.vocab.encode(&docs[i])).collect();
        let mut report = perplexity_of(&self.theta, &self.phi, &encoded);
        report.skipped = report
            .skipped
            .iter()
            .map(|&row| self.doc_index[row])
            .chain(self.skipped_docs.iter().copied())
            .collect();
        report.skipped.sort_unstable();
        Ok(report)
    }

    pub fn topic_table(&self) -> TopicTable {
        TopicTable {
            config: self.config.clone(),
            vocabulary: self.vocab.clone(),
            phi: self.phi.clone(),
        }
    }
}

/// The `n` most probable words of a topic; ties go to the lexically smaller
/// word.
pub(crate) fn rank_words(
    phi: &[Vec<f64>],
    vocab: &Vocabulary,
    topic: usize,
    n: usize,
) -> Result<Vec<(String, f64)>, LdaError> {
    let row = phi
        .get(topic)
        .ok_or(LdaError::TopicOutOfRange { topic, k: phi.len() })?;
    let mut ids: Vec<usize> = (0..row.len()).collect();
    ids.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then_with(|| vocab.word(a).cmp(vocab.word(b))));
    Ok(ids
        .into_iter()
        .take(n)
        .map(|w| (vocab.word(w).to_string(), row[w]))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerplexityReport {
    pub value: f64,
    pub tokens: usize,
    /// Documents skipped for having no in-vocabulary token.
    pub skipped: Vec<usize>,
}

/// `exp(−Σ_d Σ_{w∈d} ln Σ_k θ_dk φ_kw / N)` over documents given as word ids;
/// `docs[d]` pairs with `theta[d]`. Empty documents are skipped.
pub fn perplexity_of(theta: &[Vec<f64>], phi: &[Vec<f64>], docs: &[Vec<usize>]) -> PerplexityReport {
    let mut log_lik = 0.0;
    let mut tokens = 0usize;
    let mut skipped = Vec::new();
    for (d, doc) in docs.iter().enumerate() {
        if doc.is_empty() {
            skipped.push(d);
            continue;
        }
        let th = &theta[d];
        for &w in doc {
            let p: f64 = th.iter().zip(phi).map(|(t, row)| t * row[w]).sum();
            log_lik += p.ln();
        }
        tokens += doc.len();
    }
    let value = if tokens == 0 {
        f64::NAN
    } else {
        (-log_lik / tokens as f64).exp()
    };
    PerplexityReport { value, tokens, skipped }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(d: &[&[&str]]) -> Vec<Vec<String>> {
        d.iter()
            .map(|doc| doc.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn config_defaults() {
        let c = LdaConfig::default();
        assert_eq!(c.k, 15);
        assert!((c.alpha - 50.0 / 15.0).abs() < 1e-15);
        assert_eq!(c.beta, 0.01);
        assert_eq!(c.iterations, 1000);
        c.validate().unwrap();
    }

    #[test]
    fn config_validation() {
        let mut c = LdaConfig::with_topics(2);
        c.alpha = 0.0;
        assert!(c.validate().is_err());
        let mut c = LdaConfig::with_topics(2);
        c.iterations = 0;
        assert!(c.validate().is_err());
        assert!(LdaConfig::with_topics(0).validate().is_err());
    }

    #[test]
    fn identical_one_word_docs_single_topic() {
        let docs = strs(&[&["deprem"], &["deprem"], &["deprem"]]);
        let vocab = build_vocabulary(&docs, 1, 1.0).unwrap();
        let mut cfg = LdaConfig::with_topics(1);
        cfg.iterations = 5;
        let m = fit_lda(&docs, &vocab, &cfg).unwrap();
        assert_eq!(m.phi, vec![vec![1.0]]);
        assert!(m.theta.iter().all(|row| row == &vec![1.0]));
        let p = m.perplexity(&docs).unwrap();
        assert!((p.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_model_perplexity_is_vocab_size() {
        let v = 7;
        let k = 3;
        let theta = vec![vec![1.0 / k as f64; k]; 4];
        let phi = vec![vec![1.0 / v as f64; v]; k];
        let docs = vec![vec![0, 1, 2], vec![6], vec![3, 3, 3, 3], vec![5, 4]];
        let p = perplexity_of(&theta, &phi, &docs);
        assert!((p.value - v as f64).abs() <= 1e-12 * v as f64);
        assert_eq!(p.tokens, 10);
    }

    #[test]
    fn top_words_tie_break_and_bounds() {
        let docs = strs(&[&["c", "b", "a"]]);
        let vocab = build_vocabulary(&docs, 1, 1.0).unwrap();
        let phi = vec![vec![1.0 / 3.0; 3]];
        let top = rank_words(&phi, &vocab, 0, 2).unwrap();
        assert_eq!(top.iter().map(|(w, _)| w.as_str()).collect::<Vec<_>>(), ["a", "b"]);
        assert_eq!(rank_words(&phi, &vocab, 0, 10).unwrap().len(), 3);
        assert!(matches!(
            rank_words(&phi, &vocab, 1, 1),
            Err(LdaError::TopicOutOfRange { topic: 1, k: 1 })
        ));
    }

    #[test]
    fn empty_docs_are_skipped_and_reported() {
        let docs = strs(&[&["a", "b"], &["zzz"], &["b", "a", "a"]]);
        let vocab = build_vocabulary(&docs, 2, 1.0).unwrap();
        let mut cfg = LdaConfig::with_topics(2);
        cfg.iterations = 3;
        let m = fit_lda(&docs, &vocab, &cfg).unwrap();
        assert_eq!(m.skipped_docs, [1]);
        assert_eq!(m.doc_index, [0, 2]);
        let p = m.perplexity(&docs).unwrap();
        assert_eq!(p.skipped, [1]);
        assert_eq!(p.tokens, 5);
    }

    #[test]
    fn too_many_topics_warns() {
        let docs = strs(&[&["a"]]);
        let vocab = build_vocabulary(&docs, 1, 1.0).unwrap();
        let mut cfg = LdaConfig::with_topics(4);
        cfg.iterations = 1;
        let m = fit_lda(&docs, &vocab, &cfg).unwrap();
        assert_eq!(m.warnings.len(), 1);
    }
}
