//! Three-class sentiment: a multinomial bag-of-words Bayes classifier with
//! additive smoothing, its evaluation protocol, and import of externally
//! computed class scores.

mod corpus;
mod eval;
mod external;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use corpus::{read_labeled_corpus, LabeledText};
pub use eval::{evaluate, split_train_test, ClassMetrics, EvalMetrics};
pub use external::{import_external_scores, ImportOutcome, RejectedScore, SCORE_SUM_TOLERANCE};

pub const DEFAULT_SMOOTHING: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentLabel {
    Negative,
    Neutral,
    Positive,
}

impl SentimentLabel {
    /// Also the tie-break order: earlier wins.
    pub const ALL: [SentimentLabel; 3] = [Self::Negative, Self::Neutral, Self::Positive];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Negative => "negative",
            Self::Neutral => "neutral",
            Self::Positive => "positive",
        }
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SentimentLabel {
    type Err = SentimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "negative" => Ok(Self::Negative),
            "neutral" => Ok(Self::Neutral),
            "positive" => Ok(Self::Positive),
            other => Err(SentimentError::UnknownLabel(other.to_string())),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SentimentError {
    #[error("unknown sentiment label {0:?}")]
    UnknownLabel(String),
    #[error("no training documents for class {0}")]
    MissingClass(SentimentLabel),
    #[error("class {label} has {count} documents; at least 2 are needed to split")]
    ClassTooSmall { label: SentimentLabel, count: usize },
    #[error("train ratio must lie strictly between 0 and 1, got {0}")]
    BadRatio(f64),
    #[error("smoothing must be positive, got {0}")]
    BadSmoothing(f64),
    #[error("training document {0} has no tokens")]
    EmptyDocument(usize),
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("labeled corpus line {line}: {detail}")]
    BadCorpusRow { line: u64, detail: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid model file: {0}")]
    BadModel(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledDoc {
    pub tokens: Vec<String>,
    pub label: SentimentLabel,
}

/// Per-class values in label order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub negative: f64,
    pub neutral: f64,
    pub positive: f64,
}

impl ClassScores {
    pub fn from_array(a: [f64; 3]) -> Self {
        Self {
            negative: a[0],
            neutral: a[1],
            positive: a[2],
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.negative, self.neutral, self.positive]
    }

    pub fn get(&self, label: SentimentLabel) -> f64 {
        self.to_array()[label.index()]
    }

    /// Highest score; ties go to the earlier label.
    pub fn argmax(&self) -> SentimentLabel {
        let a = self.to_array();
        let mut best = 0;
        for i in 1..3 {
            if a[i] > a[best] {
                best = i;
            }
        }
        SentimentLabel::ALL[best]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentPrediction {
    pub tweet_id: String,
    pub label: SentimentLabel,
    pub scores: ClassScores,
}

/// Trained classifier. Immutable after training.
#[derive(Debug, Clone, PartialEq)]
pub struct SentimentModel {
    class_log_priors: [f64; 3],
    /// `[class][word id]`.
    word_log_likelihoods: [Vec<f64>; 3],
    vocabulary: Vec<String>,
    index: HashMap<String, usize>,
    smoothing: f64,
    class_doc_counts: [usize; 3],
}

/// Counts documents and tokens per class, then estimates
/// `P(w|c) = (n_cw + a) / (n_c + aV)` over the union vocabulary.
fn fit(docs: &[LabeledDoc], smoothing: f64) -> Result<SentimentModel, SentimentError> {
    if !(smoothing > 0.0 && smoothing.is_finite()) {
        return Err(SentimentError::BadSmoothing(smoothing));
    }
    if let Some(i) = docs.iter().position(|d| d.tokens.is_empty()) {
        return Err(SentimentError::EmptyDocument(i));
    }
    let vocabulary: Vec<String> = docs
        .iter()
        .flat_map(|d| d.tokens.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: HashMap<String, usize> = vocabulary.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let v = vocabulary.len();

    let mut doc_counts = [0usize; 3];
    let mut word_counts = [vec![0u64; v], vec![0u64; v], vec![0u64; v]];
    let mut totals = [0u64; 3];
    for d in docs {
        let c = d.label.index();
        doc_counts[c] += 1;
        for t in &d.tokens {
            word_counts[c][index[t]] += 1;
            totals[c] += 1;
        }
    }

    let n_docs = docs.len() as f64;
    let class_log_priors = doc_counts.map(|n| (n as f64 / n_docs).ln());
    let denom = |c: usize| totals[c] as f64 + smoothing * v as f64;
    let word_log_likelihoods = [0, 1, 2].map(|c| {
        word_counts[c]
            .iter()
            .map(|&n| ((n as f64 + smoothing) / denom(c)).ln())
            .collect()
    });
    Ok(SentimentModel {
        class_log_priors,
        word_log_likelihoods,
        vocabulary,
        index,
        smoothing,
        class_doc_counts: doc_counts,
    })
}

/// Trains on documents covering all three classes.
pub fn train(docs: &[LabeledDoc], smoothing: f64) -> Result<SentimentModel, SentimentError> {
    for label in SentimentLabel::ALL {
        if !docs.iter().any(|d| d.label == label) {
            return Err(SentimentError::MissingClass(label));
        }
    }
    fit(docs, smoothing)
}

/// Trains even when some classes have no documents; those classes get a zero
/// prior and never win a prediction.
pub fn train_allowing_missing(docs: &[LabeledDoc], smoothing: f64) -> Result<SentimentModel, SentimentError> {
    if docs.is_empty() {
        return Err(SentimentError::MissingClass(SentimentLabel::Negative));
    }
    fit(docs, smoothing)
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    smoothing: f64,
    vocabulary: Vec<String>,
    class_doc_counts: [usize; 3],
    priors: ClassScores,
    log_likelihoods: PerClass<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct PerClass<T> {
    negative: T,
    neutral: T,
    positive: T,
}

impl SentimentModel {
    pub fn smoothing(&self) -> f64 {
        self.smoothing
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn class_log_prior(&self, label: SentimentLabel) -> f64 {
        self.class_log_priors[label.index()]
    }

    /// `ln P(word | label)`, or `None` for out-of-vocabulary words.
    pub fn word_log_likelihood(&self, label: SentimentLabel, word: &str) -> Option<f64> {
        self.index
            .get(word)
            .map(|&i| self.word_log_likelihoods[label.index()][i])
    }

    /// Posterior over classes; out-of-vocabulary tokens are ignored.
    pub fn posterior<S: AsRef<str>>(&self, tokens: &[S]) -> ClassScores {
        let mut log = self.class_log_priors;
        for t in tokens {
            if let Some(&i) = self.index.get(t.as_ref()) {
                for (c, l) in log.iter_mut().enumerate() {
                    *l += self.word_log_likelihoods[c][i];
                }
            }
        }
        let max = log.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exp = log.map(|l| if l == f64::NEG_INFINITY { 0.0 } else { (l - max).exp() });
        let z: f64 = exp.iter().sum();
        ClassScores::from_array(exp.map(|e| e / z))
    }

    pub fn predict<S: AsRef<str>>(&self, tokens: &[S]) -> (SentimentLabel, ClassScores) {
        let scores = self.posterior(tokens);
        (scores.argmax(), scores)
    }

    pub fn predict_tweet<S: AsRef<str>>(&self, tweet_id: &str, tokens: &[S]) -> SentimentPrediction {
        let (label, scores) = self.predict(tokens);
        SentimentPrediction {
            tweet_id: tweet_id.to_string(),
            label,
            scores,
        }
    }

    pub fn to_writer<W: Write>(&self, mut out: W) -> Result<(), SentimentError> {
        let [neg, neu, pos] = &self.word_log_likelihoods;
        let file = ModelFile {
            smoothing: self.smoothing,
            vocabulary: self.vocabulary.clone(),
            class_doc_counts: self.class_doc_counts,
            priors: ClassScores::from_array(self.class_log_priors.map(f64::exp)),
            log_likelihoods: PerClass {
                negative: neg.clone(),
                neutral: neu.clone(),
                positive: pos.clone(),
            },
        };
        serde_json::to_writer(&mut out, &file)?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn from_reader<R: Read>(input: R) -> Result<Self, SentimentError> {
        let f: ModelFile = serde_json::from_reader(input)?;
        let v = f.vocabulary.len();
        let ll = [
            f.log_likelihoods.negative,
            f.log_likelihoods.neutral,
            f.log_likelihoods.positive,
        ];
        if ll.iter().any(|row| row.len() != v) {
            return Err(SentimentError::BadModel(
                "log-likelihood length differs from vocabulary".into(),
            ));
        }
        let index: HashMap<String, usize> = f.vocabulary.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        if index.len() != v {
            return Err(SentimentError::BadModel("duplicate vocabulary entry".into()));
        }
        Ok(Self {
            class_log_priors: f.priors.to_array().map(f64::ln),
            word_log_likelihoods: ll,
            vocabulary: f.vocabulary,
            index,
            smoothing: f.smoothing,
            class_doc_counts: f.class_doc_counts,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SentimentLabel::*;

    pub(crate) fn doc(text: &str, label: SentimentLabel) -> LabeledDoc {
        LabeledDoc {
            tokens: text.split_whitespace().map(str::to_string).collect(),
            label,
        }
    }

    #[test]
    fn hand_computed_two_class_model() {
        let m = train_allowing_missing(
            &[
                doc("iyi güzel", Positive),
                doc("güzel", Positive),
                doc("kötü", Negative),
            ],
            1.0,
        )
        .unwrap();
        let p = m.word_log_likelihood(Positive, "güzel").unwrap().exp();
        assert!((p - 0.5).abs() < 1e-15);
        let (label, s) = m.predict(&["güzel"]);
        assert_eq!(label, Positive);
        // 1/3 vs 1/12 before normalization
        assert!((s.positive - 0.8).abs() < 1e-12);
        assert!((s.negative - 0.2).abs() < 1e-12);
        assert_eq!(s.neutral, 0.0);
    }

    #[test]
    fn strict_training_names_missing_class() {
        let e = train(&[doc("a", Positive), doc("b", Negative)], 1.0).unwrap_err();
        assert!(matches!(e, SentimentError::MissingClass(Neutral)));
        assert!(matches!(
            train(&[doc("a", Positive), doc("b", Negative), doc("c", Neutral)], 0.0),
            Err(SentimentError::BadSmoothing(_))
        ));
    }

    #[test]
    fn own_words_are_more_likely_in_own_class() {
        let m = train(&[doc("a", Negative), doc("b", Neutral), doc("c", Positive)], 1.0).unwrap();
        for (w, own) in [("a", Negative), ("b", Neutral), ("c", Positive)] {
            for other in SentimentLabel::ALL {
                if other != own {
                    assert!(m.word_log_likelihood(own, w) > m.word_log_likelihood(other, w));
                }
            }
        }
    }

    #[test]
    fn duplicate_doc_equals_double_weight() {
        let base = [doc("a b", Negative), doc("c", Neutral), doc("d", Positive)];
        let dup: Vec<_> = base.iter().cloned().chain([base[0].clone()]).collect();
        let doubled = [doc("a b a b", Negative), doc("c", Neutral), doc("d", Positive)];
        let m1 = train(&dup, 1.0).unwrap();
        let m2 = train(&doubled, 1.0).unwrap();
        // same word statistics: (2+1)/(4+4) for "a" in negative
        for w in ["a", "b", "c", "d"] {
            for l in SentimentLabel::ALL {
                assert_eq!(m1.word_log_likelihood(l, w), m2.word_log_likelihood(l, w));
            }
        }
        assert!((m1.word_log_likelihood(Negative, "a").unwrap().exp() - 3.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn empty_and_oov_inputs_return_priors() {
        let m = train(
            &[
                doc("a", Negative),
                doc("b", Neutral),
                doc("c", Positive),
                doc("c c", Positive),
            ],
            1.0,
        )
        .unwrap();
        let empty: [&str; 0] = [];
        let (l, s) = m.predict(&empty);
        assert_eq!(l, Positive);
        assert!((s.positive - 0.5).abs() < 1e-15);
        assert_eq!(m.predict(&["zzz", "yyy"]), (l, s));
    }

    #[test]
    fn tie_goes_to_earlier_label() {
        assert_eq!(ClassScores::from_array([0.4, 0.4, 0.2]).argmax(), Negative);
        assert_eq!(ClassScores::from_array([0.2, 0.4, 0.4]).argmax(), Neutral);
        assert_eq!(ClassScores::from_array([1.0 / 3.0; 3]).argmax(), Negative);
    }

    #[test]
    fn model_file_round_trip() {
        let m = train(&[doc("a x", Negative), doc("b", Neutral), doc("c x", Positive)], 0.5).unwrap();
        let mut buf = Vec::new();
        m.to_writer(&mut buf).unwrap();
        let back = SentimentModel::from_reader(&buf[..]).unwrap();
        assert_eq!(back.vocabulary(), m.vocabulary());
        let (l1, s1) = m.predict(&["x", "a"]);
        let (l2, s2) = back.predict(&["x", "a"]);
        assert_eq!(l1, l2);
        for (a, b) in s1.to_array().iter().zip(s2.to_array()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn labels_serialize_as_strings() {
        assert_eq!(serde_json::to_string(&Neutral).unwrap(), "\"neutral\"");
        assert_eq!("positive".parse::<SentimentLabel>().unwrap(), Positive);
        assert!("Positive".parse::<SentimentLabel>().is_err());
    }
}
