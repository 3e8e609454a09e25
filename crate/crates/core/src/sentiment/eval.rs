use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{LabeledDoc, SentimentError, SentimentLabel, SentimentModel};

/// Stratified split: each class is shuffled under `seed` and
/// `round(n · train_ratio)` of its documents (kept within `1..n`) go to
/// training. Both halves keep input order.
pub fn split_train_test(
    docs: &[LabeledDoc],
    train_ratio: f64,
    seed: u64,
) -> Result<(Vec<LabeledDoc>, Vec<LabeledDoc>), SentimentError> {
    if !(train_ratio > 0.0 && train_ratio < 1.0) {
        return Err(SentimentError::BadRatio(train_ratio));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_train = vec![false; docs.len()];
    for label in SentimentLabel::ALL {
        let mut idx: Vec<usize> = (0..docs.len()).filter(|&i| docs[i].label == label).collect();
        let n = idx.len();
        if n < 2 {
            return Err(SentimentError::ClassTooSmall { label, count: n });
        }
        let n_train = ((n as f64 * train_ratio).round() as usize).clamp(1, n - 1);
        idx.shuffle(&mut rng);
        for &i in &idx[..n_train] {
            in_train[i] = true;
        }
    }
    let (train, test): (Vec<_>, Vec<_>) = docs.iter().zip(in_train).partition(|(_, t)| *t);
    Ok((
        train.into_iter().map(|(d, _)| d.clone()).collect(),
        test.into_iter().map(|(d, _)| d.clone()).collect(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalMetrics {
    pub accuracy: f64,
    pub negative: ClassMetrics,
    pub neutral: ClassMetrics,
    pub positive: ClassMetrics,
    /// `confusion[actual][predicted]`, label order negative, neutral, positive.
    pub confusion: [[u64; 3]; 3],
    pub total: u64,
}

impl EvalMetrics {
    /// Metrics from (actual, predicted) pairs. Undefined ratios are 0.
    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (SentimentLabel, SentimentLabel)>,
    ) -> Result<Self, SentimentError> {
        let mut confusion = [[0u64; 3]; 3];
        for (a, p) in pairs {
            confusion[a.index()][p.index()] += 1;
        }
        let total: u64 = confusion.iter().flatten().sum();
        if total == 0 {
            return Err(SentimentError::EmptyTestSet);
        }
        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let class = |c: usize| {
            let tp = confusion[c][c];
            let support: u64 = confusion[c].iter().sum();
            let predicted: u64 = (0..3).map(|r| confusion[r][c]).sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support);
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            ClassMetrics {
                precision,
                recall,
                f1,
                support,
            }
        };
        let trace: u64 = (0..3).map(|c| confusion[c][c]).sum();
        Ok(Self {
            accuracy: trace as f64 / total as f64,
            negative: class(0),
            neutral: class(1),
            positive: class(2),
            confusion,
            total,
        })
    }

    pub fn class(&self, label: SentimentLabel) -> &ClassMetrics {
        match label {
            SentimentLabel::Negative => &self.negative,
            SentimentLabel::Neutral => &self.neutral,
            SentimentLabel::Positive => &self.positive,
        }
    }
}

pub fn evaluate(model: &SentimentModel, test: &[LabeledDoc]) -> Result<EvalMetrics, SentimentError> {
    EvalMetrics::from_pairs(test.iter().map(|d| (d.label, model.predict(&d.tokens).0)))
}
