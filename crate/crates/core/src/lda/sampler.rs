//! Collapsed Gibbs sampler.
//!
//! Randomness comes from ChaCha8 seeded through `SeedableRng::seed_from_u64`.
//! Initial topics are drawn with `random_range(0..K)`; each resampling step
//! draws one `f64` in `[0, 1)`, scales it by the unnormalized weight total
//! and walks the cumulative weights in topic order. Documents and positions
//! are visited in input order, so a seed fixes the whole chain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{LdaConfig, LdaError, LdaModel, Vocabulary};

/// Full conditional over topics for one token whose own assignment has
/// already been removed from the counts:
/// `p(k) ∝ (n_dk + α)(n_kw + β) / (n_k + Vβ)`.
///
/// `doc_topic[k]` is `n_dk` for the token's document, `word_topic[k]` is
/// `n_kw` for its word and `topic_totals[k]` is `n_k`.
pub fn gibbs_conditional(
    doc_topic: &[u32],
    word_topic: &[u32],
    topic_totals: &[u32],
    vocab_size: usize,
    alpha: f64,
    beta: f64,
) -> Vec<f64> {
    let mut p = vec![0.0; topic_totals.len()];
    let total = conditional_weights(
        doc_topic,
        word_topic,
        topic_totals,
        vocab_size as f64 * beta,
        alpha,
        beta,
        &mut p,
    );
    for x in &mut p {
        *x /= total;
    }
    p
}

/// Writes the unnormalized weights into `out` and returns their sum.
#[inline]
fn conditional_weights(
    doc_topic: &[u32],
    word_topic: &[u32],
    topic_totals: &[u32],
    v_beta: f64,
    alpha: f64,
    beta: f64,
    out: &mut [f64],
) -> f64 {
    let mut total = 0.0;
    for k in 0..out.len() {
        let w = (doc_topic[k] as f64 + alpha) * (word_topic[k] as f64 + beta) / (topic_totals[k] as f64 + v_beta);
        out[k] = w;
        total += w;
    }
    total
}

/// Sampler state: assignments plus the three count tables.
pub struct LdaSampler {
    config: LdaConfig,
    vocab: Vocabulary,
    /// Word ids of every fitted document.
    docs: Vec<Vec<u32>>,
    /// Position of each fitted document in the caller's input list.
    doc_index: Vec<usize>,
    skipped_docs: Vec<usize>,
    z: Vec<Vec<u32>>,
    /// D × K, row-major.
    doc_topic: Vec<u32>,
    /// V × K, word-major so one word's topic counts are contiguous.
    word_topic: Vec<u32>,
    topic_totals: Vec<u32>,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
    sweeps: usize,
    warnings: Vec<String>,
}

impl LdaSampler {
    /// Encodes documents through `vocab` and draws initial assignments.
    /// Documents left empty by the vocabulary are skipped and listed in
    /// [`LdaModel::skipped_docs`].
    pub fn new<S: AsRef<str>>(docs: &[Vec<S>], vocab: &Vocabulary, config: &LdaConfig) -> Result<Self, LdaError> {
        config.validate()?;
        if vocab.is_empty() {
            return Err(LdaError::EmptyVocabulary {
                min_df: 0,
                max_df_ratio: 0.0,
            });
        }
        let k = config.k;
        let mut encoded = Vec::new();
        let mut doc_index = Vec::new();
        let mut skipped_docs = Vec::new();
        for (i, doc) in docs.iter().enumerate() {
            let ids: Vec<u32> = vocab.encode(doc).into_iter().map(|w| w as u32).collect();
            if ids.is_empty() {
                skipped_docs.push(i);
            } else {
                encoded.push(ids);
                doc_index.push(i);
            }
        }
        if encoded.is_empty() {
            return Err(LdaError::NoDocuments);
        }

        let total_tokens: usize = encoded.iter().map(Vec::len).sum();
        let mut warnings = Vec::new();
        if k > total_tokens {
            warnings.push(format!("K = {k} exceeds the {total_tokens} tokens in the corpus"));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut doc_topic = vec![0u32; encoded.len() * k];
        let mut word_topic = vec![0u32; vocab.len() * k];
        let mut topic_totals = vec![0u32; k];
        let mut z = Vec::with_capacity(encoded.len());
        for (d, doc) in encoded.iter().enumerate() {
            let zd: Vec<u32> = doc
                .iter()
                .map(|&w| {
                    let t = rng.random_range(0..k);
                    doc_topic[d * k + t] += 1;
                    word_topic[w as usize * k + t] += 1;
                    topic_totals[t] += 1;
                    t as u32
                })
                .collect();
            z.push(zd);
        }

        Ok(Self {
            config: config.clone(),
            vocab: vocab.clone(),
            docs: encoded,
            doc_index,
            skipped_docs,
            z,
            doc_topic,
            word_topic,
            topic_totals,
            rng,
            weights: vec![0.0; k],
            sweeps: 0,
            warnings,
        })
    }

    /// Resamples every token once.
    pub fn sweep(&mut self) {
        let k = self.config.k;
        let (alpha, beta) = (self.config.alpha, self.config.beta);
        let v_beta = self.vocab.len() as f64 * beta;
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i] as usize;
                let old = self.z[d][i] as usize;
                let dt = d * k;
                let wt = w * k;
                self.doc_topic[dt + old] -= 1;
                self.word_topic[wt + old] -= 1;
                self.topic_totals[old] -= 1;

                let total = conditional_weights(
                    &self.doc_topic[dt..dt + k],
                    &self.word_topic[wt..wt + k],
                    &self.topic_totals,
                    v_beta,
                    alpha,
                    beta,
                    &mut self.weights,
                );
                let u = self.rng.random::<f64>() * total;
                let mut acc = 0.0;
                let mut new = k - 1;
                for (t, &p) in self.weights.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        new = t;
                        break;
                    }
                }

                self.z[d][i] = new as u32;
                self.doc_topic[dt + new] += 1;
                self.word_topic[wt + new] += 1;
                self.topic_totals[new] += 1;
            }
        }
        self.sweeps += 1;
        debug_assert!(self.check_invariants().is_ok());
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn assignments(&self) -> &[Vec<u32>] {
        &self.z
    }

    pub fn doc_topic_count(&self, d: usize, k: usize) -> u32 {
        self.doc_topic[d * self.config.k + k]
    }

    pub fn topic_word_count(&self, k: usize, w: usize) -> u32 {
        self.word_topic[w * self.config.k + k]
    }

    pub fn topic_total(&self, k: usize) -> u32 {
        self.topic_totals[k]
    }

    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    /// Verifies `Σ_k n_dk = |d|`, `Σ_w n_kw = n_k`, and that all three
    /// tables equal a recount from the assignments.
    pub fn check_invariants(&self) -> Result<(), String> {
        let k = self.config.k;
        let v = self.vocab.len();
        for (d, doc) in self.docs.iter().enumerate() {
            let row: u64 = self.doc_topic[d * k..(d + 1) * k].iter().map(|&c| c as u64).sum();
            if row != doc.len() as u64 {
                return Err(format!("doc {d}: topic counts sum to {row}, length {}", doc.len()));
            }
        }
        for t in 0..k {
            let col: u64 = (0..v).map(|w| self.word_topic[w * k + t] as u64).sum();
            if col != self.topic_totals[t] as u64 {
                return Err(format!(
                    "topic {t}: word counts sum to {col}, total {}",
                    self.topic_totals[t]
                ));
            }
        }
        let mut doc_topic = vec![0u32; self.doc_topic.len()];
        let mut word_topic = vec![0u32; self.word_topic.len()];
        let mut totals = vec![0u32; k];
        for (d, (doc, zd)) in self.docs.iter().zip(&self.z).enumerate() {
            for (&w, &t) in doc.iter().zip(zd) {
                let t = t as usize;
                doc_topic[d * k + t] += 1;
                word_topic[w as usize * k + t] += 1;
                totals[t] += 1;
            }
        }
        if doc_topic != self.doc_topic || word_topic != self.word_topic || totals != self.topic_totals {
            return Err("count tables disagree with assignments".into());
        }
        Ok(())
    }

    /// Smoothed topic-word distributions, K × V.
    pub fn phi(&self) -> Vec<Vec<f64>> {
        let k = self.config.k;
        let v = self.vocab.len();
        let beta = self.config.beta;
        (0..k)
            .map(|t| {
                let denom = self.topic_totals[t] as f64 + v as f64 * beta;
                (0..v)
                    .map(|w| (self.word_topic[w * k + t] as f64 + beta) / denom)
                    .collect()
            })
            .collect()
    }

    /// Smoothed document-topic distributions, D × K.
    pub fn theta(&self) -> Vec<Vec<f64>> {
        let k = self.config.k;
        let alpha = self.config.alpha;
        self.docs
            .iter()
            .enumerate()
            .map(|(d, doc)| {
                let denom = doc.len() as f64 + k as f64 * alpha;
                (0..k)
                    .map(|t| (self.doc_topic[d * k + t] as f64 + alpha) / denom)
                    .collect()
            })
            .collect()
    }

    /// Perplexity of the fitted documents under the current smoothed
    /// estimates.
    pub fn training_perplexity(&self) -> f64 {
        let docs: Vec<Vec<usize>> = self
            .docs
            .iter()
            .map(|d| d.iter().map(|&w| w as usize).collect())
            .collect();
        super::perplexity_of(&self.theta(), &self.phi(), &docs).value
    }

    pub fn into_model(self) -> LdaModel {
        let phi = self.phi();
        let theta = self.theta();
        LdaModel {
            config: self.config,
            vocab: self.vocab,
            phi,
            theta,
            assignments: self.z,
            doc_topic: self.doc_topic,
            word_topic: self.word_topic,
            topic_totals: self.topic_totals,
            doc_index: self.doc_index,
            skipped_docs: self.skipped_docs,
            warnings: self.warnings,
        }
    }
}

/// Fits a model with `config.iterations` full sweeps.
pub fn fit_lda<S: AsRef<str>>(docs: &[Vec<S>], vocab: &Vocabulary, config: &LdaConfig) -> Result<LdaModel, LdaError> {
    let mut sampler = LdaSampler::new(docs, vocab, config)?;
    for _ in 0..config.iterations {
        sampler.sweep();
    }
    Ok(sampler.into_model())
}

/// Like [`fit_lda`], also returning the training perplexity after each
/// sweep past `config.burn_in`.
pub fn fit_lda_traced<S: AsRef<str>>(
    docs: &[Vec<S>],
    vocab: &Vocabulary,
    config: &LdaConfig,
) -> Result<(LdaModel, Vec<f64>), LdaError> {
    let mut sampler = LdaSampler::new(docs, vocab, config)?;
    let mut trace = Vec::with_capacity(config.iterations.saturating_sub(config.burn_in));
    for i in 0..config.iterations {
        sampler.sweep();
        if i >= config.burn_in {
            trace.push(sampler.training_perplexity());
        }
    }
    Ok((sampler.into_model(), trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_counts_give_uniform() {
        let p = gibbs_conditional(&[3, 3], &[2, 2], &[10, 10], 5, 0.1, 0.01);
        assert_eq!(p, vec![0.5, 0.5]);
    }

    #[test]
    fn hand_evaluated_conditional() {
        let p = gibbs_conditional(&[2, 0], &[1, 0], &[4, 1], 3, 1.0, 1.0);
        let (a, b) = (6.0 / 7.0, 1.0 / 4.0);
        assert!((p[0] - a / (a + b)).abs() < 1e-15);
        assert!((p[1] - b / (a + b)).abs() < 1e-15);
    }

    #[test]
    fn single_topic_is_certain() {
        assert_eq!(gibbs_conditional(&[0], &[0], &[0], 4, 0.5, 0.1), vec![1.0]);
    }
}
