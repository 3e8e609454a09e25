use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Deserializer, Serialize};

use super::LdaError;

/// Dense word ids ordered by descending document frequency, then word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Vocabulary {
    words: Vec<String>,
    doc_freq: Vec<usize>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Builds from `(word, doc_freq)` pairs already in id order.
    pub fn from_parts(words: Vec<String>, doc_freq: Vec<usize>) -> Result<Self, LdaError> {
        if words.len() != doc_freq.len() {
            return Err(LdaError::InvalidVocabulary("words and doc_freq lengths differ".into()));
        }
        let index: HashMap<String, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        if index.len() != words.len() {
            return Err(LdaError::InvalidVocabulary("duplicate word".into()));
        }
        Ok(Self { words, doc_freq, index })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, id: usize) -> &str {
        &self.words[id]
    }

    pub fn id(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn doc_freq(&self, id: usize) -> usize {
        self.doc_freq[id]
    }

    /// Maps tokens to ids, dropping out-of-vocabulary ones.
    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<usize> {
        tokens.iter().filter_map(|t| self.id(t.as_ref())).collect()
    }
}

impl<'de> Deserialize<'de> for Vocabulary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Parts {
            words: Vec<String>,
            doc_freq: Vec<usize>,
        }
        let p = Parts::deserialize(d)?;
        Self::from_parts(p.words, p.doc_freq).map_err(serde::de::Error::custom)
    }
}

/// Keeps words occurring in at least `min_df` documents and at most
/// `max_df_ratio` of all documents.
pub fn build_vocabulary<S: AsRef<str>>(
    docs: &[Vec<S>],
    min_df: usize,
    max_df_ratio: f64,
) -> Result<Vocabulary, LdaError> {
    if min_df < 1 {
        return Err(LdaError::InvalidVocabulary("min_df must be at least 1".into()));
    }
    if !(max_df_ratio > 0.0 && max_df_ratio <= 1.0) {
        return Err(LdaError::InvalidVocabulary(format!(
            "max_df_ratio must lie in (0, 1], got {max_df_ratio}"
        )));
    }
    let mut df: HashMap<&str, usize> = HashMap::new();
    for doc in docs {
        let distinct: HashSet<&str> = doc.iter().map(AsRef::as_ref).collect();
        for w in distinct {
            *df.entry(w).or_default() += 1;
        }
    }
    let max_df = max_df_ratio * docs.len() as f64;
    let mut kept: Vec<(&str, usize)> = df
        .into_iter()
        .filter(|&(_, n)| n >= min_df && n as f64 <= max_df)
        .collect();
    if kept.is_empty() {
        return Err(LdaError::EmptyVocabulary { min_df, max_df_ratio });
    }
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let (words, doc_freq) = kept.into_iter().map(|(w, n)| (w.to_string(), n)).unzip();
    Vocabulary::from_parts(words, doc_freq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(d: &[&[&str]]) -> Vec<Vec<String>> {
        d.iter()
            .map(|doc| doc.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn thresholds() {
        let d = docs(&[&["a", "b"], &["a"]]);
        assert_eq!(build_vocabulary(&d, 1, 1.0).unwrap().words(), ["a", "b"]);
        assert_eq!(build_vocabulary(&d, 2, 1.0).unwrap().words(), ["a"]);
        assert_eq!(build_vocabulary(&d, 1, 0.5).unwrap().words(), ["b"]);
    }

    #[test]
    fn repeated_word_counts_once_per_doc() {
        let d = docs(&[&["a", "a", "a"], &["b"], &["b"]]);
        let v = build_vocabulary(&d, 1, 1.0).unwrap();
        assert_eq!(v.words(), ["b", "a"]);
        assert_eq!(v.doc_freq(1), 1);
    }

    #[test]
    fn empty_result_is_an_error() {
        let d = docs(&[&["a"]]);
        assert!(matches!(
            build_vocabulary(&d, 2, 1.0),
            Err(LdaError::EmptyVocabulary { .. })
        ));
        assert!(build_vocabulary(&d, 0, 1.0).is_err());
        assert!(build_vocabulary(&d, 1, 0.0).is_err());
    }

    #[test]
    fn serde_rebuilds_index() {
        let v = build_vocabulary(&docs(&[&["x", "y"]]), 1, 1.0).unwrap();
        let back: Vocabulary = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(back.id("y"), Some(1));
        assert_eq!(back, v);
    }
}
