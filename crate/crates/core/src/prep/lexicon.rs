//! Stopword and suffix tables.

use std::collections::HashSet;
use std::path::Path;

const DEFAULT_STOPWORDS: &str = include_str!("../../resources/stopwords_tr.txt");
const DEFAULT_SUFFIXES: &str = include_str!("../../resources/suffixes_tr.txt");

/// Minimum number of characters a stem keeps after stripping.
pub const MIN_STEM_CHARS: usize = 2;
/// Upper bound on suffix-stripping passes per token.
pub const MAX_STRIP_PASSES: usize = 2;

/// Parses a one-entry-per-line table. Blank lines and lines starting with
/// `#` are skipped; entries are trimmed.
pub fn parse_table(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    stopwords: HashSet<String>,
    /// Longest first; ties alphabetical.
    suffixes: Vec<String>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Self::new(parse_table(DEFAULT_STOPWORDS), parse_table(DEFAULT_SUFFIXES))
    }
}

impl Lexicon {
    pub fn new(stopwords: impl IntoIterator<Item = String>, suffixes: Vec<String>) -> Self {
        let mut suffixes = suffixes;
        suffixes.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then_with(|| a.cmp(b)));
        suffixes.dedup();
        Self {
            stopwords: stopwords.into_iter().collect(),
            suffixes,
        }
    }

    /// Builds a lexicon from optional table files, falling back to the
    /// embedded Turkish tables for any path left unset.
    pub fn from_files(stopwords: Option<&Path>, suffixes: Option<&Path>) -> std::io::Result<Self> {
        let stop = match stopwords {
            Some(p) => parse_table(&std::fs::read_to_string(p)?),
            None => parse_table(DEFAULT_STOPWORDS),
        };
        let suf = match suffixes {
            Some(p) => parse_table(&std::fs::read_to_string(p)?),
            None => parse_table(DEFAULT_SUFFIXES),
        };
        Ok(Self::new(stop, suf))
    }

    pub fn stopwords(&self) -> &HashSet<String> {
        &self.stopwords
    }

    pub fn suffixes(&self) -> &[String] {
        &self.suffixes
    }

    pub fn is_stopword(&self, token: &str) -> bool {
        self.stopwords.contains(token)
    }
}

/// Drops tokens found in `stopwords`, preserving order.
pub fn remove_stopwords(tokens: Vec<String>, stopwords: &HashSet<String>) -> Vec<String> {
    tokens.into_iter().filter(|t| !stopwords.contains(t)).collect()
}

/// Repeatedly strips the longest table suffix that leaves at least
/// [`MIN_STEM_CHARS`] characters, for at most [`MAX_STRIP_PASSES`] passes.
///
/// `suffixes` may be in any order.
pub fn strip_suffixes(token: &str, suffixes: &[String]) -> String {
    let mut stem = token.to_string();
    for _ in 0..MAX_STRIP_PASSES {
        let stem_chars = stem.chars().count();
        let best = suffixes
            .iter()
            .filter(|s| !s.is_empty() && stem.ends_with(s.as_str()))
            .filter(|s| stem_chars - s.chars().count() >= MIN_STEM_CHARS)
            .max_by_key(|s| s.chars().count());
        match best {
            Some(s) => {
                let cut = stem.len() - s.len();
                stem.truncate(cut);
            }
            None => break,
        }
    }
    stem
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &[&str]) -> Vec<String> {
        s.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn default_tables_load() {
        let lex = Lexicon::default();
        assert!(lex.stopwords().len() >= 190);
        for w in ["ve", "için", "de", "da", "bu"] {
            assert!(lex.is_stopword(w), "{w}");
        }
        for w in ["olsun", "geçmiş", "izmir", "deprem", "yardım"] {
            assert!(!lex.is_stopword(w), "{w}");
        }
    }

    #[test]
    fn stopword_examples() {
        let lex = Lexicon::default();
        assert_eq!(
            remove_stopwords(toks(&["ve", "izmir", "için"]), lex.stopwords()),
            ["izmir"]
        );
        assert!(remove_stopwords(vec![], lex.stopwords()).is_empty());
    }

    #[test]
    fn stripping_examples() {
        let lex = Lexicon::default();
        assert_eq!(strip_suffixes("depremler", lex.suffixes()), "deprem");
        assert_eq!(strip_suffixes("izmir", lex.suffixes()), "izmir");
        assert_eq!(strip_suffixes("el", lex.suffixes()), "el");
        assert_eq!(strip_suffixes("izmirde", lex.suffixes()), "izmir");
        assert_eq!(strip_suffixes("a", lex.suffixes()), "a");
    }

    #[test]
    fn stem_guard_and_pass_limit() {
        let table = toks(&["ler", "de", "ev"]);
        assert_eq!(strip_suffixes("evde", &table), "ev");
        // guard picks a shorter suffix when the longest would cut too deep
        let table = toks(&["abc", "c"]);
        assert_eq!(strip_suffixes("xabc", &table), "xab");
        // two passes max
        let table = toks(&["x"]);
        assert_eq!(strip_suffixes("aaxxx", &table), "aax");
    }

    #[test]
    fn table_comments_and_blanks() {
        assert_eq!(parse_table("# c\n\n a \nb\n"), ["a", "b"]);
    }
}
