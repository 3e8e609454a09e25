//! Span scanners for URLs, mentions and hashtags in raw tweet text.
//!
//! All three scanners share one notion of a word character (Unicode
//! alphanumeric or `_`). Mentions and hashtags must start at a word boundary,
//! and candidates falling inside a URL are ignored.

use std::ops::Range;

/// Longest handle accepted after `@`.
pub const MAX_HANDLE_LEN: usize = 15;

const URL_PREFIXES: [&str; 2] = ["http://", "https://"];
const WWW_PREFIX: &str = "www.";

pub fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn starts_with_ignore_ascii_case(haystack: &str, prefix: &str) -> bool {
    haystack.len() >= prefix.len() && haystack.as_bytes()[..prefix.len()].eq_ignore_ascii_case(prefix.as_bytes())
}

fn boundary_before(text: &str, at: usize) -> bool {
    text[..at].chars().next_back().is_none_or(|c| !is_word_char(c))
}

/// Byte ranges of every URL: a run starting with `http://`, `https://` or a
/// boundary-anchored `www.` and extending to the next whitespace.
pub fn url_spans(text: &str) -> Vec<Range<usize>> {
    let mut spans = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        let hit = URL_PREFIXES.iter().any(|p| starts_with_ignore_ascii_case(rest, p))
            || (starts_with_ignore_ascii_case(rest, WWW_PREFIX) && boundary_before(text, i));
        if hit {
            let end = rest
                .char_indices()
                .find(|(_, c)| c.is_whitespace())
                .map_or(text.len(), |(j, _)| i + j);
            spans.push(i..end);
            i = end;
        } else {
            i += rest.chars().next().map_or(1, char::len_utf8);
        }
    }
    spans
}

fn inside(spans: &[Range<usize>], at: usize) -> bool {
    spans.iter().any(|r| r.contains(&at))
}

/// A sigil-prefixed token (`@name` or `#tag`) located in the text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigilSpan {
    /// Covers the sigil and the word run.
    pub span: Range<usize>,
    /// The word run without the sigil, case preserved.
    pub word: String,
}

fn sigil_spans(text: &str, sigil: char, max_len: Option<usize>) -> Vec<SigilSpan> {
    let urls = url_spans(text);
    let mut out = Vec::new();
    for (i, c) in text.char_indices() {
        if c != sigil || inside(&urls, i) || !boundary_before(text, i) {
            continue;
        }
        let start = i + c.len_utf8();
        let end = text[start..]
            .char_indices()
            .find(|(_, c)| !is_word_char(*c))
            .map_or(text.len(), |(j, _)| start + j);
        let word = &text[start..end];
        let len = word.chars().count();
        if len == 0 || max_len.is_some_and(|m| len > m) {
            continue;
        }
        out.push(SigilSpan {
            span: i..end,
            word: word.to_string(),
        });
    }
    out
}

/// `@handle` runs of 1..=15 word characters preceded by a non-word character
/// or the start of the text.
pub fn mention_spans(text: &str) -> Vec<SigilSpan> {
    sigil_spans(text, '@', Some(MAX_HANDLE_LEN))
}

/// `#tag` runs of one or more word characters preceded by a non-word
/// character or the start of the text.
pub fn hashtag_spans(text: &str) -> Vec<SigilSpan> {
    sigil_spans(text, '#', None)
}

/// Copies `text` with the given (sorted, non-overlapping) byte ranges removed.
pub fn remove_spans(text: &str, spans: impl IntoIterator<Item = Range<usize>>) -> String {
    let mut out = String::with_capacity(text.len());
    let mut cursor = 0;
    for r in spans {
        out.push_str(&text[cursor..r.start]);
        cursor = r.end;
    }
    out.push_str(&text[cursor..]);
    out
}
