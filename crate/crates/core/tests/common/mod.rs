//! Shared helpers for the integration tests: fixture locations, independent
//! oracles, and corpus generators.
#![allow(dead_code)]

pub mod corpora;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::LazyLock;

use chrono::NaiveDate;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regex::Regex;

use crisis_pulse::features::TweetFeatures;
use crisis_pulse::prep::CleanTweet;

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture")
}

pub fn fixture_config() -> PathBuf {
    fixture_dir().join("config.toml")
}

/// Fixture rows read with the `csv` crate directly, bypassing the library's
/// record validation.
pub fn fixture_rows() -> Vec<HashMap<String, String>> {
    let mut r = csv::Reader::from_path(fixture_dir().join("tweets.csv")).unwrap();
    r.deserialize().map(|row| row.unwrap()).collect()
}

// ---------------------------------------------------------------- scanners

const WORD: &str = r"[\p{Alphabetic}\p{N}_]";

static URL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i-u:https?://)\S*|(?:^|[^\p{Alphabetic}\p{N}_])((?i-u:www\.)\S*)").unwrap());
static WORD_CHAR: LazyLock<Regex> = LazyLock::new(|| Regex::new(&format!("^{WORD}$")).unwrap());
static WORD_RUN: LazyLock<Regex> = LazyLock::new(|| Regex::new(&format!("^{WORD}+")).unwrap());

/// Byte spans of URLs, found by regex.
pub fn oracle_url_spans(text: &str) -> Vec<(usize, usize)> {
    URL_RE
        .captures_iter(text)
        .map(|c| {
            let m = c.get(1).unwrap_or_else(|| c.get(0).unwrap());
            (m.start(), m.end())
        })
        .collect()
}

fn sigil_words(text: &str, sigil: char, cap: Option<usize>) -> Vec<String> {
    let urls = oracle_url_spans(text);
    let mut out = Vec::new();
    for (i, _) in text.match_indices(sigil) {
        let prev = text[..i].chars().next_back();
        if prev.is_some_and(|p| WORD_CHAR.is_match(&p.to_string())) {
            continue;
        }
        if urls.iter().any(|&(s, e)| s <= i && i < e) {
            continue;
        }
        let Some(m) = WORD_RUN.find(&text[i + sigil.len_utf8()..]) else {
            continue;
        };
        if cap.is_some_and(|c| m.as_str().chars().count() > c) {
            continue;
        }
        out.push(m.as_str().to_string());
    }
    out
}

pub fn oracle_mentions(text: &str) -> Vec<String> {
    sigil_words(text, '@', Some(15))
}

/// Hashtags folded with I and İ both mapping to i.
pub fn oracle_hashtags(text: &str) -> Vec<String> {
    sigil_words(text, '#', None)
        .into_iter()
        .map(|w| {
            w.chars()
                .flat_map(|c| match c {
                    'I' | 'İ' => vec!['i'],
                    c => c.to_lowercase().collect(),
                })
                .collect()
        })
        .collect()
}

fn turkish_lower_char(c: char) -> Vec<char> {
    match c {
        'I' => vec!['ı'],
        'İ' => vec!['i'],
        c => c.to_lowercase().collect(),
    }
}

/// Recomputes every feature by counting characters of the raw text and the
/// stored clean text.
pub fn oracle_features(tweet: &CleanTweet, stopwords: &HashSet<String>) -> TweetFeatures {
    let raw = tweet.raw_text.as_str();
    let mut raw_words = 0;
    let mut in_word = false;
    for c in raw.chars() {
        if c.is_whitespace() {
            in_word = false;
        } else if !in_word {
            in_word = true;
            raw_words += 1;
        }
    }
    let mut stop = 0;
    for tok in raw.split(char::is_whitespace).filter(|t| !t.is_empty()) {
        let norm: String = tok
            .chars()
            .flat_map(turkish_lower_char)
            .filter(|c| c.is_alphanumeric())
            .collect();
        if !norm.is_empty() && stopwords.contains(&norm) {
            stop += 1;
        }
    }
    let clean = tweet.clean_text.as_str();
    let clean_chars = clean.chars().count();
    let letters = clean.chars().filter(|c| *c != ' ').count();
    let clean_words = if clean.is_empty() {
        0
    } else {
        clean.matches(' ').count() + 1
    };
    let unique: HashSet<&str> = clean.split(' ').filter(|t| !t.is_empty()).collect();
    let hashtags = oracle_hashtags(raw);
    TweetFeatures {
        tweet_id: tweet.tweet_id.clone(),
        mentions: oracle_mentions(raw),
        hashtag_count: hashtags.len(),
        hashtags,
        url_count: oracle_url_spans(raw).len(),
        raw_word_count: raw_words,
        clean_word_count: clean_words,
        unique_word_count: unique.len(),
        stopword_count: stop,
        avg_word_length: if clean_words == 0 {
            0.0
        } else {
            letters as f64 / clean_words as f64
        },
        raw_char_count: raw.chars().count(),
        clean_char_count: clean_chars,
        word_count_diff: raw_words - clean_words,
    }
}

// ------------------------------------------------------------- prep oracle

/// True when `s` is one of the accepted timestamp layouts and names a real
/// calendar instant.
pub fn oracle_datetime_ok(s: &str) -> bool {
    static RE: LazyLock<Regex> = LazyLock::new(|| {
        Regex::new(r"^(\d{4})-(\d{2})-(\d{2})([T ])(\d{2}):(\d{2}):(\d{2})(\.\d+)?(Z|[+-]\d{2}:?\d{2})?$").unwrap()
    });
    let s = s.trim();
    let Some(c) = RE.captures(s) else { return false };
    let n = |i: usize| c[i].parse::<u32>().unwrap();
    let zoned = c.get(9).is_some();
    if !zoned && (&c[4] == "T" || c.get(8).is_some()) {
        return false;
    }
    NaiveDate::from_ymd_opt(n(1) as i32, n(2), n(3)).is_some() && n(5) < 24 && n(6) < 60 && n(7) < 60
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct OracleCounts {
    pub input: usize,
    pub duplicates: usize,
    pub empty: usize,
    pub bad_dates: usize,
    pub output: usize,
}

/// Walks the rows once in order: first occurrence of each id wins, then
/// blank texts go, then unparseable timestamps.
pub fn oracle_prep_counts(rows: &[(String, String, String)]) -> OracleCounts {
    let mut seen = HashSet::new();
    let mut c = OracleCounts {
        input: rows.len(),
        ..Default::default()
    };
    for (id, text, dt) in rows {
        if !seen.insert(id.clone()) {
            c.duplicates += 1;
        } else if text.chars().all(char::is_whitespace) {
            c.empty += 1;
        } else if !oracle_datetime_ok(dt) {
            c.bad_dates += 1;
        } else {
            c.output += 1;
        }
    }
    c
}

// -------------------------------------------------------------- generators

const TOKENS: &[&str] = &[
    "deprem",
    "İzmir'de",
    "IŞIK",
    "ılık",
    "yardım!",
    "Geçmiş",
    "olsun,",
    "ve",
    "için",
    "bu",
    "RT",
    "ÇOK",
    "güzel",
    "123",
    "a_b",
    "@AFADBaskanlik",
    "@a",
    "@x_1234567890123456",
    "email@domain.com",
    "#deprem",
    "#İzmirDeprem",
    "##x",
    "#",
    "@",
    "#a#b",
    "(#tag)",
    "@user:",
    "https://t.co/abc",
    "http://b.c",
    "HTTPS://X.Y/z",
    "www.site.com",
    "awww.no",
    "(www.x.y)",
    "https://",
    "🙏",
    "💔",
    "❤️",
    "1️⃣",
    "👨\u{200d}👩\u{200d}👧",
    "🇹🇷",
    "...",
    "—",
    "'",
    "!?",
    "“alıntı”",
    "e\u{301}",
    "Ａ",
    "ǅ",
    "x\u{200b}y",
];
const SEPARATORS: &[&str] = &[" ", " ", " ", "  ", "\t", "\n", "", "\u{a0}"];

/// A random tweet-like string mixing words, sigils, URLs, emoji and odd
/// Unicode, including tokens glued together without separators.
pub fn random_text(rng: &mut impl Rng) -> String {
    let n = rng.random_range(0..25);
    let mut s = String::new();
    for _ in 0..n {
        if rng.random_bool(0.1) {
            s.push(random_char(rng));
        } else {
            s.push_str(TOKENS.choose(rng).unwrap());
        }
        s.push_str(SEPARATORS.choose(rng).unwrap());
    }
    s
}

fn random_char(rng: &mut impl Rng) -> char {
    loop {
        let c = match rng.random_range(0..4) {
            0 => rng.random_range(0x20u32..0x250),
            1 => rng.random_range(0x300u32..0x3000),
            2 => rng.random_range(0x1F300u32..0x1FAFF),
            _ => rng.random_range(0u32..0x110000),
        };
        if let Some(c) = char::from_u32(c) {
            return c;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `docs` documents of `len` tokens, each drawn from one of `k` disjoint
/// vocabularies of `words_per_topic` words with weights 1/(rank+1). Returns
/// the documents and the planted vocabularies, most probable word first.
pub fn planted_corpus(
    seed: u64,
    k: usize,
    words_per_topic: usize,
    docs: usize,
    len: usize,
) -> (Vec<Vec<String>>, Vec<Vec<String>>) {
    let mut r = rng(seed);
    let topics: Vec<Vec<String>> = (0..k)
        .map(|t| (0..words_per_topic).map(|w| format!("t{t}w{w:02}")).collect())
        .collect();
    let weights = WeightedIndex::new((0..words_per_topic).map(|i| 1.0 / (i + 1) as f64)).unwrap();
    let corpus = (0..docs)
        .map(|_| {
            let t = r.random_range(0..k);
            (0..len).map(|_| topics[t][weights.sample(&mut r)].clone()).collect()
        })
        .collect();
    (corpus, topics)
}

/// 3-class documents from class-disjoint vocabularies, with roughly
/// `noise` of each document's tokens drawn from a shared pool.
pub fn sentiment_corpus(seed: u64, n: usize, noise: f64) -> Vec<crisis_pulse::sentiment::LabeledDoc> {
    use crisis_pulse::sentiment::{LabeledDoc, SentimentLabel};
    let mut r = rng(seed);
    let shared: Vec<String> = (0..30).map(|i| format!("ortak{i}")).collect();
    (0..n)
        .map(|i| {
            let label = SentimentLabel::ALL[i % 3];
            let len = r.random_range(5..15);
            let tokens = (0..len)
                .map(|_| {
                    if r.random_bool(noise) {
                        shared.choose(&mut r).unwrap().clone()
                    } else {
                        format!("{}{}", label.as_str(), r.random_range(0..40))
                    }
                })
                .collect();
            LabeledDoc { tokens, label }
        })
        .collect()
}

/// Plain group-by count, sorted the same way as `FrequencyTable`.
pub fn group_count<'a>(keys: impl IntoIterator<Item = &'a str>) -> Vec<(String, u64)> {
    let mut m: BTreeMap<&str, u64> = BTreeMap::new();
    for k in keys {
        *m.entry(k).or_default() += 1;
    }
    let mut v: Vec<(String, u64)> = m.into_iter().map(|(k, c)| (k.to_string(), c)).collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v
}

// -------------------------------------------------------------------- svg

const SVG_NS: &str = "http://www.w3.org/2000/svg";

const SVG11_ELEMENTS: &[&str] = &[
    "svg",
    "g",
    "defs",
    "desc",
    "title",
    "symbol",
    "use",
    "rect",
    "circle",
    "ellipse",
    "line",
    "polyline",
    "polygon",
    "path",
    "text",
    "tspan",
    "textPath",
    "clipPath",
    "mask",
    "linearGradient",
    "radialGradient",
    "stop",
    "pattern",
    "style",
    "metadata",
    "a",
    "switch",
    "image",
    "marker",
];

const SVG11_ATTRIBUTES: &[&str] = &[
    "version",
    "width",
    "height",
    "viewBox",
    "x",
    "y",
    "x1",
    "y1",
    "x2",
    "y2",
    "cx",
    "cy",
    "r",
    "rx",
    "ry",
    "d",
    "points",
    "transform",
    "fill",
    "stroke",
    "stroke-width",
    "font-family",
    "font-size",
    "font-weight",
    "text-anchor",
    "class",
    "id",
    "style",
    "opacity",
    "fill-opacity",
    "stroke-opacity",
    "dominant-baseline",
];

/// Checks well-formedness, the root element and viewport, and that every
/// element and attribute belongs to SVG 1.1.
pub fn validate_svg(svg: &str) -> Result<(), String> {
    let doc = roxmltree::Document::parse(svg).map_err(|e| e.to_string())?;
    let root = doc.root_element();
    if root.tag_name().name() != "svg" || root.tag_name().namespace() != Some(SVG_NS) {
        return Err("root is not an SVG element".into());
    }
    for (attr, want) in [
        ("width", "960"),
        ("height", "540"),
        ("viewBox", "0 0 960 540"),
        ("version", "1.1"),
    ] {
        if root.attribute(attr) != Some(want) {
            return Err(format!("root {attr} is {:?}, expected {want}", root.attribute(attr)));
        }
    }
    for node in root.descendants().filter(|n| n.is_element()) {
        let name = node.tag_name();
        if name.namespace() != Some(SVG_NS) || !SVG11_ELEMENTS.contains(&name.name()) {
            return Err(format!("element {:?} is not SVG 1.1", name.name()));
        }
        for a in node.attributes() {
            if a.namespace().is_none() && !SVG11_ATTRIBUTES.contains(&a.name()) {
                return Err(format!("attribute {} on <{}> is not SVG 1.1", a.name(), name.name()));
            }
        }
    }
    Ok(())
}
