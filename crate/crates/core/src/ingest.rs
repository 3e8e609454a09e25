//! Parsing and validation of exported tweet records and the hashtag manifest
//! that produced them.
//!
//! Tweet ids are kept as decimal strings end to end; real ids exceed the
//! 53-bit mantissa of a double and would be corrupted by a float round trip.

use std::collections::HashSet;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::prep::{fold_tag_case, normalize_datetime};

pub const CSV_HEADER: [&str; 5] = ["hashtag", "datetime", "tweet_id", "text", "username"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordFormat {
    Csv,
    Jsonl,
}

impl RecordFormat {
    /// Picks the format from a file extension (`.csv`, `.jsonl`, `.ndjson`).
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Self::Csv),
            "jsonl" | "ndjson" => Some(Self::Jsonl),
            _ => None,
        }
    }
}

/// One exported record, exactly as fetched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTweet {
    pub hashtag: String,
    #[serde(rename = "datetime")]
    pub datetime_raw: String,
    pub tweet_id: String,
    pub text: String,
    pub username: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordErrorKind {
    MissingField,
    BadId,
    BadRow,
}

/// A row that could not become a [`RawTweet`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordError {
    /// Physical line in the input where the row starts (1-based).
    pub line_number: u64,
    pub reason: RecordErrorKind,
    pub detail: String,
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV header must be exactly `{}`, found `{found}`", CSV_HEADER.join(","))]
    BadHeader { found: String },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Default)]
struct Fields {
    hashtag: String,
    datetime: String,
    tweet_id: Option<String>,
    text: String,
    username: Option<String>,
}

fn validate(fields: Fields, line_number: u64) -> Result<RawTweet, RecordError> {
    let err = |reason, detail: String| RecordError {
        line_number,
        reason,
        detail,
    };
    let tweet_id = fields
        .tweet_id
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .ok_or_else(|| err(RecordErrorKind::MissingField, "tweet_id".into()))?;
    let username = fields
        .username
        .map(|s| s.trim().trim_start_matches('@').to_string())
        .filter(|s| !s.is_empty())
        .ok_or_else(|| err(RecordErrorKind::MissingField, "username".into()))?;
    if !tweet_id.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(
            RecordErrorKind::BadId,
            format!("tweet_id {tweet_id:?} is not a decimal digit string"),
        ));
    }
    Ok(RawTweet {
        hashtag: fields.hashtag,
        datetime_raw: fields.datetime,
        tweet_id,
        text: fields.text,
        username,
    })
}

/// Result of parsing one input: accepted records and rejected rows, each in
/// input order.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ParsedRecords {
    pub records: Vec<RawTweet>,
    pub errors: Vec<RecordError>,
}

impl ParsedRecords {
    fn push(&mut self, row: Result<RawTweet, RecordError>) {
        match row {
            Ok(r) => self.records.push(r),
            Err(e) => self.errors.push(e),
        }
    }
}

/// Parses CSV or JSONL tweet exports. Every data row yields exactly one
/// record or one [`RecordError`]; blank lines are not rows.
pub fn parse_records<R: Read>(source: R, format: RecordFormat) -> Result<ParsedRecords, IngestError> {
    match format {
        RecordFormat::Csv => parse_csv(source),
        RecordFormat::Jsonl => parse_jsonl(source),
    }
}

fn parse_csv<R: Read>(source: R) -> Result<ParsedRecords, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(source);
    let mut out = ParsedRecords::default();
    let header = reader.byte_headers()?.clone();
    if header.is_empty() {
        return Ok(out);
    }
    if header.iter().ne(CSV_HEADER.iter().map(|h| h.as_bytes())) {
        let found = header.iter().map(String::from_utf8_lossy).collect::<Vec<_>>().join(",");
        return Err(IngestError::BadHeader { found });
    }

    let mut row = csv::ByteRecord::new();
    while reader.read_byte_record(&mut row)? {
        let line = row.position().map_or(0, |p| p.line());
        out.push(csv_row(&row, line));
    }
    Ok(out)
}

fn csv_row(row: &csv::ByteRecord, line: u64) -> Result<RawTweet, RecordError> {
    let bad_row = |detail: String| RecordError {
        line_number: line,
        reason: RecordErrorKind::BadRow,
        detail,
    };
    if row.len() != CSV_HEADER.len() {
        return Err(bad_row(format!(
            "expected {} fields, found {}",
            CSV_HEADER.len(),
            row.len()
        )));
    }
    let mut cols = Vec::with_capacity(CSV_HEADER.len());
    for (name, raw) in CSV_HEADER.iter().zip(row.iter()) {
        let s = std::str::from_utf8(raw).map_err(|e| bad_row(format!("{name}: {e}")))?;
        cols.push(s.to_string());
    }
    let [hashtag, datetime, tweet_id, text, username]: [String; 5] = cols.try_into().expect("length checked");
    let non_empty = |s: String| Some(s).filter(|s| !s.trim().is_empty());
    validate(
        Fields {
            hashtag,
            datetime,
            tweet_id: non_empty(tweet_id),
            text,
            username: non_empty(username),
        },
        line,
    )
}

#[derive(Deserialize)]
struct JsonRow<'a> {
    #[serde(default)]
    hashtag: Option<String>,
    #[serde(default)]
    datetime: Option<String>,
    #[serde(default, borrow)]
    tweet_id: Option<&'a RawValue>,
    #[serde(default)]
    text: Option<String>,
    #[serde(default)]
    username: Option<String>,
}

fn parse_jsonl<R: Read>(source: R) -> Result<ParsedRecords, IngestError> {
    let mut reader = BufReader::new(source);
    let mut out = ParsedRecords::default();
    let mut buf = Vec::new();
    let mut line_number = 0u64;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_number += 1;
        if buf.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        out.push(jsonl_row(&buf, line_number));
    }
    Ok(out)
}

fn jsonl_row(bytes: &[u8], line: u64) -> Result<RawTweet, RecordError> {
    let bad_row = |detail: String| RecordError {
        line_number: line,
        reason: RecordErrorKind::BadRow,
        detail,
    };
    let text = std::str::from_utf8(bytes).map_err(|e| bad_row(e.to_string()))?;
    let row: JsonRow = serde_json::from_str(text.trim()).map_err(|e| bad_row(e.to_string()))?;

    let tweet_id = match row.tweet_id.map(RawValue::get) {
        None | Some("null") => None,
        Some(raw) if raw.starts_with('"') => {
            Some(serde_json::from_str::<String>(raw).map_err(|e| bad_row(e.to_string()))?)
        }
        // Numeric literal: keep its source text so no float conversion happens.
        Some(raw) => Some(raw.to_string()),
    };
    validate(
        Fields {
            hashtag: row.hashtag.unwrap_or_default(),
            datetime: row.datetime.unwrap_or_default(),
            tweet_id,
            text: row.text.unwrap_or_default(),
            username: row.username,
        },
        line,
    )
}

/// Serializes records in the given format. Parsing the output reproduces
/// every field byte for byte.
pub fn write_records<W: Write>(records: &[RawTweet], format: RecordFormat, out: W) -> Result<(), IngestError> {
    match format {
        RecordFormat::Csv => {
            // header written explicitly so an empty export still has one
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_HEADER)?;
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        RecordFormat::Jsonl => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

/// Normalizes a query tag: leading `#` removed, case folded.
pub fn normalize_tag(tag: &str) -> String {
    fold_tag_case(tag.trim().trim_start_matches('#'))
}

/// The hashtag query list and collection window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TagManifest {
    pub tags: Vec<String>,
    pub date_from: NaiveDate,
    pub date_to: NaiveDate,
}

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("cannot read manifest: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid manifest: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("manifest field `{field}`: {detail}")]
    BadField { field: &'static str, detail: String },
    #[error("duplicate tag after normalization: {0}")]
    DuplicateTag(String),
    #[error("manifest lists no tags")]
    NoTags,
    #[error("date_from {from} is after date_to {to}")]
    InvertedRange { from: NaiveDate, to: NaiveDate },
}

#[derive(Deserialize)]
struct ManifestFile {
    tags: Vec<String>,
    date_from: toml::Value,
    date_to: toml::Value,
}

fn manifest_date(field: &'static str, value: &toml::Value) -> Result<NaiveDate, ManifestError> {
    let text = match value {
        toml::Value::String(s) => s.clone(),
        toml::Value::Datetime(d) => d.to_string(),
        other => {
            return Err(ManifestError::BadField {
                field,
                detail: format!("expected an ISO date, found {other}"),
            })
        }
    };
    NaiveDate::parse_from_str(&text, "%Y-%m-%d").map_err(|e| ManifestError::BadField {
        field,
        detail: format!("{text:?}: {e}"),
    })
}

impl TagManifest {
    /// Validates and normalizes a manifest built in code.
    pub fn new(
        tags: impl IntoIterator<Item = impl AsRef<str>>,
        date_from: NaiveDate,
        date_to: NaiveDate,
    ) -> Result<Self, ManifestError> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for tag in tags {
            let norm = normalize_tag(tag.as_ref());
            if norm.is_empty() {
                return Err(ManifestError::BadField {
                    field: "tags",
                    detail: "empty tag".into(),
                });
            }
            if !seen.insert(norm.clone()) {
                return Err(ManifestError::DuplicateTag(norm));
            }
            out.push(norm);
        }
        if out.is_empty() {
            return Err(ManifestError::NoTags);
        }
        if date_from > date_to {
            return Err(ManifestError::InvertedRange {
                from: date_from,
                to: date_to,
            });
        }
        Ok(Self {
            tags: out,
            date_from,
            date_to,
        })
    }

    /// Parses the TOML form: `tags = [...]`, `date_from`, `date_to`.
    pub fn from_toml_str(text: &str) -> Result<Self, ManifestError> {
        let file: ManifestFile = toml::from_str(text)?;
        let from = manifest_date("date_from", &file.date_from)?;
        let to = manifest_date("date_to", &file.date_to)?;
        Self::new(file.tags, from, to)
    }

    pub fn contains_date(&self, date: NaiveDate) -> bool {
        self.date_from <= date && date <= self.date_to
    }

    /// Every calendar date in the window, inclusive.
    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.date_from.iter_days().take_while(|d| *d <= self.date_to)
    }
}

pub fn load_tag_manifest(path: &Path) -> Result<TagManifest, ManifestError> {
    TagManifest::from_toml_str(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FilterOutcome {
    pub kept: Vec<RawTweet>,
    /// Kept records whose datetime does not parse. Preprocessing drops and
    /// reports them.
    pub undated: usize,
    pub off_tag: usize,
    pub out_of_window: usize,
}

/// Keeps records whose query tag is listed and whose local date lies in the
/// manifest window. Records with an unparseable datetime are kept so the
/// failure is counted once, by preprocessing. Order is preserved.
pub fn filter_by_manifest(records: &[RawTweet], manifest: &TagManifest) -> FilterOutcome {
    let tags: HashSet<&str> = manifest.tags.iter().map(String::as_str).collect();
    let mut out = FilterOutcome::default();
    for r in records {
        if !tags.contains(normalize_tag(&r.hashtag).as_str()) {
            out.off_tag += 1;
            continue;
        }
        match normalize_datetime(&r.datetime_raw) {
            Ok(ts) if manifest.contains_date(ts.date()) => out.kept.push(r.clone()),
            Ok(_) => out.out_of_window += 1,
            Err(_) => {
                out.undated += 1;
                out.kept.push(r.clone());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jsonl(s: &str) -> ParsedRecords {
        parse_records(s.as_bytes(), RecordFormat::Jsonl).unwrap()
    }

    fn csv(s: &str) -> ParsedRecords {
        parse_records(s.as_bytes(), RecordFormat::Csv).unwrap()
    }

    #[test]
    fn jsonl_keeps_long_ids_exact() {
        let p = jsonl(
            r#"{"hashtag":"deprem","datetime":"2020-10-30 14:51:00","tweet_id":"1322200000000000001","text":"geçmiş olsun","username":"u1"}"#,
        );
        assert!(p.errors.is_empty());
        assert_eq!(p.records[0].tweet_id, "1322200000000000001");
        assert_eq!(p.records[0].text, "geçmiş olsun");
    }

    #[test]
    fn jsonl_numeric_id_is_not_rounded() {
        let p =
            jsonl(r#"{"hashtag":"deprem","datetime":"x","tweet_id":1322200000000000001,"text":"","username":"u1"}"#);
        assert_eq!(p.records[0].tweet_id, "1322200000000000001");
        let p = jsonl(r#"{"hashtag":"deprem","datetime":"x","tweet_id":1.3e18,"text":"","username":"u1"}"#);
        assert_eq!(p.errors[0].reason, RecordErrorKind::BadId);
    }

    #[test]
    fn csv_empty_username_is_missing_field() {
        let p = csv("hashtag,datetime,tweet_id,text,username\ndeprem,2020-10-30 14:51:00,1,hi,\n");
        assert!(p.records.is_empty());
        assert_eq!(p.errors[0].reason, RecordErrorKind::MissingField);
        assert_eq!(p.errors[0].line_number, 2);
    }

    #[test]
    fn empty_input_is_empty() {
        assert_eq!(csv(""), ParsedRecords::default());
        assert_eq!(jsonl(""), ParsedRecords::default());
    }

    #[test]
    fn row_level_errors() {
        let input = "hashtag,datetime,tweet_id,text,username\n\
                     deprem,d,12a,t,u\n\
                     deprem,d,,t,u\n\
                     deprem,d,5\n\
                     deprem,d,\"7\",\"multi\nline\",@u7\n\
                     deprem,d,8,t,u8\n";
        let p = csv(input);
        let kinds: Vec<_> = p.errors.iter().map(|e| (e.line_number, e.reason)).collect();
        assert_eq!(
            kinds,
            [
                (2, RecordErrorKind::BadId),
                (3, RecordErrorKind::MissingField),
                (4, RecordErrorKind::BadRow)
            ]
        );
        assert_eq!(p.records.len(), 2);
        assert_eq!(p.records[0].username, "u7");
        assert_eq!(p.records[0].text, "multi\nline");
    }

    #[test]
    fn undecodable_bytes_fail_only_their_line() {
        let mut input = b"hashtag,datetime,tweet_id,text,username\ndeprem,d,1,".to_vec();
        input.extend_from_slice(&[0xff, 0xfe]);
        input.extend_from_slice(b",u\ndeprem,d,2,ok,u\n");
        let p = parse_records(&input[..], RecordFormat::Csv).unwrap();
        assert_eq!(p.errors.len(), 1);
        assert_eq!(p.errors[0].reason, RecordErrorKind::BadRow);
        assert_eq!(p.records.len(), 1);

        let mut input = b"\xff\n".to_vec();
        input.extend_from_slice(br#"{"tweet_id":"3","username":"u"}"#);
        let p = parse_records(&input[..], RecordFormat::Jsonl).unwrap();
        assert_eq!(p.errors[0].line_number, 1);
        assert_eq!(p.records[0].tweet_id, "3");
    }

    #[test]
    fn wrong_header_is_rejected() {
        let e = parse_records("id,text\n1,a\n".as_bytes(), RecordFormat::Csv).unwrap_err();
        assert!(matches!(e, IngestError::BadHeader { .. }));
    }

    #[test]
    fn jsonl_blank_lines_and_line_numbers() {
        let p = jsonl("\n{\"tweet_id\":\"1\",\"username\":\"a\"}\n\n{\"username\":\"b\"}\nnot json\n");
        assert_eq!(p.records.len(), 1);
        assert_eq!(p.errors[0].line_number, 4);
        assert_eq!(p.errors[0].reason, RecordErrorKind::MissingField);
        assert_eq!(p.errors[1].line_number, 5);
        assert_eq!(p.errors[1].reason, RecordErrorKind::BadRow);
    }

    fn d(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    #[test]
    fn manifest_examples() {
        let m = TagManifest::from_toml_str("tags = [\"deprem\"]\ndate_from = 2020-10-30\ndate_to = \"2020-11-23\"\n")
            .unwrap();
        assert_eq!(m.tags, ["deprem"]);
        assert_eq!(m.dates().count(), 25);

        let e = TagManifest::from_toml_str(
            "tags = [\"#Deprem\", \"deprem\"]\ndate_from = 2020-10-30\ndate_to = 2020-11-23\n",
        )
        .unwrap_err();
        assert!(matches!(e, ManifestError::DuplicateTag(ref t) if t == "deprem"));

        let e = TagManifest::new(["a"], d("2020-11-02"), d("2020-11-01")).unwrap_err();
        assert!(matches!(e, ManifestError::InvertedRange { .. }));
        assert!(matches!(
            TagManifest::new(Vec::<String>::new(), d("2020-11-01"), d("2020-11-01")),
            Err(ManifestError::NoTags)
        ));
    }

    fn rec(tag: &str, dt: &str) -> RawTweet {
        RawTweet {
            hashtag: tag.into(),
            datetime_raw: dt.into(),
            tweet_id: "1".into(),
            text: "t".into(),
            username: "u".into(),
        }
    }

    #[test]
    fn filter_matches_tags_case_insensitively_and_dates_inclusively() {
        let m = TagManifest::new(["izmirdeprem"], d("2020-10-30"), d("2020-11-23")).unwrap();
        let records = vec![
            rec("IZMIRDEPREM", "2020-10-30 14:51:00"),
            rec("#izmirdeprem", "2020-11-23 23:59:59"),
            rec("izmirdeprem", "2020-11-24 00:00:00"),
            rec("izmirdeprem", "2020-11-23T21:30:00Z"),
            rec("deprem", "2020-10-30 14:51:00"),
            rec("izmirdeprem", "bogus"),
        ];
        let out = filter_by_manifest(&records, &m);
        assert_eq!(out.kept.len(), 3);
        assert_eq!(out.kept[2].datetime_raw, "bogus");
        assert_eq!((out.undated, out.off_tag, out.out_of_window), (1, 1, 2));
    }
}
