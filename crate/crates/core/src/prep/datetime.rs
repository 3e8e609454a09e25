//! Timestamp normalization to Türkiye local time (fixed +03:00).

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, FixedOffset, NaiveDate, NaiveDateTime, Timelike};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Offset every timestamp is rendered in.
pub const LOCAL_OFFSET_SECS: i32 = 3 * 3600;
pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%d %H:%M:%S";

fn local_offset() -> FixedOffset {
    FixedOffset::east_opt(LOCAL_OFFSET_SECS).expect("valid offset")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unrecognized datetime layout: {raw:?}")]
pub struct DatetimeError {
    pub raw: String,
}

/// Wall-clock time at +03:00 with second precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalTimestamp(NaiveDateTime);

impl LocalTimestamp {
    pub fn from_local(naive: NaiveDateTime) -> Self {
        Self(naive.with_nanosecond(0).unwrap_or(naive))
    }

    pub fn naive(&self) -> NaiveDateTime {
        self.0
    }

    pub fn date(&self) -> NaiveDate {
        self.0.date()
    }

    pub fn hour(&self) -> u32 {
        self.0.hour()
    }

    /// `YYYY-MM` bucket key.
    pub fn month_key(&self) -> String {
        self.0.format("%Y-%m").to_string()
    }
}

impl fmt::Display for LocalTimestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format(TIMESTAMP_FORMAT))
    }
}

impl FromStr for LocalTimestamp {
    type Err = DatetimeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        normalize_datetime(s)
    }
}

impl Serialize for LocalTimestamp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LocalTimestamp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses one of the accepted layouts and renders it at +03:00.
///
/// Accepted: `YYYY-MM-DD HH:MM:SS` (already local), and ISO-8601 with a `Z`
/// or numeric offset, using either `T` or a space between date and time.
/// Fractional seconds are truncated.
pub fn normalize_datetime(raw: &str) -> Result<LocalTimestamp, DatetimeError> {
    let s = raw.trim();
    if let Ok(naive) = NaiveDateTime::parse_from_str(s, TIMESTAMP_FORMAT) {
        return Ok(LocalTimestamp::from_local(naive));
    }
    let zoned = DateTime::parse_from_rfc3339(s)
        .or_else(|_| DateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S%:z"))
        .or_else(|_| DateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S%z"));
    match zoned {
        Ok(dt) => Ok(LocalTimestamp::from_local(
            dt.with_timezone(&local_offset()).naive_local(),
        )),
        Err(_) => Err(DatetimeError { raw: raw.to_string() }),
    }
}
