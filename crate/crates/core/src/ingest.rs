//! Streaming ingestion of geotagged message corpora.
//!
//! Input is UTF-8 JSON-lines with required keys `text`, `lat`, `lon`,
//! `created_at` (ISO-8601 with a zone designator) and an optional `lang`
//! tag. Gzip-compressed files are detected by magic bytes. Malformed lines
//! are rejected with a reason code and counted, never fatal; reading the
//! source itself failing is fatal.
//!
//! The bounding-box, language and time-window filters reproduce offline
//! what the original collection applied at the feed: all boundaries are
//! inclusive, and language comparison ignores case and region subtags
//! (`en-GB` matches `en`).

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use chrono::{DateTime, Utc};
use flate2::bufread::GzDecoder;
use serde::Deserialize;
use thiserror::Error;

/// One geotagged text record.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoMessage {
    pub text: String,
    pub lat: f64,
    pub lon: f64,
    pub created_at: DateTime<Utc>,
    pub lang: Option<String>,
}

/// Why a line was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RejectReason {
    BadStructure,
    MissingField,
    OutOfRangeCoord,
    BadTimestamp,
}

impl RejectReason {
    pub const ALL: [RejectReason; 4] = [
        RejectReason::BadStructure,
        RejectReason::MissingField,
        RejectReason::OutOfRangeCoord,
        RejectReason::BadTimestamp,
    ];

    pub fn code(self) -> &'static str {
        match self {
            RejectReason::BadStructure => "bad-structure",
            RejectReason::MissingField => "missing-field",
            RejectReason::OutOfRangeCoord => "out-of-range-coord",
            RejectReason::BadTimestamp => "bad-timestamp",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Per-reason reject counters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RejectTally {
    counts: BTreeMap<RejectReason, u64>,
}

impl RejectTally {
    pub fn add(&mut self, reason: RejectReason) {
        *self.counts.entry(reason).or_default() += 1;
    }

    pub fn merge(&mut self, other: &RejectTally) {
        for (&reason, &n) in &other.counts {
            *self.counts.entry(reason).or_default() += n;
        }
    }

    pub fn get(&self, reason: RejectReason) -> u64 {
        self.counts.get(&reason).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `(code, count)` rows for every reason, zeros included.
    pub fn rows(&self) -> Vec<(&'static str, u64)> {
        RejectReason::ALL
            .iter()
            .map(|&r| (r.code(), self.get(r)))
            .collect()
    }
}

#[derive(Deserialize)]
struct RawMessage {
    #[serde(default)]
    text: Option<String>,
    #[serde(default)]
    lat: Option<f64>,
    #[serde(default)]
    lon: Option<f64>,
    #[serde(default)]
    created_at: Option<String>,
    #[serde(default)]
    lang: Option<String>,
}

/// Parses one JSON line into a message or a reject reason.
pub fn parse_message_line(line: &str) -> Result<GeoMessage, RejectReason> {
    let raw: RawMessage =
        serde_json::from_str(line).map_err(|_| RejectReason::BadStructure)?;
    let (Some(text), Some(lat), Some(lon), Some(created_at)) =
        (raw.text, raw.lat, raw.lon, raw.created_at)
    else {
        return Err(RejectReason::MissingField);
    };
    if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
        return Err(RejectReason::OutOfRangeCoord);
    }
    let created_at = DateTime::parse_from_rfc3339(&created_at)
        .map_err(|_| RejectReason::BadTimestamp)?
        .with_timezone(&Utc);
    Ok(GeoMessage {
        text,
        lat,
        lon,
        created_at,
        lang: raw.lang,
    })
}

/// One item of a message stream.
#[derive(Debug)]
pub enum ReadItem {
    Message(Box<GeoMessage>),
    Rejected(RejectReason),
}

/// Line-by-line reader over a JSONL source. Whitespace-only lines are
/// skipped without counting; memory use is bounded by the longest line.
pub struct MessageReader<R: BufRead> {
    lines: std::io::Lines<R>,
}

impl<R: BufRead> MessageReader<R> {
    pub fn new(source: R) -> Self {
        MessageReader { lines: source.lines() }
    }
}

impl<R: BufRead> Iterator for MessageReader<R> {
    type Item = std::io::Result<ReadItem>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            match self.lines.next()? {
                Err(e) => return Some(Err(e)),
                Ok(line) if line.trim().is_empty() => continue,
                Ok(line) => {
                    return Some(Ok(match parse_message_line(&line) {
                        Ok(msg) => ReadItem::Message(Box::new(msg)),
                        Err(reason) => ReadItem::Rejected(reason),
                    }))
                }
            }
        }
    }
}

/// Opens a file as a buffered reader, transparently decompressing gzip
/// (detected by the 1f 8b magic bytes, not the file name).
pub fn open_maybe_gzip(path: &Path) -> std::io::Result<Box<dyn BufRead + Send>> {
    let file = File::open(path)?;
    let mut reader = BufReader::with_capacity(64 * 1024, file);
    let magic = reader.fill_buf()?;
    if magic.len() >= 2 && magic[0] == 0x1f && magic[1] == 0x8b {
        Ok(Box::new(BufReader::with_capacity(
            64 * 1024,
            GzDecoder::new(reader),
        )))
    } else {
        Ok(Box::new(reader))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum BboxError {
    #[error("bounding box must be lat0,lon0,lat1,lon1")]
    Format,
    #[error("bounding box coordinates out of range or misordered")]
    Invalid,
}

/// Inclusive geographic bounding box (no antimeridian wrapping).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub lat0: f64,
    pub lon0: f64,
    pub lat1: f64,
    pub lon1: f64,
}

impl BoundingBox {
    pub fn new(lat0: f64, lon0: f64, lat1: f64, lon1: f64) -> Result<Self, BboxError> {
        let lat_ok = (-90.0..=90.0).contains(&lat0) && (-90.0..=90.0).contains(&lat1);
        let lon_ok = (-180.0..=180.0).contains(&lon0) && (-180.0..=180.0).contains(&lon1);
        if !lat_ok || !lon_ok || lat0 > lat1 || lon0 > lon1 {
            return Err(BboxError::Invalid);
        }
        Ok(BoundingBox { lat0, lon0, lat1, lon1 })
    }

    /// Parses `lat0,lon0,lat1,lon1`.
    pub fn parse(spec: &str) -> Result<Self, BboxError> {
        let parts: Vec<f64> = spec
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| BboxError::Format)?;
        let [lat0, lon0, lat1, lon1] = parts[..] else {
            return Err(BboxError::Format);
        };
        BoundingBox::new(lat0, lon0, lat1, lon1)
    }

    /// Inclusive on all edges.
    pub fn contains(&self, lat: f64, lon: f64) -> bool {
        (self.lat0..=self.lat1).contains(&lat) && (self.lon0..=self.lon1).contains(&lon)
    }
}

/// Inclusive UTC time window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub since: DateTime<Utc>,
    pub until: DateTime<Utc>,
}

impl TimeWindow {
    pub fn new(since: DateTime<Utc>, until: DateTime<Utc>) -> Option<Self> {
        (since <= until).then_some(TimeWindow { since, until })
    }

    pub fn contains(&self, t: DateTime<Utc>) -> bool {
        self.since <= t && t <= self.until
    }
}

/// Whether a message's language tag matches the target, comparing primary
/// subtags case-insensitively. Untagged messages pass only with
/// `keep_untagged`.
pub fn lang_matches(msg_lang: Option<&str>, target: &str, keep_untagged: bool) -> bool {
    match msg_lang {
        None => keep_untagged,
        Some(tag) => primary_subtag(tag).eq_ignore_ascii_case(primary_subtag(target)),
    }
}

fn primary_subtag(tag: &str) -> &str {
    tag.split(['-', '_']).next().unwrap_or(tag)
}

/// Combined retention filter. Every component is optional; filters commute,
/// so this conjunction is equivalent to any chaining order.
#[derive(Debug, Clone, Default)]
pub struct MessageFilter {
    pub bbox: Option<BoundingBox>,
    /// Target language tag; `None` keeps every message regardless of tag.
    pub lang: Option<String>,
    pub keep_untagged: bool,
    pub window: Option<TimeWindow>,
}

impl MessageFilter {
    pub fn retain(&self, msg: &GeoMessage) -> bool {
        if let Some(bbox) = &self.bbox {
            if !bbox.contains(msg.lat, msg.lon) {
                return false;
            }
        }
        if let Some(target) = &self.lang {
            if !lang_matches(msg.lang.as_deref(), target, self.keep_untagged) {
                return false;
            }
        }
        if let Some(window) = &self.window {
            if !window.contains(msg.created_at) {
                return false;
            }
        }
        true
    }
}
