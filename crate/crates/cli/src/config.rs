//! Run configurations and shared loading helpers.

use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDate, Utc};

use lexatlas::geogrid::{DEFAULT_MIN_MATCHES, DEFAULT_RESOLUTION};
use lexatlas::ingest::BoundingBox;
use lexatlas::lexicon::{builtin_lexicon, LexiconKind, VariantLexicon};
use lexatlas::temporal::{DEFAULT_YEAR_MAX, DEFAULT_YEAR_MIN};

use crate::error::CliError;

/// Default language filter.
pub const DEFAULT_LANG: &str = "en";

/// Default first instant of the collection window (2010-05-10 UTC).
pub fn default_since() -> DateTime<Utc> {
    date_time(2010, 5, 10, 0, 0, 0)
}

/// Default last instant of the collection window (2016-02-28 inclusive).
pub fn default_until() -> DateTime<Utc> {
    date_time(2016, 2, 28, 23, 59, 59)
}

/// Default number of histogram bins over [-1, 1].
pub const DEFAULT_BINS: usize = 40;

fn date_time(y: i32, m: u32, d: u32, h: u32, min: u32, s: u32) -> DateTime<Utc> {
    NaiveDate::from_ymd_opt(y, m, d)
        .and_then(|d| d.and_hms_opt(h, min, s))
        .expect("valid constant date")
        .and_utc()
}

/// `--since` accepts RFC 3339 or a bare date (start of day, UTC).
pub fn parse_since(s: &str) -> Result<DateTime<Utc>, String> {
    parse_instant(s, (0, 0, 0))
}

/// `--until` accepts RFC 3339 or a bare date (end of day, UTC, inclusive).
pub fn parse_until(s: &str) -> Result<DateTime<Utc>, String> {
    parse_instant(s, (23, 59, 59))
}

fn parse_instant(s: &str, fallback_hms: (u32, u32, u32)) -> Result<DateTime<Utc>, String> {
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Ok(t.with_timezone(&Utc));
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(fallback_hms.0, fallback_hms.1, fallback_hms.2))
        .map(|t| t.and_utc())
        .ok_or_else(|| format!("`{s}` is neither RFC 3339 nor YYYY-MM-DD"))
}

/// Parses `min,max` year bounds.
pub fn parse_years(spec: &str) -> Result<(i32, i32), String> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [min, max] = parts[..] else {
        return Err(format!("`{spec}`: expected min,max"));
    };
    let min: i32 = min.parse().map_err(|_| format!("bad year `{min}`"))?;
    let max: i32 = max.parse().map_err(|_| format!("bad year `{max}`"))?;
    if min > max {
        return Err(format!("year range {min},{max} is reversed"));
    }
    Ok((min, max))
}

/// Where a run's lexicon comes from.
#[derive(Debug, Clone)]
pub enum LexiconSource {
    Builtin(LexiconKind),
    Path(PathBuf),
}

impl LexiconSource {
    /// Loads and validates the lexicon. Missing files map to the
    /// missing-input exit code, parse/validation failures to the
    /// invalid-lexicon code.
    pub fn load(&self) -> Result<VariantLexicon, CliError> {
        match self {
            LexiconSource::Builtin(kind) => Ok(builtin_lexicon(*kind).clone()),
            LexiconSource::Path(path) => {
                let reader = open_input(path)?;
                VariantLexicon::from_tsv(reader).map_err(|e| match e {
                    lexatlas::lexicon::LexiconError::Io(e) => {
                        CliError::from_input_io(path, e)
                    }
                    other => CliError::invalid_lexicon(format!("{}: {other}", path.display())),
                })
            }
        }
    }

    /// Stable identifier recorded in logs and file headers.
    pub fn id(&self) -> String {
        match self {
            LexiconSource::Builtin(kind) => format!("builtin:{kind}"),
            LexiconSource::Path(path) => path.display().to_string(),
        }
    }
}

/// Opens one input file with gzip auto-detection, classifying failures.
pub fn open_input(path: &Path) -> Result<Box<dyn std::io::BufRead + Send>, CliError> {
    lexatlas::ingest::open_maybe_gzip(path).map_err(|e| CliError::from_input_io(path, e))
}

/// Everything a spatial run needs.
#[derive(Debug, Clone)]
pub struct SpatialConfig {
    pub lexicon: LexiconSource,
    pub inputs: Vec<PathBuf>,
    pub out: PathBuf,
    pub grid_res: f64,
    pub min_matches: u64,
    pub bbox: Option<BoundingBox>,
    /// Target language; `None` disables the language filter.
    pub lang: Option<String>,
    pub keep_untagged: bool,
    pub since: DateTime<Utc>,
    pub until: DateTime<Utc>,
    pub bins: usize,
    pub countries: Option<PathBuf>,
    pub country_prop: String,
    /// Worker threads; `None` uses one per logical CPU.
    pub workers: Option<usize>,
    pub dedupe_per_message: bool,
    pub keep_social_tokens: bool,
    pub affix_matching: bool,
}

impl SpatialConfig {
    pub fn new(lexicon: LexiconSource, inputs: Vec<PathBuf>, out: PathBuf) -> Self {
        SpatialConfig {
            lexicon,
            inputs,
            out,
            grid_res: DEFAULT_RESOLUTION,
            min_matches: DEFAULT_MIN_MATCHES,
            bbox: None,
            lang: Some(DEFAULT_LANG.to_string()),
            keep_untagged: false,
            since: default_since(),
            until: default_until(),
            bins: DEFAULT_BINS,
            countries: None,
            country_prop: lexatlas::countries::DEFAULT_COUNTRY_PROPERTY.to_string(),
            workers: None,
            dedupe_per_message: false,
            keep_social_tokens: false,
            affix_matching: true,
        }
    }
}

/// Everything a temporal run needs.
#[derive(Debug, Clone)]
pub struct TemporalConfig {
    pub lexicon: LexiconSource,
    /// `(corpus label, file)` pairs; a label may repeat across files.
    pub corpora: Vec<(String, PathBuf)>,
    pub out: PathBuf,
    pub year_min: i32,
    pub year_max: i32,
    pub use_volume_count: bool,
    pub strip_pos_tags: bool,
    pub workers: Option<usize>,
    pub affix_matching: bool,
}

impl TemporalConfig {
    pub fn new(lexicon: LexiconSource, corpora: Vec<(String, PathBuf)>, out: PathBuf) -> Self {
        TemporalConfig {
            lexicon,
            corpora,
            out,
            year_min: DEFAULT_YEAR_MIN,
            year_max: DEFAULT_YEAR_MAX,
            use_volume_count: false,
            strip_pos_tags: false,
            workers: None,
            affix_matching: true,
        }
    }
}

/// Builds the rayon pool a run executes on.
pub fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(CliError::other)
}
