//! Yearly 1-gram aggregation.
//!
//! Consumes TSV frequency files (`ngram<TAB>year<TAB>match_count<TAB>
//! volume_count`) and accumulates per-year, per-concept counts against a
//! lexicon. Only single-token patterns apply to 1-grams; phrase patterns
//! are skipped and must be reported by the caller (see
//! [`crate::lexicon::VariantLexicon::phrase_patterns`]).
//!
//! Rows whose ngram carries a part-of-speech tag (`_TAG`, an all-caps
//! suffix after the final underscore) are dropped by default because
//! untagged rows already carry the totals; [`PosTagPolicy::Strip`] instead
//! strips the tag and counts the row.

use std::collections::BTreeMap;
use std::fmt;

use crate::lexicon::Side;
use crate::matcher::CompiledMatcher;
use crate::metrics::mean_polarization;
use crate::scalar::Scalar;

/// Default first year of the analysis window.
pub const DEFAULT_YEAR_MIN: i32 = 1800;

/// Default last year of the analysis window.
pub const DEFAULT_YEAR_MAX: i32 = 2010;

/// One parsed line of a 1-gram frequency file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NgramRecord {
    pub ngram: String,
    pub year: i32,
    pub match_count: u64,
    pub volume_count: u64,
}

/// Why a 1-gram line was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NgramReject {
    FieldCount,
    BadYear,
    BadCount,
}

impl fmt::Display for NgramReject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NgramReject::FieldCount => "wrong field count",
            NgramReject::BadYear => "non-integer year",
            NgramReject::BadCount => "non-integer count",
        })
    }
}

/// Parses one line: exactly 4 tab-separated fields with integer year and
/// counts. The ngram is kept verbatim; tag handling happens later.
pub fn parse_ngram_line(line: &str) -> Result<NgramRecord, NgramReject> {
    let mut fields = line.split('\t');
    let ngram = fields.next().unwrap_or("");
    let year = fields.next().ok_or(NgramReject::FieldCount)?;
    let match_count = fields.next().ok_or(NgramReject::FieldCount)?;
    let volume_count = fields.next().ok_or(NgramReject::FieldCount)?;
    if fields.next().is_some() {
        return Err(NgramReject::FieldCount);
    }
    let year: i32 = year.parse().map_err(|_| NgramReject::BadYear)?;
    if year < 0 {
        return Err(NgramReject::BadYear);
    }
    Ok(NgramRecord {
        ngram: ngram.to_string(),
        year,
        match_count: match_count.parse().map_err(|_| NgramReject::BadCount)?,
        volume_count: volume_count
            .trim_end_matches(['\r', '\n'])
            .parse()
            .map_err(|_| NgramReject::BadCount)?,
    })
}

/// Splits a part-of-speech tag off an ngram: `colour_NOUN` gives
/// `("colour", "NOUN")`. A tag is a nonempty all-caps ASCII suffix after
/// the final underscore.
pub fn split_pos_tag(ngram: &str) -> Option<(&str, &str)> {
    let (base, tag) = ngram.rsplit_once('_')?;
    if !tag.is_empty() && tag.bytes().all(|b| b.is_ascii_uppercase()) {
        Some((base, tag))
    } else {
        None
    }
}

/// What to do with rows carrying a part-of-speech tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PosTagPolicy {
    /// Drop tagged rows; untagged rows already carry the totals.
    #[default]
    Drop,
    /// Strip the tag and count the row.
    Strip,
}

/// Accumulation switches.
#[derive(Debug, Clone, Copy)]
pub struct YearOptions {
    pub year_min: i32,
    pub year_max: i32,
    /// Accumulate `volume_count` instead of `match_count`.
    pub use_volume_count: bool,
    pub pos_tags: PosTagPolicy,
}

impl Default for YearOptions {
    fn default() -> Self {
        YearOptions {
            year_min: DEFAULT_YEAR_MIN,
            year_max: DEFAULT_YEAR_MAX,
            use_volume_count: false,
            pos_tags: PosTagPolicy::Drop,
        }
    }
}

/// Per-year, per-concept counts of one corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YearStats {
    pub year: i32,
    counts: BTreeMap<usize, (u64, u64)>,
}

impl YearStats {
    /// `(concept index, (a, b))` in concept order.
    pub fn counts(&self) -> impl Iterator<Item = (usize, (u64, u64))> + '_ {
        self.counts.iter().map(|(&idx, &ab)| (idx, ab))
    }
}

/// Polarization of one year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YearPolarization<F = f64> {
    pub year: i32,
    pub v: F,
    pub w_count: usize,
}

/// Mean polarization over the concepts observed in a year. `None` when the
/// year saw no concept (no output row).
pub fn year_polarization<F: Scalar>(stats: &YearStats) -> Option<YearPolarization<F>> {
    let (v, w_count) = mean_polarization(stats.counts().map(|(_, ab)| ab))?;
    Some(YearPolarization { year: stats.year, v, w_count })
}

/// Tallies of non-counting lines seen while accumulating.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LineTally {
    pub counted: u64,
    pub rejected: u64,
    pub pos_dropped: u64,
    pub out_of_range: u64,
    pub unmatched: u64,
}

impl LineTally {
    pub fn merge(&mut self, other: LineTally) {
        self.counted += other.counted;
        self.rejected += other.rejected;
        self.pos_dropped += other.pos_dropped;
        self.out_of_range += other.out_of_range;
        self.unmatched += other.unmatched;
    }
}

/// Sharded per-year accumulator. Merging adds counts, so splitting a file
/// set into arbitrary chunks yields the same result as a single pass.
#[derive(Debug, Clone)]
pub struct YearAccumulator {
    opts: YearOptions,
    years: BTreeMap<i32, BTreeMap<usize, (u64, u64)>>,
    tally: LineTally,
}

impl YearAccumulator {
    pub fn new(opts: YearOptions) -> Self {
        YearAccumulator {
            opts,
            years: BTreeMap::new(),
            tally: LineTally::default(),
        }
    }

    pub fn tally(&self) -> LineTally {
        self.tally
    }

    /// Parses and accumulates one raw line.
    pub fn add_line(&mut self, line: &str, matcher: &CompiledMatcher) {
        match parse_ngram_line(line) {
            Ok(record) => self.add_record(&record, matcher),
            Err(_) => self.tally.rejected += 1,
        }
    }

    pub fn add_record(&mut self, record: &NgramRecord, matcher: &CompiledMatcher) {
        if record.year < self.opts.year_min || record.year > self.opts.year_max {
            self.tally.out_of_range += 1;
            return;
        }
        let ngram: &str = match (split_pos_tag(&record.ngram), self.opts.pos_tags) {
            (Some(_), PosTagPolicy::Drop) => {
                self.tally.pos_dropped += 1;
                return;
            }
            (Some((base, _)), PosTagPolicy::Strip) => base,
            (None, _) => &record.ngram,
        };
        let normalized = crate::lexicon::normalize_token(ngram);
        let Some((concept, side)) = matcher.match_token(&normalized) else {
            self.tally.unmatched += 1;
            return;
        };
        let n = if self.opts.use_volume_count {
            record.volume_count
        } else {
            record.match_count
        };
        let entry = self.years.entry(record.year).or_default().entry(concept).or_default();
        match side {
            Side::American => entry.0 += n,
            Side::British => entry.1 += n,
        }
        self.tally.counted += 1;
    }

    pub fn merge(&mut self, other: YearAccumulator) {
        for (year, other_counts) in other.years {
            let counts = self.years.entry(year).or_default();
            for (concept, (a, b)) in other_counts {
                let entry = counts.entry(concept).or_default();
                entry.0 += a;
                entry.1 += b;
            }
        }
        self.tally.merge(other.tally);
    }

    /// Finished per-year statistics in ascending year order. Concepts that
    /// only accumulated zero counts (possible with zero-count input rows)
    /// are pruned; years left empty emit nothing.
    pub fn into_year_stats(self) -> Vec<YearStats> {
        self.years
            .into_iter()
            .filter_map(|(year, mut counts)| {
                counts.retain(|_, (a, b)| *a + *b > 0);
                if counts.is_empty() {
                    None
                } else {
                    Some(YearStats { year, counts })
                }
            })
            .collect()
    }
}
