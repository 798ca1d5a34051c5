//! World-grid binning and per-cell/per-country polarization.
//!
//! The grid is equirectangular, anchored at (-90°, -180°), with square
//! cells of a configurable resolution (default 0.25°). Cells are half-open
//! `[k·res, (k+1)·res)` rectangles; the exact upper boundary of the globe
//! clamps into the last row/column.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::countries::CountryIndex;
use crate::matcher::MatchHit;
use crate::metrics::mean_polarization;
use crate::scalar::Scalar;
use crate::lexicon::Side;

/// Default cell edge length in degrees.
pub const DEFAULT_RESOLUTION: f64 = 0.25;

/// Default minimum matches for a cell to be retained.
pub const DEFAULT_MIN_MATCHES: u64 = 10;

/// Country code reported for cells whose center falls in no polygon.
pub const NO_COUNTRY: &str = "--";

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("grid resolution {0}° must be positive and divide 90° evenly")]
    BadResolution(f64),
    #[error("coordinate out of range: lat {lat}, lon {lon}")]
    OutOfRange { lat: f64, lon: f64 },
}

/// One grid cell, addressed south-to-north (`row`) and west-to-east (`col`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId {
    pub row: u32,
    pub col: u32,
}

/// World grid geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    res: f64,
    rows: u32,
    cols: u32,
}

impl Grid {
    pub fn new(res: f64) -> Result<Self, GridError> {
        if !(res > 0.0 && res <= 90.0) {
            return Err(GridError::BadResolution(res));
        }
        let steps = 90.0 / res;
        if (steps - steps.round()).abs() > 1e-9 {
            return Err(GridError::BadResolution(res));
        }
        let steps = steps.round() as u32;
        Ok(Grid {
            res,
            rows: 2 * steps,
            cols: 4 * steps,
        })
    }

    pub fn resolution(&self) -> f64 {
        self.res
    }

    pub fn rows(&self) -> u32 {
        self.rows
    }

    pub fn cols(&self) -> u32 {
        self.cols
    }

    /// Cell containing a coordinate. `row = floor((lat+90)/res)`,
    /// `col = floor((lon+180)/res)`; lat 90 and lon 180 clamp into the last
    /// row/column.
    pub fn cell_of(&self, lat: f64, lon: f64) -> Result<CellId, GridError> {
        if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
            return Err(GridError::OutOfRange { lat, lon });
        }
        let row = (((lat + 90.0) / self.res).floor() as u32).min(self.rows - 1);
        let col = (((lon + 180.0) / self.res).floor() as u32).min(self.cols - 1);
        Ok(CellId { row, col })
    }

    /// `(lat_min, lon_min, lat_max, lon_max)` of a cell.
    pub fn bounds(&self, cell: CellId) -> (f64, f64, f64, f64) {
        let lat_min = -90.0 + f64::from(cell.row) * self.res;
        let lon_min = -180.0 + f64::from(cell.col) * self.res;
        (lat_min, lon_min, lat_min + self.res, lon_min + self.res)
    }

    /// Center coordinate of a cell.
    pub fn center(&self, cell: CellId) -> (f64, f64) {
        let (lat_min, lon_min, ..) = self.bounds(cell);
        (lat_min + self.res / 2.0, lon_min + self.res / 2.0)
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid::new(DEFAULT_RESOLUTION).expect("default resolution is valid")
    }
}

/// Accumulated per-concept counts of one cell. Only concepts with at least
/// one occurrence are present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellStats {
    pub cell: CellId,
    counts: BTreeMap<usize, (u64, u64)>,
    total: u64,
}

impl CellStats {
    /// Sum of all American and British occurrences in the cell.
    pub fn total_matches(&self) -> u64 {
        self.total
    }

    /// `(concept index, (a, b))` in concept order.
    pub fn counts(&self) -> impl Iterator<Item = (usize, (u64, u64))> + '_ {
        self.counts.iter().map(|(&idx, &ab)| (idx, ab))
    }

    pub fn concept_count(&self) -> usize {
        self.counts.len()
    }
}

/// Polarization of one retained cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellPolarization<F = f64> {
    pub cell: CellId,
    pub v: F,
    pub w_count: usize,
    pub total_matches: u64,
}

/// Mean polarization over the concepts observed in a cell. `None` for an
/// empty cell (no output row).
pub fn cell_polarization<F: Scalar>(stats: &CellStats) -> Option<CellPolarization<F>> {
    let (v, w_count) = mean_polarization(stats.counts().map(|(_, ab)| ab))?;
    Some(CellPolarization {
        cell: stats.cell,
        v,
        w_count,
        total_matches: stats.total_matches(),
    })
}

/// Retains exactly the cells with at least `min_matches` total matches.
pub fn apply_threshold(cells: Vec<CellStats>, min_matches: u64) -> Vec<CellStats> {
    cells
        .into_iter()
        .filter(|c| c.total_matches() >= min_matches)
        .collect()
}

/// Sharded accumulator of per-cell concept counts. Merging is count
/// addition, so any partitioning of the same message multiset produces
/// identical results.
#[derive(Debug, Clone)]
pub struct GridAccumulator {
    grid: Grid,
    cells: BTreeMap<CellId, BTreeMap<usize, (u64, u64)>>,
}

impl GridAccumulator {
    pub fn new(grid: Grid) -> Self {
        GridAccumulator {
            grid,
            cells: BTreeMap::new(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Adds one message's match hits to the cell containing `(lat, lon)`.
    /// With `dedupe` set, each (concept, side) contributes at most once per
    /// message.
    pub fn add_message(
        &mut self,
        lat: f64,
        lon: f64,
        hits: &[MatchHit],
        dedupe: bool,
    ) -> Result<(), GridError> {
        if hits.is_empty() {
            return Ok(());
        }
        let cell = self.grid.cell_of(lat, lon)?;
        let counts = self.cells.entry(cell).or_default();
        if dedupe {
            let mut seen: Vec<(usize, Side)> = Vec::with_capacity(hits.len());
            for hit in hits {
                let key = (hit.concept, hit.side);
                if !seen.contains(&key) {
                    seen.push(key);
                    bump(counts, hit.concept, hit.side, 1);
                }
            }
        } else {
            for hit in hits {
                bump(counts, hit.concept, hit.side, 1);
            }
        }
        Ok(())
    }

    /// Folds another shard into this one by count addition.
    pub fn merge(&mut self, other: GridAccumulator) {
        for (cell, other_counts) in other.cells {
            let counts = self.cells.entry(cell).or_default();
            for (concept, (a, b)) in other_counts {
                let entry = counts.entry(concept).or_default();
                entry.0 += a;
                entry.1 += b;
            }
        }
    }

    /// Finished per-cell statistics, ordered by (row, col).
    pub fn into_cells(self) -> Vec<CellStats> {
        self.cells
            .into_iter()
            .map(|(cell, counts)| {
                let total = counts.values().map(|(a, b)| a + b).sum();
                CellStats { cell, counts, total }
            })
            .collect()
    }
}

fn bump(counts: &mut BTreeMap<usize, (u64, u64)>, concept: usize, side: Side, n: u64) {
    let entry = counts.entry(concept).or_default();
    match side {
        Side::American => entry.0 += n,
        Side::British => entry.1 += n,
    }
}

/// Per-country mean of member-cell polarizations. Each cell is assigned to
/// at most one country by a point-in-polygon test of its center; cells
/// matching no polygon are grouped under [`NO_COUNTRY`]. Results are sorted
/// by country code.
pub fn country_polarization<F: Scalar>(
    cells: &[CellPolarization<F>],
    grid: &Grid,
    index: &CountryIndex,
) -> Vec<CountryScore<F>> {
    let mut groups: BTreeMap<&str, (F, usize)> = BTreeMap::new();
    for cell in cells {
        let (lat, lon) = grid.center(cell.cell);
        let code = index.locate(lat, lon).unwrap_or(NO_COUNTRY);
        let entry = groups.entry(code).or_insert((F::zero(), 0));
        entry.0 = entry.0 + cell.v;
        entry.1 += 1;
    }
    groups
        .into_iter()
        .map(|(code, (sum, n))| CountryScore {
            code: code.to_string(),
            v: sum / F::from_count(n as u64),
            n_cells: n,
        })
        .collect()
}

/// Mean polarization of the retained cells inside one country.
#[derive(Debug, Clone, PartialEq)]
pub struct CountryScore<F = f64> {
    pub code: String,
    pub v: F,
    pub n_cells: usize,
}

/// One histogram bin over `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin<F = f64> {
    pub lo: F,
    pub hi: F,
    pub count: u64,
}

/// Equal-width histogram of polarization values over `[-1, 1]`. Bins are
/// left-closed and right-open except the last, which is closed; the bin of a
/// value is `floor((v + 1) / width)` clamped into range.
pub fn histogram<F: Scalar>(values: impl IntoIterator<Item = F>, n_bins: usize) -> Vec<HistogramBin<F>> {
    assert!(n_bins >= 1, "histogram needs at least one bin");
    let one = F::one();
    let width = (one + one) / F::from_count(n_bins as u64);
    let mut counts = vec![0u64; n_bins];
    for v in values {
        let idx = ((v + one) / width).floor();
        let idx = idx.to_usize().unwrap_or(0).min(n_bins - 1);
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            lo: -one + width * F::from_count(i as u64),
            hi: if i == n_bins - 1 {
                one
            } else {
                -one + width * F::from_count(i as u64 + 1)
            },
            count,
        })
        .collect()
}
