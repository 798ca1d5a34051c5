//! Corpus analytics for the British/American polarization of written English.
//!
//! The library measures, for a configurable lexicon of British/American
//! variant pairs, which side of each pair dominates — per grid cell of the
//! world (from geotagged message corpora) and per year (from 1-gram
//! frequency datasets). The score for a single concept is
//! `(a - b) / (a + b)` where `a` counts American forms and `b` British
//! forms; cell, country and year scores are plain means of concept scores.
//!
//! Modules follow the pipeline: [`lexicon`] defines what counts for which
//! side, [`matcher`] finds occurrences in tokenized text, [`ingest`] streams
//! and filters geotagged messages, [`geogrid`] bins matches into a world
//! grid, [`temporal`] aggregates yearly 1-gram counts, and [`render`] turns
//! results into CSV/PNG artifacts.

pub mod countries;
pub mod geogrid;
pub mod ingest;
pub mod lexicon;
pub mod matcher;
pub mod metrics;
pub mod render;
pub mod scalar;
pub mod temporal;

pub use scalar::Scalar;

/// Scalar type used by all shipped analyses. The metrics layer is generic
/// over [`Scalar`]; everything the binaries emit is computed in `f64`.
pub type Score = f64;

/// Cell score at the default scalar type.
pub type CellScore = geogrid::CellPolarization<Score>;

/// Year score at the default scalar type.
pub type YearScore = temporal::YearPolarization<Score>;
