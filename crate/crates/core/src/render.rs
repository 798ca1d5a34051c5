//! Output artifacts: CSV tables, the heatmap raster and the run manifest.
//!
//! Every file is written atomically (temp sibling + rename) and
//! deterministically: identical inputs produce byte-identical CSVs and
//! manifest, and the raster is encoded with a fixed PNG configuration.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use image::RgbaImage;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::geogrid::{CellPolarization, CountryScore, Grid, HistogramBin};
use crate::ingest::RejectTally;
use crate::lexicon::{Side, VariantLexicon};
use crate::scalar::Scalar;
use crate::temporal::YearPolarization;

pub const CELLS_CSV: &str = "cells.csv";
pub const COUNTRIES_CSV: &str = "countries.csv";
pub const HISTOGRAM_CSV: &str = "histogram.csv";
pub const HEATMAP_PNG: &str = "heatmap.png";
pub const REJECTS_CSV: &str = "rejects.csv";
pub const SKIPPED_PATTERNS_CSV: &str = "skipped_patterns.csv";
pub const MANIFEST_JSON: &str = "manifest.json";

/// Diverging color for a polarization value: blue at -1 (purely British),
/// white at 0, red at +1 (purely American), linearly interpolated per RGB
/// channel on each half. Values are clamped into `[-1, 1]`.
pub fn diverging_rgba<F: Scalar>(v: F) -> [u8; 4] {
    const BLUE: [f64; 3] = [0.0, 0.0, 255.0];
    const WHITE: [f64; 3] = [255.0, 255.0, 255.0];
    const RED: [f64; 3] = [255.0, 0.0, 0.0];

    let v = v.to_f64().unwrap_or(0.0).clamp(-1.0, 1.0);
    let (from, to, t) = if v < 0.0 {
        (BLUE, WHITE, v + 1.0)
    } else {
        (WHITE, RED, v)
    };
    let mut rgba = [255u8; 4];
    for (slot, (a, b)) in rgba.iter_mut().zip(from.iter().zip(to.iter())) {
        *slot = (a + (b - a) * t).round() as u8;
    }
    rgba
}

/// Equirectangular raster with one pixel per grid cell, north at the top.
/// Retained cells get their diverging color; absent cells stay fully
/// transparent.
pub fn render_heatmap<F: Scalar>(cells: &[CellPolarization<F>], grid: &Grid) -> RgbaImage {
    let mut img = RgbaImage::new(grid.cols(), grid.rows());
    for cell in cells {
        let x = cell.cell.col;
        let y = grid.rows() - 1 - cell.cell.row;
        img.put_pixel(x, y, image::Rgba(diverging_rgba(cell.v)));
    }
    img
}

pub fn write_cells_csv<F: Scalar>(
    w: &mut (impl Write + ?Sized),
    grid: &Grid,
    cells: &[CellPolarization<F>],
) -> io::Result<()> {
    writeln!(w, "lat_min,lon_min,lat_max,lon_max,v,w_count,total_matches")?;
    for cell in cells {
        let (lat_min, lon_min, lat_max, lon_max) = grid.bounds(cell.cell);
        writeln!(
            w,
            "{lat_min:.2},{lon_min:.2},{lat_max:.2},{lon_max:.2},{:.6},{},{}",
            cell.v, cell.w_count, cell.total_matches
        )?;
    }
    Ok(())
}

pub fn write_countries_csv<F: Scalar>(
    w: &mut (impl Write + ?Sized),
    countries: &[CountryScore<F>],
) -> io::Result<()> {
    writeln!(w, "country,v,n_cells")?;
    for c in countries {
        writeln!(w, "{},{:.6},{}", c.code, c.v, c.n_cells)?;
    }
    Ok(())
}

pub fn write_histogram_csv<F: Scalar>(
    w: &mut (impl Write + ?Sized),
    bins: &[HistogramBin<F>],
) -> io::Result<()> {
    writeln!(w, "bin_lo,bin_hi,count")?;
    for bin in bins {
        writeln!(w, "{:.6},{:.6},{}", bin.lo, bin.hi, bin.count)?;
    }
    Ok(())
}

pub fn write_year_csv<F: Scalar>(
    w: &mut (impl Write + ?Sized),
    years: &[YearPolarization<F>],
) -> io::Result<()> {
    writeln!(w, "year,v,w_count")?;
    for y in years {
        writeln!(w, "{},{:.6},{}", y.year, y.v, y.w_count)?;
    }
    Ok(())
}

pub fn write_rejects_csv(w: &mut (impl Write + ?Sized), tally: &RejectTally) -> io::Result<()> {
    writeln!(w, "reason,count")?;
    for (code, count) in tally.rows() {
        writeln!(w, "{code},{count}")?;
    }
    Ok(())
}

/// Machine-readable list of lexicon patterns a run could not apply (phrase
/// patterns in 1-gram mode).
pub fn write_skipped_patterns_csv(
    w: &mut (impl Write + ?Sized),
    skipped: &[(&str, Side, String)],
) -> io::Result<()> {
    writeln!(w, "concept_id,side,surface")?;
    for (id, side, surface) in skipped {
        writeln!(w, "{id},{side},{surface}")?;
    }
    Ok(())
}

/// Run summary written next to the data files.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub inputs: Vec<String>,
    pub lexicon_sha256: String,
    pub flags: serde_json::Value,
    pub emitted_cells: u64,
    pub rejects: BTreeMap<String, u64>,
}

pub fn write_manifest(w: &mut (impl Write + ?Sized), manifest: &Manifest) -> io::Result<()> {
    let json = serde_json::to_string_pretty(manifest)?;
    w.write_all(json.as_bytes())?;
    w.write_all(b"\n")
}

/// Hash of the canonical lexicon serialization, recorded in the manifest.
pub fn lexicon_sha256(lexicon: &VariantLexicon) -> String {
    let digest = Sha256::digest(lexicon.to_tsv().as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

/// Writes a file atomically: the body goes to a temp sibling which is then
/// renamed over the destination. Failures carry the destination path.
pub fn write_atomic(
    path: &Path,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> io::Result<()> {
    let result = (|| {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = std::path::PathBuf::from(tmp);
        {
            let file = std::fs::File::create(&tmp)?;
            let mut writer = io::BufWriter::new(file);
            body(&mut writer)?;
            writer.flush()?;
        }
        std::fs::rename(&tmp, path)
    })();
    result.map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

/// PNG-encodes a raster into bytes with the encoder's fixed defaults.
pub fn encode_png(img: &RgbaImage) -> io::Result<Vec<u8>> {
    let mut bytes = io::Cursor::new(Vec::new());
    img.write_to(&mut bytes, image::ImageFormat::Png)
        .map_err(|e| io::Error::other(e.to_string()))?;
    Ok(bytes.into_inner())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geogrid::{histogram, CellId};

    #[test]
    fn color_scale_endpoints() {
        assert_eq!(diverging_rgba(-1.0), [0, 0, 255, 255]);
        assert_eq!(diverging_rgba(0.0), [255, 255, 255, 255]);
        assert_eq!(diverging_rgba(1.0), [255, 0, 0, 255]);
        assert_eq!(diverging_rgba(2.0), [255, 0, 0, 255]);
        assert_eq!(diverging_rgba(-2.0f32), [0, 0, 255, 255]);
    }

    #[test]
    fn color_scale_monotone_per_half() {
        let mut prev = diverging_rgba(-1.0);
        for i in 1..=100 {
            let v = -1.0 + f64::from(i) / 100.0;
            let c = diverging_rgba(v);
            assert!(c[0] >= prev[0] && c[1] >= prev[1] && c[2] == 255);
            prev = c;
        }
        let mut prev = diverging_rgba(0.0);
        for i in 1..=100 {
            let v = f64::from(i) / 100.0;
            let c = diverging_rgba(v);
            assert!(c[0] == 255 && c[1] <= prev[1] && c[2] <= prev[2]);
            prev = c;
        }
    }

    #[test]
    fn heatmap_single_cell() {
        let grid = Grid::default();
        let cell = grid.cell_of(0.0, 0.0).unwrap();
        assert_eq!(cell, CellId { row: 360, col: 720 });
        let cells = vec![CellPolarization { cell, v: 1.0, w_count: 1, total_matches: 5 }];
        let img = render_heatmap(&cells, &grid);
        assert_eq!((img.width(), img.height()), (1440, 720));
        assert_eq!(img.get_pixel(720, 719 - 360).0, [255, 0, 0, 255]);
        // everything else transparent
        let opaque = img.pixels().filter(|p| p.0[3] != 0).count();
        assert_eq!(opaque, 1);
    }

    #[test]
    fn heatmap_empty_is_transparent() {
        let img = render_heatmap::<f64>(&[], &Grid::default());
        assert!(img.pixels().all(|p| p.0[3] == 0));
    }

    #[test]
    fn pixel_cell_bijection() {
        let grid = Grid::default();
        let cells: Vec<CellPolarization<f64>> = (0..50)
            .map(|i| CellPolarization {
                cell: CellId { row: i * 14 % 720, col: i * 29 % 1440 },
                v: f64::from(i) / 25.0 - 1.0,
                w_count: 1,
                total_matches: 1,
            })
            .collect();
        let img = render_heatmap(&cells, &grid);
        for cell in &cells {
            let pixel = img.get_pixel(cell.cell.col, grid.rows() - 1 - cell.cell.row);
            assert_eq!(pixel.0, diverging_rgba(cell.v));
        }
        let opaque = img.pixels().filter(|p| p.0[3] != 0).count();
        assert_eq!(opaque, cells.len());
    }

    #[test]
    fn csv_formats() {
        let grid = Grid::default();
        let cells = vec![CellPolarization {
            cell: grid.cell_of(51.6, -0.1).unwrap(),
            v: -0.5,
            w_count: 4,
            total_matches: 18,
        }];
        let mut buf = Vec::new();
        write_cells_csv(&mut buf, &grid, &cells).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "lat_min,lon_min,lat_max,lon_max,v,w_count,total_matches\n\
             51.50,-0.25,51.75,0.00,-0.500000,4,18\n"
        );

        let mut buf = Vec::new();
        write_histogram_csv(&mut buf, &histogram(vec![-1.0f64], 2)).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "bin_lo,bin_hi,count\n-1.000000,0.000000,1\n0.000000,1.000000,0\n"
        );

        let mut buf = Vec::new();
        write_year_csv(
            &mut buf,
            &[YearPolarization { year: 1900, v: 0.125f64, w_count: 3 }],
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "year,v,w_count\n1900,0.125000,3\n"
        );
    }

    #[test]
    fn atomic_write_replaces_and_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, |w| w.write_all(b"first")).unwrap();
        write_atomic(&path, |w| w.write_all(b"second")).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        assert!(!dir.path().join("out.csv.tmp").exists());

        let bad = dir.path().join("missing-dir").join("out.csv");
        let err = write_atomic(&bad, |w| w.write_all(b"x")).unwrap_err();
        assert!(err.to_string().contains("missing-dir"), "{err}");
    }

    #[test]
    fn manifest_is_deterministic() {
        let manifest = Manifest {
            inputs: vec!["a.jsonl".into()],
            lexicon_sha256: "00".into(),
            flags: serde_json::json!({"min_matches": 10}),
            emitted_cells: 3,
            rejects: BTreeMap::from([("bad-structure".into(), 1)]),
        };
        let mut one = Vec::new();
        let mut two = Vec::new();
        write_manifest(&mut one, &manifest).unwrap();
        write_manifest(&mut two, &manifest).unwrap();
        assert_eq!(one, two);
        let text = String::from_utf8(one).unwrap();
        assert!(text.contains("\"emitted_cells\": 3"));
    }

    #[test]
    fn png_encoding_deterministic() {
        let grid = Grid::new(10.0).unwrap();
        let cells = vec![CellPolarization {
            cell: CellId { row: 3, col: 5 },
            v: 0.25,
            w_count: 1,
            total_matches: 2,
        }];
        let a = encode_png(&render_heatmap(&cells, &grid)).unwrap();
        let b = encode_png(&render_heatmap(&cells, &grid)).unwrap();
        assert_eq!(a, b);
    }
}
