//! The spatial study: geotagged messages in, cell/country/histogram tables
//! and a heatmap raster out.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use lexatlas::countries::CountryIndex;
use lexatlas::geogrid::{
    apply_threshold, cell_polarization, country_polarization, histogram, CountryScore, Grid,
    GridAccumulator, NO_COUNTRY,
};
use lexatlas::ingest::{MessageFilter, MessageReader, ReadItem, RejectTally, TimeWindow};
use lexatlas::matcher::{tokenize_with, CompileOptions, CompiledMatcher, TokenizeOptions};
use lexatlas::render::{self, Manifest};
use lexatlas::Score;

use crate::config::{open_input, SpatialConfig};
use crate::error::CliError;

/// What a finished spatial run reports back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpatialSummary {
    pub emitted_cells: u64,
    pub messages_read: u64,
    pub messages_retained: u64,
    pub rejects: u64,
}

pub fn run_spatial(config: &SpatialConfig) -> Result<SpatialSummary, CliError> {
    let grid = Grid::new(config.grid_res).map_err(CliError::other)?;
    let lexicon = config.lexicon.load()?;
    let matcher = CompiledMatcher::with_options(
        &lexicon,
        CompileOptions { affix_matching: config.affix_matching },
    )
    .map_err(CliError::invalid_lexicon)?;

    let country_index = match &config.countries {
        Some(path) => Some(load_countries(path, &config.country_prop)?),
        None => None,
    };

    if config.inputs.is_empty() {
        return Err(CliError::missing_input("no input files given"));
    }

    let filter = MessageFilter {
        bbox: config.bbox,
        lang: config.lang.clone(),
        keep_untagged: config.keep_untagged,
        window: TimeWindow::new(config.since, config.until)
            .map(Some)
            .ok_or_else(|| CliError::other("--since is after --until"))?,
    };
    let tokenize_opts = TokenizeOptions { strip_social: !config.keep_social_tokens };

    struct Shard {
        acc: GridAccumulator,
        rejects: RejectTally,
        read: u64,
        retained: u64,
    }

    let pool = crate::config::thread_pool(config.workers)?;
    let merged = pool.install(|| {
        config
            .inputs
            .par_iter()
            .map(|path| -> Result<Shard, CliError> {
                let mut shard = Shard {
                    acc: GridAccumulator::new(grid),
                    rejects: RejectTally::default(),
                    read: 0,
                    retained: 0,
                };
                let reader = MessageReader::new(open_input(path)?);
                for item in reader {
                    let item = item.map_err(|e| CliError::from_input_io(path, e))?;
                    shard.read += 1;
                    match item {
                        ReadItem::Rejected(reason) => shard.rejects.add(reason),
                        ReadItem::Message(msg) => {
                            if !filter.retain(&msg) {
                                continue;
                            }
                            shard.retained += 1;
                            let seq = tokenize_with(&msg.text, tokenize_opts);
                            let hits = matcher.find_hits(&seq);
                            shard
                                .acc
                                .add_message(msg.lat, msg.lon, &hits, config.dedupe_per_message)
                                .map_err(CliError::other)?;
                        }
                    }
                }
                Ok(shard)
            })
            .try_reduce(
                || Shard {
                    acc: GridAccumulator::new(grid),
                    rejects: RejectTally::default(),
                    read: 0,
                    retained: 0,
                },
                |mut left, right| {
                    left.acc.merge(right.acc);
                    left.rejects.merge(&right.rejects);
                    left.read += right.read;
                    left.retained += right.retained;
                    Ok(left)
                },
            )
    })?;

    let cells = apply_threshold(merged.acc.into_cells(), config.min_matches);
    let scored: Vec<_> = cells
        .iter()
        .filter_map(cell_polarization::<Score>)
        .collect();
    let bins = histogram(scored.iter().map(|c| c.v), config.bins);
    let countries: Vec<CountryScore<Score>> = match &country_index {
        Some(index) => country_polarization(&scored, &grid, index),
        None => {
            // no boundary file: everything lands in the fallback bucket
            if scored.is_empty() {
                Vec::new()
            } else {
                let sum: Score = scored.iter().map(|c| c.v).sum();
                vec![CountryScore {
                    code: NO_COUNTRY.to_string(),
                    v: sum / scored.len() as Score,
                    n_cells: scored.len(),
                }]
            }
        }
    };

    let manifest = Manifest {
        inputs: config.inputs.iter().map(|p| p.display().to_string()).collect(),
        lexicon_sha256: render::lexicon_sha256(&lexicon),
        flags: flags_json(config),
        emitted_cells: scored.len() as u64,
        rejects: manifest_rejects(&merged.rejects),
    };

    std::fs::create_dir_all(&config.out)
        .map_err(|e| CliError::other(format!("{}: {e}", config.out.display())))?;
    let out = |name: &str| config.out.join(name);
    let write = |path: &Path, body: &dyn Fn(&mut dyn std::io::Write) -> std::io::Result<()>| {
        render::write_atomic(path, body).map_err(CliError::other)
    };

    write(&out(render::CELLS_CSV), &|w| render::write_cells_csv(w, &grid, &scored))?;
    write(&out(render::COUNTRIES_CSV), &|w| render::write_countries_csv(w, &countries))?;
    write(&out(render::HISTOGRAM_CSV), &|w| render::write_histogram_csv(w, &bins))?;
    let png = render::encode_png(&render::render_heatmap(&scored, &grid)).map_err(CliError::other)?;
    write(&out(render::HEATMAP_PNG), &|w| w.write_all(&png))?;
    write(&out(render::REJECTS_CSV), &|w| render::write_rejects_csv(w, &merged.rejects))?;
    write(&out(render::MANIFEST_JSON), &|w| render::write_manifest(w, &manifest))?;

    if scored.is_empty() {
        eprintln!(
            "warning: no cell reached {} matches; outputs are empty",
            config.min_matches
        );
    }

    Ok(SpatialSummary {
        emitted_cells: scored.len() as u64,
        messages_read: merged.read,
        messages_retained: merged.retained,
        rejects: merged.rejects.total(),
    })
}

fn load_countries(path: &Path, property: &str) -> Result<CountryIndex, CliError> {
    CountryIndex::from_file(path, property).map_err(|e| match e {
        lexatlas::countries::BoundaryError::Io { source, .. }
            if source.kind() == std::io::ErrorKind::NotFound =>
        {
            CliError::missing_input(format!("{}: {source}", path.display()))
        }
        other => CliError::other(other),
    })
}

fn manifest_rejects(tally: &RejectTally) -> BTreeMap<String, u64> {
    tally
        .rows()
        .into_iter()
        .map(|(code, count)| (code.to_string(), count))
        .collect()
}

fn flags_json(config: &SpatialConfig) -> serde_json::Value {
    serde_json::json!({
        "mode": "spatial",
        "lexicon": config.lexicon.id(),
        "grid_res": config.grid_res,
        "min_matches": config.min_matches,
        "bbox": config.bbox.map(|b| format!("{},{},{},{}", b.lat0, b.lon0, b.lat1, b.lon1)),
        "lang": config.lang,
        "keep_untagged": config.keep_untagged,
        "since": config.since.to_rfc3339(),
        "until": config.until.to_rfc3339(),
        "bins": config.bins,
        "countries": config.countries.as_ref().map(|p| p.display().to_string()),
        "country_prop": config.country_prop,
        "dedupe_per_message": config.dedupe_per_message,
        "keep_social_tokens": config.keep_social_tokens,
        "affix_matching": config.affix_matching,
    })
}
