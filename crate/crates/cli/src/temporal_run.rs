//! The temporal study: 1-gram frequency files in, one year-series CSV per
//! corpus label out.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;

use lexatlas::matcher::{CompileOptions, CompiledMatcher};
use lexatlas::render::{self, Manifest};
use lexatlas::temporal::{
    year_polarization, LineTally, PosTagPolicy, YearAccumulator, YearOptions, YearPolarization,
};
use lexatlas::Score;

use crate::config::{open_input, TemporalConfig};
use crate::error::CliError;

/// What a finished temporal run reports back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalSummary {
    /// Emitted year rows per corpus label.
    pub year_rows: BTreeMap<String, u64>,
    pub skipped_patterns: u64,
    pub rejected_lines: u64,
}

pub fn run_temporal(config: &TemporalConfig) -> Result<TemporalSummary, CliError> {
    let lexicon = config.lexicon.load()?;
    let matcher = CompiledMatcher::with_options(
        &lexicon,
        CompileOptions { affix_matching: config.affix_matching },
    )
    .map_err(CliError::invalid_lexicon)?;

    if config.corpora.is_empty() {
        return Err(CliError::missing_input("no corpus files given (expected label=path)"));
    }

    let opts = YearOptions {
        year_min: config.year_min,
        year_max: config.year_max,
        use_volume_count: config.use_volume_count,
        pos_tags: if config.strip_pos_tags {
            PosTagPolicy::Strip
        } else {
            PosTagPolicy::Drop
        },
    };

    // one shard per file, merged per label by count addition
    let pool = crate::config::thread_pool(config.workers)?;
    let shards: Vec<(String, YearAccumulator)> = pool.install(|| {
        config
            .corpora
            .par_iter()
            .map(|(label, path)| -> Result<(String, YearAccumulator), CliError> {
                let mut acc = YearAccumulator::new(opts);
                let reader = open_input(path)?;
                for line in std::io::BufRead::lines(reader) {
                    let line = line.map_err(|e| CliError::from_input_io(path, e))?;
                    if line.is_empty() {
                        continue;
                    }
                    acc.add_line(&line, &matcher);
                }
                Ok((label.clone(), acc))
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;

    let mut per_label: BTreeMap<String, YearAccumulator> = BTreeMap::new();
    let mut tally = LineTally::default();
    for (label, acc) in shards {
        tally.merge(acc.tally());
        match per_label.entry(label) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(acc);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                slot.get_mut().merge(acc);
            }
        }
    }

    let skipped = lexicon.phrase_patterns();
    let skipped_rows: Vec<(&str, lexatlas::lexicon::Side, String)> = skipped
        .iter()
        .map(|(id, side, pattern)| (*id, *side, pattern.surface()))
        .collect();

    std::fs::create_dir_all(&config.out)
        .map_err(|e| CliError::other(format!("{}: {e}", config.out.display())))?;

    let mut year_rows = BTreeMap::new();
    for (label, acc) in per_label {
        let series: Vec<YearPolarization<Score>> = acc
            .into_year_stats()
            .iter()
            .filter_map(year_polarization)
            .collect();
        let path = label_csv_path(&config.out, &label)?;
        render::write_atomic(&path, |w| render::write_year_csv(w, &series))
            .map_err(CliError::other)?;
        year_rows.insert(label, series.len() as u64);
    }

    render::write_atomic(&config.out.join(render::SKIPPED_PATTERNS_CSV), |w| {
        render::write_skipped_patterns_csv(w, &skipped_rows)
    })
    .map_err(CliError::other)?;

    let manifest = Manifest {
        inputs: config
            .corpora
            .iter()
            .map(|(label, path)| format!("{label}={}", path.display()))
            .collect(),
        lexicon_sha256: render::lexicon_sha256(&lexicon),
        flags: flags_json(config),
        emitted_cells: 0,
        rejects: BTreeMap::from([
            ("rejected-line".to_string(), tally.rejected),
            ("pos-tag-dropped".to_string(), tally.pos_dropped),
            ("out-of-range-year".to_string(), tally.out_of_range),
        ]),
    };
    render::write_atomic(&config.out.join(render::MANIFEST_JSON), |w| {
        render::write_manifest(w, &manifest)
    })
    .map_err(CliError::other)?;

    Ok(TemporalSummary {
        year_rows,
        skipped_patterns: skipped_rows.len() as u64,
        rejected_lines: tally.rejected,
    })
}

/// `<out>/<label>.csv`, refusing labels that would escape the directory.
fn label_csv_path(out: &std::path::Path, label: &str) -> Result<PathBuf, CliError> {
    let safe = !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if !safe || label.starts_with('.') {
        return Err(CliError::other(format!(
            "corpus label `{label}` must be alphanumeric with - _ ."
        )));
    }
    Ok(out.join(format!("{label}.csv")))
}

fn flags_json(config: &TemporalConfig) -> serde_json::Value {
    serde_json::json!({
        "mode": "temporal",
        "lexicon": config.lexicon.id(),
        "years": format!("{},{}", config.year_min, config.year_max),
        "use_volume_count": config.use_volume_count,
        "strip_pos_tags": config.strip_pos_tags,
        "affix_matching": config.affix_matching,
    })
}
