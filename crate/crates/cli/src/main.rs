use std::path::PathBuf;

use chrono::{DateTime, Utc};
use clap::{ArgGroup, Args, Parser, Subcommand};

use lexatlas::ingest::BoundingBox;
use lexatlas::lexicon::LexiconKind;

use lexatlas_cli::config::{self, LexiconSource, SpatialConfig, TemporalConfig};
use lexatlas_cli::error::CliError;
use lexatlas_cli::{lexicon_cmd, match_cmd, spatial, temporal_run};

/// Measure how British or American the English of a corpus is, per world
/// grid cell or per year.
#[derive(Parser)]
#[command(name = "lexatlas", version, about)]
struct Cli {
    /// Print errors as machine-parseable JSON on stderr.
    #[arg(long, global = true)]
    json_errors: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bin geotagged JSONL messages into a world grid and score each cell.
    Spatial(SpatialArgs),
    /// Build per-year polarization series from 1-gram frequency files.
    Temporal(TemporalArgs),
    /// Inspect, expand and export variant lexicons.
    Lexicon {
        #[command(subcommand)]
        action: LexiconAction,
    },
    /// Show which lexicon patterns hit a text.
    Match(MatchArgs),
}

#[derive(Args)]
struct LexiconArgs {
    /// Lexicon TSV file.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Built-in lexicon: vocabulary or spelling.
    #[arg(long, value_parser = parse_kind)]
    builtin: Option<LexiconKind>,
}

impl LexiconArgs {
    fn source(&self) -> LexiconSource {
        match (&self.lexicon, self.builtin) {
            (Some(path), _) => LexiconSource::Path(path.clone()),
            (None, Some(kind)) => LexiconSource::Builtin(kind),
            (None, None) => unreachable!("clap group enforces one"),
        }
    }
}

#[derive(Args)]
#[command(group(ArgGroup::new("lex").required(true).args(["lexicon", "builtin"])))]
struct SpatialArgs {
    #[command(flatten)]
    lex: LexiconArgs,

    /// JSONL message files (gzip auto-detected).
    #[arg(required = true, value_name = "FILE")]
    inputs: Vec<PathBuf>,

    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,

    /// Grid cell edge in degrees; must divide 90 evenly.
    #[arg(long, default_value_t = lexatlas::geogrid::DEFAULT_RESOLUTION)]
    grid_res: f64,

    /// Minimum matches for a cell to be retained.
    #[arg(long, default_value_t = lexatlas::geogrid::DEFAULT_MIN_MATCHES)]
    min_matches: u64,

    /// Inclusive bounding box lat0,lon0,lat1,lon1.
    #[arg(long, value_parser = parse_bbox, allow_hyphen_values = true)]
    bbox: Option<BoundingBox>,

    /// Language tag to keep (primary subtag comparison).
    #[arg(long, default_value = config::DEFAULT_LANG)]
    lang: String,

    /// Also keep messages without a language tag.
    #[arg(long)]
    keep_untagged: bool,

    /// Window start, RFC 3339 or YYYY-MM-DD.
    #[arg(long, value_parser = config::parse_since, default_value = "2010-05-10")]
    since: DateTime<Utc>,

    /// Window end (inclusive), RFC 3339 or YYYY-MM-DD.
    #[arg(long, value_parser = config::parse_until, default_value = "2016-02-28")]
    until: DateTime<Utc>,

    /// Histogram bins over [-1, 1].
    #[arg(long, default_value_t = config::DEFAULT_BINS)]
    bins: usize,

    /// GeoJSON FeatureCollection with country boundaries.
    #[arg(long, value_name = "GEOJSON")]
    countries: Option<PathBuf>,

    /// Feature property holding the ISO 3166-1 alpha-2 code.
    #[arg(long, default_value = lexatlas::countries::DEFAULT_COUNTRY_PROPERTY)]
    country_prop: String,

    /// Worker threads (default: one per CPU).
    #[arg(long, env = "LEXATLAS_WORKERS")]
    workers: Option<usize>,

    /// Count each (concept, side) at most once per message.
    #[arg(long)]
    dedupe_per_message: bool,

    /// Keep URLs, @-mentions and #-tags as tokens.
    #[arg(long)]
    keep_social_tokens: bool,

    /// Disable prefix/suffix/substring pattern matching.
    #[arg(long)]
    no_affix_matching: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("lex").required(true).args(["lexicon", "builtin"])))]
struct TemporalArgs {
    #[command(flatten)]
    lex: LexiconArgs,

    /// Corpus files as label=path; a label may repeat across files.
    #[arg(required = true, value_name = "LABEL=FILE", value_parser = parse_corpus)]
    corpora: Vec<(String, PathBuf)>,

    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,

    /// Year window min,max (inclusive).
    #[arg(long, value_parser = config::parse_years, default_value = "1800,2010")]
    years: (i32, i32),

    /// Accumulate volume counts instead of match counts.
    #[arg(long)]
    use_volume_count: bool,

    /// Strip part-of-speech tags and count those rows instead of dropping
    /// them.
    #[arg(long)]
    strip_pos_tags: bool,

    /// Worker threads (default: one per CPU).
    #[arg(long, env = "LEXATLAS_WORKERS")]
    workers: Option<usize>,

    /// Disable prefix/suffix/substring pattern matching.
    #[arg(long)]
    no_affix_matching: bool,
}

#[derive(Subcommand)]
enum LexiconAction {
    /// Check a lexicon TSV and print every violation.
    Validate { path: PathBuf },
    /// Print the expanded surface forms of a base form.
    Expand {
        base: String,
        /// Comma-separated subset of plural,possessive.
        #[arg(long, default_value = "")]
        flags: String,
    },
    /// Write a built-in table as lexicon TSV (stdout unless --out).
    ExportBuiltin {
        #[arg(value_parser = parse_kind)]
        kind: LexiconKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("lex").required(true).args(["lexicon", "builtin"])))]
struct MatchArgs {
    #[command(flatten)]
    lex: LexiconArgs,

    /// Text to match.
    #[arg(long)]
    text: String,

    /// Keep URLs, @-mentions and #-tags as tokens.
    #[arg(long)]
    keep_social_tokens: bool,

    /// Disable prefix/suffix/substring pattern matching.
    #[arg(long)]
    no_affix_matching: bool,
}

fn parse_kind(s: &str) -> Result<LexiconKind, String> {
    LexiconKind::from_name(s).ok_or_else(|| format!("`{s}` is not vocabulary or spelling"))
}

fn parse_bbox(s: &str) -> Result<BoundingBox, String> {
    BoundingBox::parse(s).map_err(|e| e.to_string())
}

fn parse_corpus(s: &str) -> Result<(String, PathBuf), String> {
    let (label, path) = s
        .split_once('=')
        .ok_or_else(|| format!("`{s}`: expected label=path"))?;
    if label.is_empty() || path.is_empty() {
        return Err(format!("`{s}`: expected label=path"));
    }
    Ok((label.to_string(), PathBuf::from(path)))
}

fn main() {
    let cli = Cli::parse();
    let json_errors = cli.json_errors;
    if let Err(e) = dispatch(cli.command) {
        if json_errors {
            eprintln!("{}", e.to_json());
        } else {
            eprintln!("error: {}", e.message);
        }
        std::process::exit(e.code);
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Spatial(args) => {
            let mut config = SpatialConfig::new(args.lex.source(), args.inputs, args.out);
            config.grid_res = args.grid_res;
            config.min_matches = args.min_matches;
            config.bbox = args.bbox;
            config.lang = Some(args.lang);
            config.keep_untagged = args.keep_untagged;
            config.since = args.since;
            config.until = args.until;
            config.bins = args.bins;
            config.countries = args.countries;
            config.country_prop = args.country_prop;
            config.workers = args.workers;
            config.dedupe_per_message = args.dedupe_per_message;
            config.keep_social_tokens = args.keep_social_tokens;
            config.affix_matching = !args.no_affix_matching;
            let summary = spatial::run_spatial(&config)?;
            eprintln!(
                "spatial: {} messages read, {} retained, {} rejected, {} cells emitted",
                summary.messages_read,
                summary.messages_retained,
                summary.rejects,
                summary.emitted_cells
            );
            Ok(())
        }
        Command::Temporal(args) => {
            let mut config = TemporalConfig::new(args.lex.source(), args.corpora, args.out);
            config.year_min = args.years.0;
            config.year_max = args.years.1;
            config.use_volume_count = args.use_volume_count;
            config.strip_pos_tags = args.strip_pos_tags;
            config.workers = args.workers;
            config.affix_matching = !args.no_affix_matching;
            let summary = temporal_run::run_temporal(&config)?;
            for (label, rows) in &summary.year_rows {
                eprintln!("temporal: {label}: {rows} year rows");
            }
            if summary.skipped_patterns > 0 {
                eprintln!(
                    "temporal: {} phrase pattern(s) skipped (1-gram mode)",
                    summary.skipped_patterns
                );
            }
            Ok(())
        }
        Command::Lexicon { action } => match action {
            LexiconAction::Validate { path } => {
                lexicon_cmd::validate(&path, &mut std::io::stdout())
            }
            LexiconAction::Expand { base, flags } => {
                lexicon_cmd::expand(&base, &flags, &mut std::io::stdout())
            }
            LexiconAction::ExportBuiltin { kind, out } => {
                lexicon_cmd::export_builtin(kind, out.as_ref())
            }
        },
        Command::Match(args) => match_cmd::run_match(
            &args.lex.source(),
            &args.text,
            args.keep_social_tokens,
            !args.no_affix_matching,
            &mut std::io::stdout(),
        ),
    }
}
