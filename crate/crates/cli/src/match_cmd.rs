//! `match` debug subcommand: show which lexicon patterns hit a text.

use std::io::Write;

use lexatlas::matcher::{tokenize_with, CompileOptions, CompiledMatcher, TokenizeOptions};

use crate::config::LexiconSource;
use crate::error::CliError;

/// Prints one `concept<TAB>side<TAB>surface` line per hit, in text order.
pub fn run_match(
    lexicon: &LexiconSource,
    text: &str,
    keep_social_tokens: bool,
    affix_matching: bool,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let lexicon = lexicon.load()?;
    let matcher = CompiledMatcher::with_options(&lexicon, CompileOptions { affix_matching })
        .map_err(CliError::invalid_lexicon)?;
    let seq = tokenize_with(text, TokenizeOptions { strip_social: !keep_social_tokens });
    for hit in matcher.find_hits(&seq) {
        let surface = seq.tokens()[hit.start..hit.start + hit.len].join(" ");
        writeln!(out, "{}\t{}\t{}", matcher.concept_id(hit.concept), hit.side, surface)
            .map_err(CliError::other)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use lexatlas::lexicon::LexiconKind;

    #[test]
    fn prints_hits_in_text_order() {
        let mut buf = Vec::new();
        run_match(
            &LexiconSource::Builtin(LexiconKind::Vocabulary),
            "the lorry left the car park",
            false,
            true,
            &mut buf,
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "lorry_truck\tB\tlorry\ncarpark_parkinglot\tB\tcar park\n"
        );
    }

    #[test]
    fn affix_hit_shows_matched_token() {
        let mut buf = Vec::new();
        run_match(
            &LexiconSource::Builtin(LexiconKind::Spelling),
            "at the sportscenter",
            false,
            true,
            &mut buf,
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "centre_center\tA\tsportscenter\n"
        );
    }
}
