//! `lexicon` subcommands: validate, expand, export-builtin.

use std::io::Write;
use std::path::{Path, PathBuf};

use lexatlas::lexicon::{
    builtin_lexicon, expand_variants, ExpansionFlags, LexiconError, LexiconKind, VariantLexicon,
};

use crate::config::open_input;
use crate::error::{CliError, EXIT_VIOLATIONS};

/// Prints a violation report for a lexicon file. Clean files exit 0,
/// violations exit 4, structurally unparseable files exit 3.
pub fn validate(path: &Path, out: &mut impl Write) -> Result<(), CliError> {
    let reader = open_input(path)?;
    let lexicon = VariantLexicon::from_tsv_unvalidated(reader).map_err(|e| match e {
        LexiconError::Io(e) => CliError::from_input_io(path, e),
        other => CliError::invalid_lexicon(format!("{}: {other}", path.display())),
    })?;
    let violations = lexicon.validate();
    if violations.is_empty() {
        writeln!(out, "ok: {} concepts, no violations", lexicon.concepts.len())
            .map_err(CliError::other)?;
        return Ok(());
    }
    for violation in &violations {
        writeln!(out, "{violation}").map_err(CliError::other)?;
    }
    Err(CliError::new(
        EXIT_VIOLATIONS,
        format!("{} violation(s) in {}", violations.len(), path.display()),
    ))
}

/// Prints the expanded surface forms of a base form, one per line.
pub fn expand(base: &str, flags: &str, out: &mut impl Write) -> Result<(), CliError> {
    let flags = if flags.trim().is_empty() {
        ExpansionFlags::default()
    } else {
        ExpansionFlags::parse(flags).map_err(CliError::other)?
    };
    let patterns = expand_variants(base, flags).map_err(CliError::other)?;
    for pattern in patterns {
        writeln!(out, "{}", pattern.surface()).map_err(CliError::other)?;
    }
    Ok(())
}

/// Writes a builtin table in lexicon TSV form to stdout or a file.
pub fn export_builtin(kind: LexiconKind, out: Option<&PathBuf>) -> Result<(), CliError> {
    let tsv = builtin_lexicon(kind).to_tsv();
    match out {
        None => {
            std::io::stdout()
                .write_all(tsv.as_bytes())
                .map_err(CliError::other)?;
        }
        Some(path) => {
            lexatlas::render::write_atomic(path, |w| w.write_all(tsv.as_bytes()))
                .map_err(CliError::other)?;
        }
    }
    Ok(())
}
