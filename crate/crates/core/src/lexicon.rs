//! Variant lexicons: which surface forms count for which side of which
//! concept.
//!
//! A lexicon is a list of concepts, each a British/American alternation
//! (`lorry`/`truck`, `colour`/`color`). Every side holds one or more
//! patterns over normalized tokens. Single-token patterns may match a whole
//! token (`exact`) or an affix of it (`prefix`/`suffix`/`substring`), which
//! is how derived and compound forms like `sportscenter` are picked up.
//! Multi-token patterns always match exact consecutive token runs.
//!
//! The TSV format accepted by [`VariantLexicon::from_tsv`]:
//!
//! ```text
//! concept_id<TAB>side<TAB>match_mode<TAB>surface[<TAB>expansion_flags]
//! ```
//!
//! `side` is `A` or `B`, `match_mode` one of `exact|prefix|suffix|substring`,
//! `surface` space-separated lowercase tokens, and the optional flags a
//! comma-separated subset of `plural,possessive`. Lines starting with `#`
//! are comments. Flags expand a line into its regular inflections at parse
//! time; irregular forms are written as additional lines.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;
use std::sync::OnceLock;

use thiserror::Error;

/// Which side of an alternation a pattern belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    British,
    American,
}

impl Side {
    pub fn code(self) -> &'static str {
        match self {
            Side::British => "B",
            Side::American => "A",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code {
            "B" => Some(Side::British),
            "A" => Some(Side::American),
            _ => None,
        }
    }

    /// The opposite side.
    pub fn flipped(self) -> Self {
        match self {
            Side::British => Side::American,
            Side::American => Side::British,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// How a single-token pattern applies to a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatchMode {
    Exact,
    Prefix,
    Suffix,
    Substring,
}

impl MatchMode {
    pub fn name(self) -> &'static str {
        match self {
            MatchMode::Exact => "exact",
            MatchMode::Prefix => "prefix",
            MatchMode::Suffix => "suffix",
            MatchMode::Substring => "substring",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "exact" => Some(MatchMode::Exact),
            "prefix" => Some(MatchMode::Prefix),
            "suffix" => Some(MatchMode::Suffix),
            "substring" => Some(MatchMode::Substring),
            _ => None,
        }
    }
}

impl fmt::Display for MatchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A normalized surface pattern: 1-4 lowercase tokens plus a match mode.
/// Non-exact modes are only valid for single-token patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    tokens: Vec<String>,
    mode: MatchMode,
}

/// Largest number of tokens a pattern may hold.
pub const MAX_PATTERN_TOKENS: usize = 4;

impl Pattern {
    /// Builds a pattern from raw tokens, normalizing case and apostrophes.
    pub fn new<I, S>(tokens: I, mode: MatchMode) -> Result<Self, PatternError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let tokens: Vec<String> = tokens
            .into_iter()
            .map(|t| normalize_token(t.as_ref()))
            .collect();
        if tokens.is_empty() || tokens.len() > MAX_PATTERN_TOKENS {
            return Err(PatternError::TokenCount(tokens.len()));
        }
        for t in &tokens {
            if t.is_empty() {
                return Err(PatternError::EmptyToken);
            }
            if t.chars().any(char::is_whitespace) {
                return Err(PatternError::WhitespaceInToken(t.clone()));
            }
        }
        if tokens.len() > 1 && mode != MatchMode::Exact {
            return Err(PatternError::AffixPhrase(mode));
        }
        Ok(Pattern { tokens, mode })
    }

    /// Convenience constructor from a space-separated surface string.
    pub fn parse(surface: &str, mode: MatchMode) -> Result<Self, PatternError> {
        Pattern::new(surface.split(' '), mode)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn mode(&self) -> MatchMode {
        self.mode
    }

    pub fn is_phrase(&self) -> bool {
        self.tokens.len() > 1
    }

    /// Space-joined surface string.
    pub fn surface(&self) -> String {
        self.tokens.join(" ")
    }

    /// Whether a single token satisfies this pattern. Phrases never match a
    /// lone token.
    pub fn matches_token(&self, token: &str) -> bool {
        if self.is_phrase() {
            return false;
        }
        let literal = self.tokens[0].as_str();
        match self.mode {
            MatchMode::Exact => token == literal,
            MatchMode::Prefix => token.starts_with(literal),
            MatchMode::Suffix => token.ends_with(literal),
            MatchMode::Substring => token.contains(literal),
        }
    }

    /// Pattern with the same tokens but exact mode.
    pub fn as_exact(&self) -> Pattern {
        Pattern {
            tokens: self.tokens.clone(),
            mode: MatchMode::Exact,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern must hold 1-{MAX_PATTERN_TOKENS} tokens, got {0}")]
    TokenCount(usize),
    #[error("pattern contains an empty token")]
    EmptyToken,
    #[error("token `{0}` contains whitespace")]
    WhitespaceInToken(String),
    #[error("{0} mode requires a single-token surface")]
    AffixPhrase(MatchMode),
}

/// Lowercases and maps U+2019 (right single quotation mark) to `'`.
pub fn normalize_token(raw: &str) -> String {
    let lowered = raw.to_lowercase();
    if lowered.contains('\u{2019}') {
        lowered.replace('\u{2019}', "'")
    } else {
        lowered
    }
}

/// Regular-inflection expansion switches for a lexicon line.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExpansionFlags {
    pub plural: bool,
    pub possessive: bool,
}

impl ExpansionFlags {
    pub fn parse(spec: &str) -> Result<Self, String> {
        let mut flags = ExpansionFlags::default();
        for part in spec.split(',') {
            match part.trim() {
                "plural" => flags.plural = true,
                "possessive" => flags.possessive = true,
                other => return Err(format!("unknown expansion flag `{other}`")),
            }
        }
        Ok(flags)
    }
}

/// Regular English plural of a token: `+es` after s/x/z/ch/sh,
/// consonant+`y` becomes `ies`, otherwise `+s`.
pub fn pluralize(token: &str) -> String {
    let needs_es = token.ends_with('s')
        || token.ends_with('x')
        || token.ends_with('z')
        || token.ends_with("ch")
        || token.ends_with("sh");
    if needs_es {
        return format!("{token}es");
    }
    if let Some(stem) = token.strip_suffix('y') {
        let prev = stem.chars().last();
        if matches!(prev, Some(c) if c.is_alphabetic() && !"aeiou".contains(c)) {
            return format!("{stem}ies");
        }
    }
    format!("{token}s")
}

/// Expands a base surface into its flagged inflections: the base itself,
/// the plural, the possessive (`'s` on the base) and the plural possessive
/// (`'` on the plural). Phrases inflect the head (final) token only. All
/// produced patterns use exact mode; see [`expand_surfaces`] for the parser
/// path that keeps the line's mode.
pub fn expand_variants(base_form: &str, flags: ExpansionFlags) -> Result<Vec<Pattern>, PatternError> {
    expand_surfaces(base_form, flags)?
        .into_iter()
        .map(|tokens| Pattern::new(tokens, MatchMode::Exact))
        .collect()
}

/// Token-level expansion. Order: base, plural, possessive, plural possessive.
fn expand_surfaces(base_form: &str, flags: ExpansionFlags) -> Result<Vec<Vec<String>>, PatternError> {
    let base: Vec<String> = base_form.split(' ').map(normalize_token).collect();
    if base.iter().any(String::is_empty) {
        return Err(PatternError::EmptyToken);
    }
    let head = base.last().ok_or(PatternError::EmptyToken)?.clone();

    let with_head = |head: String| {
        let mut v = base.clone();
        *v.last_mut().unwrap() = head;
        v
    };

    let mut out = vec![base.clone()];
    let plural_head = pluralize(&head);
    if flags.plural {
        out.push(with_head(plural_head.clone()));
    }
    if flags.possessive {
        out.push(with_head(format!("{head}'s")));
    }
    if flags.plural && flags.possessive {
        out.push(with_head(format!("{plural_head}'")));
    }
    out.dedup();
    Ok(out)
}

/// One British/American alternation with its expanded surface patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub id: String,
    pub british: Vec<Pattern>,
    pub american: Vec<Pattern>,
}

impl Concept {
    pub fn side(&self, side: Side) -> &[Pattern] {
        match side {
            Side::British => &self.british,
            Side::American => &self.american,
        }
    }

    fn side_mut(&mut self, side: Side) -> &mut Vec<Pattern> {
        match side {
            Side::British => &mut self.british,
            Side::American => &mut self.american,
        }
    }
}

/// Which of the two built-in tables a lexicon mirrors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexiconKind {
    Vocabulary,
    Spelling,
}

impl LexiconKind {
    pub fn name(self) -> &'static str {
        match self {
            LexiconKind::Vocabulary => "vocabulary",
            LexiconKind::Spelling => "spelling",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "vocabulary" => Some(LexiconKind::Vocabulary),
            "spelling" => Some(LexiconKind::Spelling),
            _ => None,
        }
    }
}

impl fmt::Display for LexiconKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A full variant lexicon. `kind` is set for the built-in tables and `None`
/// for user-supplied files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantLexicon {
    pub kind: Option<LexiconKind>,
    pub concepts: Vec<Concept>,
}

/// A single invariant violation found by [`VariantLexicon::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyId,
    DuplicateId { id: String },
    EmptySide { concept: String, side: Side },
    /// The same surface form is claimed by more than one (concept, side).
    CrossClaim { surface: String, claims: Vec<(String, Side)> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyId => write!(f, "concept with empty id"),
            Violation::DuplicateId { id } => write!(f, "duplicate concept id `{id}`"),
            Violation::EmptySide { concept, side } => {
                write!(f, "concept `{concept}` has an empty {side} side")
            }
            Violation::CrossClaim { surface, claims } => {
                let claims = claims
                    .iter()
                    .map(|(id, side)| format!("{id}/{side}"))
                    .collect::<Vec<_>>()
                    .join(", ");
                write!(f, "surface `{surface}` claimed by {claims}")
            }
        }
    }
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("  - {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("lexicon failed validation:\n{}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl VariantLexicon {
    /// Parses a lexicon TSV stream and validates it.
    pub fn from_tsv(source: impl BufRead) -> Result<Self, LexiconError> {
        let lexicon = Self::from_tsv_unvalidated(source)?;
        let violations = lexicon.validate();
        if violations.is_empty() {
            Ok(lexicon)
        } else {
            Err(LexiconError::Invalid(violations))
        }
    }

    /// Parses structure only; invariant checks are left to the caller. Used
    /// by tooling that wants to print a violation report instead of failing.
    pub fn from_tsv_unvalidated(source: impl BufRead) -> Result<Self, LexiconError> {
        let mut concepts: Vec<Concept> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();

        for (line_no, line) in source.lines().enumerate() {
            let line_no = line_no + 1;
            let line = line?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 && fields.len() != 5 {
                return Err(LexiconError::Parse {
                    line: line_no,
                    reason: format!("expected 4 or 5 tab-separated fields, got {}", fields.len()),
                });
            }
            let id = fields[0].trim();
            if id.is_empty() {
                return Err(LexiconError::Parse {
                    line: line_no,
                    reason: "empty concept_id".into(),
                });
            }
            let side = Side::from_code(fields[1]).ok_or_else(|| LexiconError::Parse {
                line: line_no,
                reason: format!("unknown side `{}` (expected A or B)", fields[1]),
            })?;
            let mode = MatchMode::from_name(fields[2]).ok_or_else(|| LexiconError::Parse {
                line: line_no,
                reason: format!("unknown match_mode `{}`", fields[2]),
            })?;
            let flags = if fields.len() == 5 {
                ExpansionFlags::parse(fields[4])
                    .map_err(|reason| LexiconError::Parse { line: line_no, reason })?
            } else {
                ExpansionFlags::default()
            };

            let surfaces = expand_surfaces(fields[3], flags)
                .map_err(|e| LexiconError::Parse { line: line_no, reason: e.to_string() })?;

            let idx = *index.entry(id.to_string()).or_insert_with(|| {
                concepts.push(Concept {
                    id: id.to_string(),
                    british: Vec::new(),
                    american: Vec::new(),
                });
                concepts.len() - 1
            });
            let patterns = concepts[idx].side_mut(side);
            for tokens in surfaces {
                let pattern = Pattern::new(tokens, mode)
                    .map_err(|e| LexiconError::Parse { line: line_no, reason: e.to_string() })?;
                if !patterns.contains(&pattern) {
                    patterns.push(pattern);
                }
            }
        }

        Ok(VariantLexicon { kind: None, concepts })
    }

    /// Checks every lexicon invariant and reports the violations as data.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let mut seen_ids: HashMap<&str, usize> = HashMap::new();

        for concept in &self.concepts {
            if concept.id.is_empty() {
                violations.push(Violation::EmptyId);
            }
            *seen_ids.entry(concept.id.as_str()).or_default() += 1;
            for side in [Side::British, Side::American] {
                if concept.side(side).is_empty() {
                    violations.push(Violation::EmptySide {
                        concept: concept.id.clone(),
                        side,
                    });
                }
            }
        }
        for (id, n) in seen_ids {
            if n > 1 {
                violations.push(Violation::DuplicateId { id: id.to_string() });
            }
        }

        // Surface forms are compared as token sequences regardless of match
        // mode; two different (concept, side) pairs may never claim the same
        // sequence.
        let mut claims: HashMap<String, Vec<(String, Side)>> = HashMap::new();
        for concept in &self.concepts {
            for side in [Side::British, Side::American] {
                for pattern in concept.side(side) {
                    let claim = (concept.id.clone(), side);
                    let entry = claims.entry(pattern.surface()).or_default();
                    if !entry.contains(&claim) {
                        entry.push(claim);
                    }
                }
            }
        }
        let mut cross: Vec<_> = claims
            .into_iter()
            .filter(|(_, claims)| claims.len() > 1)
            .collect();
        cross.sort_by(|a, b| a.0.cmp(&b.0));
        for (surface, claims) in cross {
            violations.push(Violation::CrossClaim { surface, claims });
        }

        violations
    }

    /// Canonical TSV serialization: one line per expanded pattern, British
    /// side first within each concept. Reparsing yields an equal lexicon.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for concept in &self.concepts {
            for side in [Side::British, Side::American] {
                for pattern in concept.side(side) {
                    out.push_str(&format!(
                        "{}\t{}\t{}\t{}\n",
                        concept.id,
                        side,
                        pattern.mode(),
                        pattern.surface()
                    ));
                }
            }
        }
        out
    }

    /// Lexicon with the British/American side labels swapped on every
    /// concept. Useful for antisymmetry checks.
    pub fn flipped(&self) -> VariantLexicon {
        VariantLexicon {
            kind: self.kind,
            concepts: self
                .concepts
                .iter()
                .map(|c| Concept {
                    id: c.id.clone(),
                    british: c.american.clone(),
                    american: c.british.clone(),
                })
                .collect(),
        }
    }

    pub fn concept_ids(&self) -> impl Iterator<Item = &str> {
        self.concepts.iter().map(|c| c.id.as_str())
    }

    /// Phrase (multi-token) patterns, with their concept id and side.
    pub fn phrase_patterns(&self) -> Vec<(&str, Side, &Pattern)> {
        let mut out = Vec::new();
        for concept in &self.concepts {
            for side in [Side::British, Side::American] {
                for pattern in concept.side(side) {
                    if pattern.is_phrase() {
                        out.push((concept.id.as_str(), side, pattern));
                    }
                }
            }
        }
        out
    }
}

static VOCABULARY: OnceLock<VariantLexicon> = OnceLock::new();
static SPELLING: OnceLock<VariantLexicon> = OnceLock::new();

/// The built-in lexicon of the requested kind.
pub fn builtin_lexicon(kind: LexiconKind) -> &'static VariantLexicon {
    let (cell, data) = match kind {
        LexiconKind::Vocabulary => (&VOCABULARY, include_str!("../data/vocabulary.tsv")),
        LexiconKind::Spelling => (&SPELLING, include_str!("../data/spelling.tsv")),
    };
    cell.get_or_init(|| {
        let mut lexicon = VariantLexicon::from_tsv(data.as_bytes())
            .unwrap_or_else(|e| panic!("builtin {kind} lexicon invalid: {e}"));
        lexicon.kind = Some(kind);
        lexicon
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(tsv: &str) -> VariantLexicon {
        VariantLexicon::from_tsv(tsv.as_bytes()).unwrap()
    }

    #[test]
    fn parse_minimal_pair() {
        let l = lex("lorry_truck\tB\texact\tlorry\nlorry_truck\tA\texact\ttruck\n");
        assert_eq!(l.concepts.len(), 1);
        assert_eq!(l.concepts[0].british.len(), 1);
        assert_eq!(l.concepts[0].american.len(), 1);
        assert_eq!(l.concepts[0].british[0].surface(), "lorry");
    }

    #[test]
    fn parse_rejects_unknown_side() {
        let err = VariantLexicon::from_tsv("c1\tX\texact\ttorch\n".as_bytes()).unwrap_err();
        match err {
            LexiconError::Parse { line, reason } => {
                assert_eq!(line, 1);
                assert!(reason.contains("side `X`"), "{reason}");
            }
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn parse_rejects_wrong_field_count() {
        let err = VariantLexicon::from_tsv("c1\tB\texact\n".as_bytes()).unwrap_err();
        assert!(matches!(err, LexiconError::Parse { line: 1, .. }));
    }

    #[test]
    fn parse_rejects_cross_side_duplicate() {
        let tsv = "c1\tB\texact\ttorch\nc1\tA\texact\tlamp\nc2\tB\texact\tbeam\nc2\tA\texact\ttorch\n";
        let err = VariantLexicon::from_tsv(tsv.as_bytes()).unwrap_err();
        match err {
            LexiconError::Invalid(violations) => {
                assert!(violations.iter().any(|v| matches!(
                    v,
                    Violation::CrossClaim { surface, .. } if surface == "torch"
                )));
            }
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let l = lex("# header\n\nc1\tB\texact\tfoo\nc1\tA\texact\tbar\n");
        assert_eq!(l.concepts.len(), 1);
    }

    #[test]
    fn expansion_solicitor() {
        let flags = ExpansionFlags { plural: true, possessive: true };
        let forms: Vec<String> = expand_variants("solicitor", flags)
            .unwrap()
            .iter()
            .map(Pattern::surface)
            .collect();
        assert_eq!(forms, vec!["solicitor", "solicitors", "solicitor's", "solicitors'"]);
    }

    #[test]
    fn expansion_y_rule() {
        let flags = ExpansionFlags { plural: true, possessive: false };
        let forms: Vec<String> = expand_variants("candy", flags)
            .unwrap()
            .iter()
            .map(Pattern::surface)
            .collect();
        assert_eq!(forms, vec!["candy", "candies"]);
        // vowel + y takes a plain s
        assert_eq!(pluralize("day"), "days");
        assert_eq!(pluralize("torch"), "torches");
        assert_eq!(pluralize("bus"), "buses");
        assert_eq!(pluralize("box"), "boxes");
    }

    #[test]
    fn expansion_inflects_head_token() {
        let flags = ExpansionFlags { plural: true, possessive: false };
        let forms: Vec<String> = expand_variants("car park", flags)
            .unwrap()
            .iter()
            .map(Pattern::surface)
            .collect();
        assert_eq!(forms, vec!["car park", "car parks"]);
    }

    #[test]
    fn expansion_output_contains_base_and_caps_at_four() {
        let flags = ExpansionFlags { plural: true, possessive: true };
        for base in ["torch", "nappy", "bus", "estate agent"] {
            let forms = expand_variants(base, flags).unwrap();
            assert_eq!(forms[0].surface(), normalize_token(base).replace('\u{2019}', "'"));
            assert!(forms.len() <= 4);
        }
    }

    #[test]
    fn validate_reports_empty_side() {
        let lexicon = VariantLexicon {
            kind: None,
            concepts: vec![Concept {
                id: "c1".into(),
                british: vec![],
                american: vec![Pattern::parse("truck", MatchMode::Exact).unwrap()],
            }],
        };
        let violations = lexicon.validate();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::EmptySide { side: Side::British, .. })));
    }

    #[test]
    fn validate_reports_same_side_claim_in_two_concepts() {
        let meter = Pattern::parse("meter", MatchMode::Exact).unwrap();
        let lexicon = VariantLexicon {
            kind: None,
            concepts: vec![
                Concept {
                    id: "c1".into(),
                    british: vec![Pattern::parse("metre", MatchMode::Exact).unwrap()],
                    american: vec![meter.clone()],
                },
                Concept {
                    id: "c2".into(),
                    british: vec![Pattern::parse("gauge", MatchMode::Exact).unwrap()],
                    american: vec![meter],
                },
            ],
        };
        let violations = lexicon.validate();
        let cross = violations.iter().find_map(|v| match v {
            Violation::CrossClaim { surface, claims } if surface == "meter" => Some(claims),
            _ => None,
        });
        let claims = cross.expect("missing cross-claim for `meter`");
        assert_eq!(claims.len(), 2);
    }

    #[test]
    fn pattern_rejects_affix_phrase() {
        assert_eq!(
            Pattern::parse("car park", MatchMode::Suffix).unwrap_err(),
            PatternError::AffixPhrase(MatchMode::Suffix)
        );
    }

    #[test]
    fn pattern_normalizes_unicode_apostrophe() {
        let p = Pattern::parse("chemist\u{2019}s", MatchMode::Exact).unwrap();
        assert_eq!(p.surface(), "chemist's");
    }

    #[test]
    fn builtin_lexicons_are_valid() {
        for kind in [LexiconKind::Vocabulary, LexiconKind::Spelling] {
            let lexicon = builtin_lexicon(kind);
            assert!(lexicon.validate().is_empty(), "{kind} lexicon has violations");
            assert!(!lexicon.concepts.is_empty());
        }
    }

    #[test]
    fn builtin_vocabulary_has_expected_pairs() {
        let v = builtin_lexicon(LexiconKind::Vocabulary);
        let railway = v.concepts.iter().find(|c| c.id == "railway_railroad").unwrap();
        assert!(railway.british.iter().any(|p| p.surface() == "railway"));
        assert!(railway.american.iter().any(|p| p.surface() == "railroad"));

        let solicitor = v.concepts.iter().find(|c| c.id == "barrister_attorney").unwrap();
        for form in ["solicitor", "solicitors", "solicitor's", "solicitors'"] {
            assert!(
                solicitor.british.iter().any(|p| p.surface() == form),
                "missing {form}"
            );
        }
    }

    #[test]
    fn builtin_spelling_has_expected_pairs() {
        let s = builtin_lexicon(LexiconKind::Spelling);
        let colour = s.concepts.iter().find(|c| c.id == "colour_color").unwrap();
        assert!(colour.british.iter().any(|p| p.surface() == "colour"));
        assert!(colour.american.iter().any(|p| p.surface() == "color"));

        // no concept carries the same `analog` form on both sides
        for c in &s.concepts {
            let on_b = c.british.iter().any(|p| p.surface() == "analog");
            let on_a = c.american.iter().any(|p| p.surface() == "analog");
            assert!(!(on_b && on_a), "degenerate analog pair in {}", c.id);
            assert!(!on_b && !on_a, "analog should not appear at all");
        }

        // the traveller/traveler pair is present with the full British spelling
        let traveller = s.concepts.iter().find(|c| c.id == "traveller_traveler").unwrap();
        assert!(traveller.british.iter().any(|p| p.surface() == "traveller"));
        assert!(traveller.american.iter().any(|p| p.surface() == "traveler"));
    }

    #[test]
    fn tsv_round_trip() {
        for kind in [LexiconKind::Vocabulary, LexiconKind::Spelling] {
            let lexicon = builtin_lexicon(kind);
            let reparsed = VariantLexicon::from_tsv(lexicon.to_tsv().as_bytes()).unwrap();
            assert_eq!(reparsed.concepts, lexicon.concepts);
        }
    }

    #[test]
    fn flipped_swaps_sides() {
        let l = lex("c1\tB\texact\tfoo\nc1\tA\texact\tbar\n");
        let f = l.flipped();
        assert_eq!(f.concepts[0].british[0].surface(), "bar");
        assert_eq!(f.concepts[0].american[0].surface(), "foo");
    }
}
