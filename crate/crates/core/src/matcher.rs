//! Tokenization and multi-pattern occurrence counting.
//!
//! [`CompiledMatcher`] recognizes every lexicon pattern over a token
//! sequence: single exact tokens through a hash table, affix patterns
//! through one Aho-Corasick scan per token, phrases through a first-token
//! index. [`naive_match_counts`] is the deliberately slow reference
//! implementation used to cross-check it.
//!
//! Conflict resolution is part of the contract and identical in both
//! implementations: scanning left to right, the candidate match starting at
//! the current position with the most tokens wins; among single-token
//! candidates exact mode beats affix modes; any remaining tie goes to the
//! pattern defined first in the lexicon. Every token position contributes
//! to at most one match.

use std::collections::{BTreeMap, HashMap};

use aho_corasick::AhoCorasick;

use crate::lexicon::{LexiconError, MatchMode, Pattern, Side, VariantLexicon};

/// Normalized tokens of one message.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenSequence {
    tokens: Vec<String>,
}

impl TokenSequence {
    /// Wraps already-normalized tokens (lowercase, nonempty, no whitespace).
    pub fn new(tokens: Vec<String>) -> Self {
        debug_assert!(tokens.iter().all(|t| !t.is_empty() && !t.contains(char::is_whitespace)));
        TokenSequence { tokens }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

impl From<Vec<String>> for TokenSequence {
    fn from(tokens: Vec<String>) -> Self {
        TokenSequence::new(tokens)
    }
}

/// Tokenizer switches.
#[derive(Debug, Clone, Copy)]
pub struct TokenizeOptions {
    /// Drop whole URLs (`http`/`https` schemes), @-mentions and #-tags.
    pub strip_social: bool,
}

impl Default for TokenizeOptions {
    fn default() -> Self {
        TokenizeOptions { strip_social: true }
    }
}

/// Tokenizes raw text with default options: lowercased tokens split on any
/// character that is not a letter, digit or apostrophe; U+2019 normalized to
/// `'`; leading/trailing apostrophes stripped; URLs, mentions and hashtags
/// dropped whole.
pub fn tokenize(text: &str) -> TokenSequence {
    tokenize_with(text, TokenizeOptions::default())
}

pub fn tokenize_with(text: &str, opts: TokenizeOptions) -> TokenSequence {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        if opts.strip_social && is_social_chunk(chunk) {
            continue;
        }
        for raw in chunk.split(|c: char| !(c.is_alphanumeric() || c == '\'' || c == '\u{2019}')) {
            if raw.is_empty() {
                continue;
            }
            let token = if raw.is_ascii() {
                raw.to_ascii_lowercase()
            } else {
                crate::lexicon::normalize_token(raw)
            };
            let trimmed = token.trim_matches('\'');
            if trimmed.is_empty() {
                continue;
            }
            if trimmed.len() == token.len() {
                tokens.push(token);
            } else {
                tokens.push(trimmed.to_string());
            }
        }
    }
    TokenSequence { tokens }
}

fn is_social_chunk(chunk: &str) -> bool {
    if chunk.starts_with('@') || chunk.starts_with('#') {
        return true;
    }
    let bytes = chunk.as_bytes();
    (bytes.len() >= 7 && bytes[..7].eq_ignore_ascii_case(b"http://"))
        || (bytes.len() >= 8 && bytes[..8].eq_ignore_ascii_case(b"https://"))
}

/// Per-concept occurrence counts: `a` American, `b` British.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptCounts {
    pub concept_id: String,
    pub a: u64,
    pub b: u64,
}

/// One resolved match in a token sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchHit {
    /// Concept index in the source lexicon.
    pub concept: usize,
    pub side: Side,
    /// First token position of the match.
    pub start: usize,
    /// Number of tokens covered.
    pub len: usize,
}

/// Matcher construction switches.
#[derive(Debug, Clone, Copy)]
pub struct CompileOptions {
    /// When false, prefix/suffix/substring patterns are demoted to exact
    /// matches of their literal token.
    pub affix_matching: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { affix_matching: true }
    }
}

#[derive(Debug, Clone, Copy)]
struct PatRef {
    concept: u32,
    side: Side,
    order: u32,
}

#[derive(Debug, Clone)]
struct PhraseEntry {
    rest: Vec<String>,
    pat: PatRef,
}

#[derive(Debug, Clone)]
struct AffixEntry {
    mode: MatchMode,
    pat: PatRef,
}

/// Immutable matching automaton derived from one validated lexicon.
/// Rebuilding from the same lexicon yields identical behavior; instances are
/// freely shareable across threads.
pub struct CompiledMatcher {
    concept_ids: Vec<String>,
    exact: HashMap<String, PatRef>,
    phrases: HashMap<String, Vec<PhraseEntry>>,
    affixes: Vec<AffixEntry>,
    affix_scan: Option<AhoCorasick>,
}

impl CompiledMatcher {
    pub fn new(lexicon: &VariantLexicon) -> Result<Self, LexiconError> {
        Self::with_options(lexicon, CompileOptions::default())
    }

    pub fn with_options(lexicon: &VariantLexicon, opts: CompileOptions) -> Result<Self, LexiconError> {
        let violations = lexicon.validate();
        if !violations.is_empty() {
            return Err(LexiconError::Invalid(violations));
        }

        let mut exact = HashMap::new();
        let mut phrases: HashMap<String, Vec<PhraseEntry>> = HashMap::new();
        let mut affixes = Vec::new();
        let mut affix_literals = Vec::new();

        let mut order = 0u32;
        for (concept_idx, concept) in lexicon.concepts.iter().enumerate() {
            for side in [Side::British, Side::American] {
                for pattern in concept.side(side) {
                    let pat = PatRef {
                        concept: concept_idx as u32,
                        side,
                        order,
                    };
                    order += 1;
                    let tokens = pattern.tokens();
                    if pattern.is_phrase() {
                        phrases.entry(tokens[0].clone()).or_default().push(PhraseEntry {
                            rest: tokens[1..].to_vec(),
                            pat,
                        });
                    } else if pattern.mode() == MatchMode::Exact || !opts.affix_matching {
                        exact.insert(tokens[0].clone(), pat);
                    } else {
                        affix_literals.push(tokens[0].clone());
                        affixes.push(AffixEntry { mode: pattern.mode(), pat });
                    }
                }
            }
        }

        // Longest phrase first; definition order breaks length ties (equal
        // token sequences are excluded by validation, so same-length entries
        // under one first token differ in their tails).
        for entries in phrases.values_mut() {
            entries.sort_by(|x, y| {
                y.rest.len().cmp(&x.rest.len()).then(x.pat.order.cmp(&y.pat.order))
            });
        }

        let affix_scan = if affixes.is_empty() {
            None
        } else {
            Some(AhoCorasick::new(&affix_literals).expect("affix automaton"))
        };

        Ok(CompiledMatcher {
            concept_ids: lexicon.concept_ids().map(str::to_string).collect(),
            exact,
            phrases,
            affixes,
            affix_scan,
        })
    }

    pub fn concept_count(&self) -> usize {
        self.concept_ids.len()
    }

    pub fn concept_id(&self, idx: usize) -> &str {
        &self.concept_ids[idx]
    }

    /// Resolved matches over a token sequence, left to right.
    pub fn find_hits(&self, seq: &TokenSequence) -> Vec<MatchHit> {
        let tokens = seq.tokens();
        let mut hits = Vec::new();
        let mut pos = 0;
        while pos < tokens.len() {
            if let Some(entries) = self.phrases.get(tokens[pos].as_str()) {
                if let Some(entry) = entries.iter().find(|e| {
                    let end = pos + 1 + e.rest.len();
                    end <= tokens.len() && tokens[pos + 1..end].iter().eq(e.rest.iter())
                }) {
                    let len = 1 + entry.rest.len();
                    hits.push(MatchHit {
                        concept: entry.pat.concept as usize,
                        side: entry.pat.side,
                        start: pos,
                        len,
                    });
                    pos += len;
                    continue;
                }
            }
            if let Some(pat) = self.match_single(&tokens[pos]) {
                hits.push(MatchHit {
                    concept: pat.concept as usize,
                    side: pat.side,
                    start: pos,
                    len: 1,
                });
            }
            pos += 1;
        }
        hits
    }

    /// Best single-token match: exact beats affix, then definition order.
    fn match_single(&self, token: &str) -> Option<PatRef> {
        if let Some(pat) = self.exact.get(token) {
            return Some(*pat);
        }
        let scan = self.affix_scan.as_ref()?;
        let mut best: Option<PatRef> = None;
        for mat in scan.find_overlapping_iter(token) {
            let entry = &self.affixes[mat.pattern().as_usize()];
            let position_ok = match entry.mode {
                MatchMode::Exact => unreachable!("exact patterns live in the hash table"),
                MatchMode::Prefix => mat.start() == 0,
                MatchMode::Suffix => mat.end() == token.len(),
                MatchMode::Substring => true,
            };
            if position_ok && best.is_none_or(|b| entry.pat.order < b.order) {
                best = Some(entry.pat);
            }
        }
        best
    }

    /// Matches a lone token, as used by 1-gram aggregation.
    pub fn match_token(&self, token: &str) -> Option<(usize, Side)> {
        self.match_single(token).map(|p| (p.concept as usize, p.side))
    }

    /// Per-concept counts over a token sequence, in concept definition
    /// order; only concepts with at least one hit appear.
    pub fn match_counts(&self, seq: &TokenSequence) -> Vec<ConceptCounts> {
        counts_from_hits(&self.concept_ids, &self.find_hits(seq))
    }
}

fn counts_from_hits(concept_ids: &[String], hits: &[MatchHit]) -> Vec<ConceptCounts> {
    let mut counts: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
    for hit in hits {
        let entry = counts.entry(hit.concept).or_default();
        match hit.side {
            Side::American => entry.0 += 1,
            Side::British => entry.1 += 1,
        }
    }
    counts
        .into_iter()
        .map(|(idx, (a, b))| ConceptCounts {
            concept_id: concept_ids[idx].clone(),
            a,
            b,
        })
        .collect()
}

/// Brute-force reference matcher: scans every pattern at every position and
/// applies the same resolution rule as [`CompiledMatcher`]. Intentionally
/// slow; exists to verify the automaton.
pub fn naive_match_counts(lexicon: &VariantLexicon, seq: &TokenSequence) -> Vec<ConceptCounts> {
    let concept_ids: Vec<String> = lexicon.concept_ids().map(str::to_string).collect();
    counts_from_hits(&concept_ids, &naive_find_hits(lexicon, seq))
}

fn naive_find_hits(lexicon: &VariantLexicon, seq: &TokenSequence) -> Vec<MatchHit> {
    struct Candidate {
        len: usize,
        affix: bool,
        order: usize,
        concept: usize,
        side: Side,
    }

    let mut flat: Vec<(usize, Side, &Pattern)> = Vec::new();
    for (concept_idx, concept) in lexicon.concepts.iter().enumerate() {
        for side in [Side::British, Side::American] {
            for pattern in concept.side(side) {
                flat.push((concept_idx, side, pattern));
            }
        }
    }

    let tokens = seq.tokens();
    let mut hits = Vec::new();
    let mut pos = 0;
    while pos < tokens.len() {
        let mut best: Option<Candidate> = None;
        for (order, &(concept, side, pattern)) in flat.iter().enumerate() {
            let candidate = if pattern.is_phrase() {
                let end = pos + pattern.tokens().len();
                if end <= tokens.len() && tokens[pos..end].iter().eq(pattern.tokens().iter()) {
                    Some(Candidate {
                        len: pattern.tokens().len(),
                        affix: false,
                        order,
                        concept,
                        side,
                    })
                } else {
                    None
                }
            } else if pattern.matches_token(&tokens[pos]) {
                Some(Candidate {
                    len: 1,
                    affix: pattern.mode() != MatchMode::Exact,
                    order,
                    concept,
                    side,
                })
            } else {
                None
            };
            if let Some(c) = candidate {
                let better = match &best {
                    None => true,
                    Some(b) => (c.len, !c.affix, std::cmp::Reverse(c.order))
                        > (b.len, !b.affix, std::cmp::Reverse(b.order)),
                };
                if better {
                    best = Some(c);
                }
            }
        }
        match best {
            Some(c) => {
                hits.push(MatchHit {
                    concept: c.concept,
                    side: c.side,
                    start: pos,
                    len: c.len,
                });
                pos += c.len;
            }
            None => pos += 1,
        }
    }
    hits
}
