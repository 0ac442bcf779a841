//! Corpus ingestion: record parsing, keyword dictionaries, citation-context
//! windows, and term identification.
//!
//! A corpus is a UTF-8 stream of JSON records, one per line. `article`
//! records declare documents and their keyword phrases; `citation` records
//! carry the text surrounding one citation marker in the citing article.
//! Lines starting with `#` are comments. Everything downstream consumes the
//! [`CorpusIndex`] produced by [`parse_corpus`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{self, BufRead};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of an article. Non-empty for every record that passes the
/// ingest boundary.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArticleId(String);

impl ArticleId {
    pub fn new(id: impl Into<String>) -> Self {
        ArticleId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ArticleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ArticleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArticleId({:?})", self.0)
    }
}

/// A normalized term: one or more lowercase words joined by single spaces.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Term(pub(crate) String);

impl Term {
    /// Normalizes `raw` into a term. `None` when nothing survives
    /// normalization (punctuation-only or empty input).
    pub fn new(raw: &str) -> Option<Self> {
        let normalized = normalize_text(raw);
        if normalized.is_empty() {
            None
        } else {
            Some(Term(normalized))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Number of space-separated words.
    pub fn word_count(&self) -> usize {
        self.0.split(' ').count()
    }

    /// True when `raw` is already in normalized form.
    pub fn is_normalized(raw: &str) -> bool {
        normalize_text(raw) == raw
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({:?})", self.0)
    }
}

/// Canonicalizes free text for matching: lowercased, punctuation replaced
/// by spaces, whitespace runs collapsed to single spaces, no leading or
/// trailing space.
pub fn normalize_text(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut gap = false;
    for ch in raw.chars() {
        if !ch.is_alphanumeric() {
            gap = true;
            continue;
        }
        for lower in ch.to_lowercase() {
            // Full case mapping can emit decorations (e.g. a combining
            // dot); keep only the alphanumeric parts so the result is
            // stable under re-normalization.
            if !lower.is_alphanumeric() {
                continue;
            }
            if gap && !out.is_empty() {
                out.push(' ');
            }
            gap = false;
            out.push(lower);
        }
    }
    out
}

/// An article declared by the corpus, or a stub registered for an article
/// that is cited but never declared.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub id: ArticleId,
    pub title: String,
    /// Keyword phrases as written; normalization happens when the
    /// dictionary is built. Stubs carry an empty list.
    pub keywords: Vec<String>,
}

impl ArticleRecord {
    /// Placeholder for a cited-only article: empty title, no keywords.
    pub fn stub(id: ArticleId) -> Self {
        ArticleRecord {
            id,
            title: String::new(),
            keywords: Vec::new(),
        }
    }
}

/// One citation marker and the text around it. `marker_offset` counts
/// characters (not bytes) from the start of `context`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CitationRecord {
    pub source: ArticleId,
    pub target: ArticleId,
    pub context: String,
    pub marker_offset: usize,
}

/// Tunables for ingestion and term identification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestConfig {
    /// Total width, in characters, of the context window carved around a
    /// citation marker: half before it, half after, clipped at the text
    /// boundaries. Must be at least 2.
    pub window_chars: usize,
    /// Keyword phrases longer than this many words are left out of the
    /// dictionary. Must be at least 1.
    pub term_max_words: usize,
    /// When set, term identification scans greedily left to right and a
    /// match consumes its words, so shorter phrases inside or overlapping
    /// a longer match are not reported. Off by default: every dictionary
    /// phrase present in the window is reported.
    pub longest_match_only: bool,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            window_chars: 400,
            term_max_words: 2,
            longest_match_only: false,
        }
    }
}

impl IngestConfig {
    pub fn validate(&self) -> Result<(), ParseError> {
        if self.window_chars < 2 {
            return Err(ParseError::InvalidConfig(format!(
                "window_chars must be at least 2, got {}",
                self.window_chars
            )));
        }
        if self.term_max_words < 1 {
            return Err(ParseError::InvalidConfig(
                "term_max_words must be at least 1".to_owned(),
            ));
        }
        Ok(())
    }
}

/// The set of known terms, built from article keyword phrases.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TermDictionary {
    terms: BTreeSet<Term>,
}

impl TermDictionary {
    pub fn contains(&self, term: &Term) -> bool {
        self.terms.contains(term)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter()
    }

    /// Dictionary entries starting with `prefix`, in lexicographic order,
    /// capped at `limit`. Used for "did you mean" suggestions.
    pub fn prefix_matches(&self, prefix: &str, limit: usize) -> Vec<Term> {
        self.terms
            .iter()
            .filter(|t| t.as_str().starts_with(prefix))
            .take(limit)
            .cloned()
            .collect()
    }
}

/// Counters accumulated while parsing; callers surface them as warnings.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    /// Citation records whose source and target were the same article.
    /// Such records are dropped, not fatal.
    pub self_citations_rejected: usize,
    /// Articles registered as stubs because they were cited but never
    /// declared.
    pub stub_articles: usize,
}

/// A parsed corpus: article records keyed by id, citation records in a
/// canonical order, and the keyword dictionary derived from the articles.
/// Content is independent of the input line order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusIndex {
    pub articles: BTreeMap<ArticleId, ArticleRecord>,
    pub citations: Vec<CitationRecord>,
    pub dictionary: TermDictionary,
    pub stats: IngestStats,
}

/// Ingest failure, attributed to an input line wherever one is involved.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("i/o error reading corpus: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate article id `{id}`")]
    DuplicateArticle { line: usize, id: ArticleId },
    #[error("line {line}: field `{field}` must be a non-empty id")]
    EmptyId { line: usize, field: &'static str },
    #[error("line {line}: marker_offset {offset} exceeds context length {len}")]
    MarkerOutOfRange {
        line: usize,
        offset: usize,
        len: usize,
    },
    #[error("line {line}: keyword `{keyword}` normalizes to nothing")]
    EmptyKeyword { line: usize, keyword: String },
    #[error("line {line}: citation source `{id}` does not match any article record")]
    UnknownSource { line: usize, id: ArticleId },
    #[error("invalid ingest config: {0}")]
    InvalidConfig(String),
}

/// A citation marker offset pointing past the end of its context text.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("marker offset {offset} is past the end of the context ({len} characters)")]
pub struct WindowError {
    pub offset: usize,
    pub len: usize,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawRecord {
    Article {
        id: String,
        title: String,
        keywords: Vec<String>,
    },
    Citation {
        source: String,
        target: String,
        context: String,
        marker_offset: usize,
    },
}

/// Parses a line-delimited corpus into a [`CorpusIndex`].
///
/// Comment (`#`) and blank lines are skipped. Self-citations are dropped
/// and counted. Citation targets that never appear as articles are
/// registered as stub records; citation sources must be declared. The
/// result does not depend on the order of the input lines.
pub fn parse_corpus<R: BufRead>(
    mut reader: R,
    config: &IngestConfig,
) -> Result<CorpusIndex, ParseError> {
    config.validate()?;

    let mut articles: BTreeMap<ArticleId, ArticleRecord> = BTreeMap::new();
    let mut citations: Vec<CitationRecord> = Vec::new();
    let mut citation_lines: Vec<usize> = Vec::new();
    let mut stats = IngestStats::default();

    let mut buf = String::new();
    let mut line_no = 0usize;
    loop {
        buf.clear();
        line_no += 1;
        match reader.read_line(&mut buf) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) if e.kind() == io::ErrorKind::InvalidData => {
                return Err(ParseError::Malformed {
                    line: line_no,
                    message: "not valid UTF-8".to_owned(),
                })
            }
            Err(e) => return Err(ParseError::Io(e)),
        }
        let trimmed = buf.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let record: RawRecord =
            serde_json::from_str(trimmed).map_err(|e| ParseError::Malformed {
                line: line_no,
                message: e.to_string(),
            })?;
        match record {
            RawRecord::Article {
                id,
                title,
                keywords,
            } => {
                if id.is_empty() {
                    return Err(ParseError::EmptyId {
                        line: line_no,
                        field: "id",
                    });
                }
                for keyword in &keywords {
                    if Term::new(keyword).is_none() {
                        return Err(ParseError::EmptyKeyword {
                            line: line_no,
                            keyword: keyword.clone(),
                        });
                    }
                }
                let id = ArticleId::new(id);
                if articles.contains_key(&id) {
                    return Err(ParseError::DuplicateArticle { line: line_no, id });
                }
                articles.insert(
                    id.clone(),
                    ArticleRecord {
                        id,
                        title,
                        keywords,
                    },
                );
            }
            RawRecord::Citation {
                source,
                target,
                context,
                marker_offset,
            } => {
                if source.is_empty() {
                    return Err(ParseError::EmptyId {
                        line: line_no,
                        field: "source",
                    });
                }
                if target.is_empty() {
                    return Err(ParseError::EmptyId {
                        line: line_no,
                        field: "target",
                    });
                }
                let len = context.chars().count();
                if marker_offset > len {
                    return Err(ParseError::MarkerOutOfRange {
                        line: line_no,
                        offset: marker_offset,
                        len,
                    });
                }
                if source == target {
                    stats.self_citations_rejected += 1;
                    continue;
                }
                citations.push(CitationRecord {
                    source: ArticleId::new(source),
                    target: ArticleId::new(target),
                    context,
                    marker_offset,
                });
                citation_lines.push(line_no);
            }
        }
    }

    // Sources must be declared articles: a citation context comes from the
    // citing article's text, so the corpus has to know that article.
    for (record, line) in citations.iter().zip(&citation_lines) {
        if !articles.contains_key(&record.source) {
            return Err(ParseError::UnknownSource {
                line: *line,
                id: record.source.clone(),
            });
        }
    }
    // Cited-only targets become stubs.
    for record in &citations {
        if !articles.contains_key(&record.target) {
            stats.stub_articles += 1;
            articles.insert(
                record.target.clone(),
                ArticleRecord::stub(record.target.clone()),
            );
        }
    }
    // Canonical order, so permuting the input lines cannot leak into the
    // index content.
    citations.sort_unstable();

    let dictionary = build_term_dictionary(articles.values(), config);
    Ok(CorpusIndex {
        articles,
        citations,
        dictionary,
        stats,
    })
}

/// Collects the normalized keyword phrases of `articles` that fit within
/// `config.term_max_words`. Keywords shared between articles collapse to a
/// single entry; phrases that normalize to nothing are skipped.
pub fn build_term_dictionary<'a, I>(articles: I, config: &IngestConfig) -> TermDictionary
where
    I: IntoIterator<Item = &'a ArticleRecord>,
{
    let mut terms = BTreeSet::new();
    for article in articles {
        for keyword in &article.keywords {
            if let Some(term) = Term::new(keyword) {
                if term.word_count() <= config.term_max_words {
                    terms.insert(term);
                }
            }
        }
    }
    TermDictionary { terms }
}

/// Carves the context window around a citation marker: up to half of
/// `window_chars` before the marker and half after, clipped at the text
/// boundaries. Offsets and widths are in characters.
pub fn extract_window(
    text: &str,
    marker_offset: usize,
    window_chars: usize,
) -> Result<&str, WindowError> {
    let total = text.chars().count();
    if marker_offset > total {
        return Err(WindowError {
            offset: marker_offset,
            len: total,
        });
    }
    let half = window_chars / 2;
    let start = marker_offset.saturating_sub(half);
    let end = marker_offset.saturating_add(half).min(total);
    Ok(&text[byte_at_char(text, start)..byte_at_char(text, end)])
}

fn byte_at_char(text: &str, char_pos: usize) -> usize {
    text.char_indices()
        .nth(char_pos)
        .map(|(byte, _)| byte)
        .unwrap_or(text.len())
}

/// Finds the dictionary terms present in `window` after normalization.
///
/// Every phrase length from one word up to `config.term_max_words` is tried
/// at every position, so overlapping matches are all reported; repeated
/// occurrences collapse because the result is a set. With
/// `config.longest_match_only` the scan is instead greedy left to right and
/// the words of a match are consumed.
pub fn identify_terms(
    window: &str,
    dictionary: &TermDictionary,
    config: &IngestConfig,
) -> BTreeSet<Term> {
    let normalized = normalize_text(window);
    let words: Vec<&str> = normalized.split(' ').filter(|w| !w.is_empty()).collect();
    let mut found = BTreeSet::new();
    let max_words = config.term_max_words.max(1);

    if config.longest_match_only {
        let mut i = 0;
        while i < words.len() {
            let mut consumed = 0;
            for n in (1..=max_words.min(words.len() - i)).rev() {
                let candidate = Term(words[i..i + n].join(" "));
                if dictionary.contains(&candidate) {
                    found.insert(candidate);
                    consumed = n;
                    break;
                }
            }
            i += consumed.max(1);
        }
    } else {
        for i in 0..words.len() {
            for n in 1..=max_words.min(words.len() - i) {
                let candidate = Term(words[i..i + n].join(" "));
                if dictionary.contains(&candidate) {
                    found.insert(candidate);
                }
            }
        }
    }
    found
}
