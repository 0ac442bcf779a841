//! Term–document statistics over the citation graph: how often each term
//! accompanies citations of each article, inverse-document-frequency
//! weighting, Pearson correlation between term rows, and the similar-term
//! sets used to widen a query.
//!
//! Rows are terms and columns are articles, both kept sorted; matrices are
//! sparse, with absent entries meaning zero. Correlations are computed
//! from the sparse rows but are defined over the full column set, zeros
//! included.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{ArticleId, Term};
use crate::graph::{union_term_sets, TermLabeledGraph};

/// Relative variance floor below which a row is treated as constant.
/// Catches both exact zero variance and the rounding dust left when a
/// mathematically constant row is computed through floating point.
const VAR_EPS: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticsError {
    #[error("term `{0}` is not a row of the matrix")]
    UnknownTerm(Term),
    #[error("article `{0}` is not a column of the matrix")]
    UnknownArticle(ArticleId),
    #[error("term `{0}` has an all-zero row; its inverse document frequency is undefined")]
    ZeroRow(Term),
    #[error("vectors differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("threshold must lie strictly between 0 and 1, got {0}")]
    InvalidThreshold(f64),
    #[error("invalid similar-term set: {0}")]
    InvalidSimilarSet(String),
}

/// Sparse counts of distinct citers: entry (β, j) is the number of
/// articles that cite j with β on the arc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDocumentMatrix {
    terms: Vec<Term>,
    articles: Vec<ArticleId>,
    /// Per row: (column, count) pairs, column-ascending, counts positive.
    rows: Vec<Vec<(u32, u32)>>,
}

impl TermDocumentMatrix {
    /// Builds a matrix from explicit entries. `terms` and `articles` fix
    /// the row and column sets (and may include all-zero rows or columns);
    /// both are sorted and deduplicated. Entries for the same cell
    /// accumulate; zero counts are dropped.
    pub fn from_entries<I>(
        terms: Vec<Term>,
        articles: Vec<ArticleId>,
        entries: I,
    ) -> Result<Self, AnalyticsError>
    where
        I: IntoIterator<Item = (Term, ArticleId, u32)>,
    {
        let mut terms = terms;
        terms.sort_unstable();
        terms.dedup();
        let mut articles = articles;
        articles.sort_unstable();
        articles.dedup();

        let mut cells: BTreeMap<(usize, u32), u64> = BTreeMap::new();
        for (term, article, count) in entries {
            let row = terms
                .binary_search(&term)
                .map_err(|_| AnalyticsError::UnknownTerm(term.clone()))?;
            let col = articles
                .binary_search(&article)
                .map_err(|_| AnalyticsError::UnknownArticle(article.clone()))?;
            *cells.entry((row, col as u32)).or_insert(0) += u64::from(count);
        }

        let mut rows = vec![Vec::new(); terms.len()];
        for ((row, col), count) in cells {
            if count > 0 {
                rows[row].push((col, u32::try_from(count).unwrap_or(u32::MAX)));
            }
        }
        Ok(TermDocumentMatrix {
            terms,
            articles,
            rows,
        })
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn article_count(&self) -> usize {
        self.articles.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn articles(&self) -> &[ArticleId] {
        &self.articles
    }

    /// Number of stored (nonzero) entries.
    pub fn entry_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Count for a cell: `Some(0)` for an absent entry, `None` when the
    /// term or article is not part of the matrix at all.
    pub fn count(&self, term: &Term, article: &ArticleId) -> Option<u32> {
        let row = self.row_of(term)?;
        let col = self.articles.binary_search(article).ok()? as u32;
        Some(
            match self.rows[row].binary_search_by_key(&col, |&(c, _)| c) {
                Ok(i) => self.rows[row][i].1,
                Err(_) => 0,
            },
        )
    }

    /// Number of articles with a nonzero count for `term`.
    pub fn document_frequency(&self, term: &Term) -> Option<usize> {
        self.row_of(term).map(|row| self.rows[row].len())
    }

    /// Pearson correlation of two term rows over the full column set.
    pub fn row_pearson(&self, a: &Term, b: &Term) -> Result<f64, AnalyticsError> {
        let ra = self
            .row_of(a)
            .ok_or_else(|| AnalyticsError::UnknownTerm(a.clone()))?;
        let rb = self
            .row_of(b)
            .ok_or_else(|| AnalyticsError::UnknownTerm(b.clone()))?;
        let va: Vec<(u32, f64)> = self.rows[ra]
            .iter()
            .map(|&(c, v)| (c, f64::from(v)))
            .collect();
        let vb: Vec<(u32, f64)> = self.rows[rb]
            .iter()
            .map(|&(c, v)| (c, f64::from(v)))
            .collect();
        Ok(sparse_pearson(self.articles.len(), &va, &vb))
    }

    pub(crate) fn row_of(&self, term: &Term) -> Option<usize> {
        self.terms.binary_search(term).ok()
    }

    pub(crate) fn rows(&self) -> &[Vec<(u32, u32)>] {
        &self.rows
    }
}

/// The count matrix reweighted by inverse document frequency:
/// value(β, j) = idf(β) · count(β, j), with the same sparsity pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedTermDocumentMatrix {
    terms: Vec<Term>,
    articles: Vec<ArticleId>,
    /// Inverse document frequency per row; zero exactly when the term has
    /// a nonzero count in every column (then the whole row is zeros).
    idf: Vec<f64>,
    rows: Vec<Vec<(u32, f64)>>,
}

impl WeightedTermDocumentMatrix {
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn article_count(&self) -> usize {
        self.articles.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn articles(&self) -> &[ArticleId] {
        &self.articles
    }

    pub fn entry_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Weighted value for a cell: `Some(0.0)` for an absent entry, `None`
    /// when the term or article is unknown.
    pub fn value(&self, term: &Term, article: &ArticleId) -> Option<f64> {
        let row = self.row_of(term)?;
        let col = self.articles.binary_search(article).ok()? as u32;
        Some(
            match self.rows[row].binary_search_by_key(&col, |&(c, _)| c) {
                Ok(i) => self.rows[row][i].1,
                Err(_) => 0.0,
            },
        )
    }

    /// Inverse document frequency of a term, if it is a row.
    pub fn idf_of(&self, term: &Term) -> Option<f64> {
        self.row_of(term).map(|row| self.idf[row])
    }

    /// Pearson correlation of two term rows over the full column set.
    pub fn row_pearson(&self, a: &Term, b: &Term) -> Result<f64, AnalyticsError> {
        let ra = self
            .row_of(a)
            .ok_or_else(|| AnalyticsError::UnknownTerm(a.clone()))?;
        let rb = self
            .row_of(b)
            .ok_or_else(|| AnalyticsError::UnknownTerm(b.clone()))?;
        Ok(sparse_pearson(
            self.articles.len(),
            &self.rows[ra],
            &self.rows[rb],
        ))
    }

    pub(crate) fn row_of(&self, term: &Term) -> Option<usize> {
        self.terms.binary_search(term).ok()
    }

    pub(crate) fn rows(&self) -> &[Vec<(u32, f64)>] {
        &self.rows
    }
}

/// Counts distinct citers per (term, article) over the whole graph. Rows
/// are the terms that label at least one arc; columns are all articles.
pub fn build_matrix(graph: &TermLabeledGraph) -> TermDocumentMatrix {
    let terms: Vec<Term> = union_term_sets(graph).into_iter().collect();
    let articles: Vec<ArticleId> = graph.nodes().cloned().collect();
    let mut entries = Vec::new();
    for (_, target, labels) in graph.arcs() {
        for term in labels {
            // One arc per citing pair and set-valued labels make every
            // entry a distinct citer.
            entries.push((term.clone(), target.clone(), 1));
        }
    }
    TermDocumentMatrix::from_entries(terms, articles, entries)
        .expect("arc labels and endpoints are always registered in the graph")
}

/// Inverse document frequency of `term`: ln(columns / nonzero columns).
pub fn idf(matrix: &TermDocumentMatrix, term: &Term) -> Result<f64, AnalyticsError> {
    let row = matrix
        .row_of(term)
        .ok_or_else(|| AnalyticsError::UnknownTerm(term.clone()))?;
    let df = matrix.rows()[row].len();
    if df == 0 {
        return Err(AnalyticsError::ZeroRow(term.clone()));
    }
    Ok((matrix.article_count() as f64 / df as f64).ln())
}

/// Applies idf weighting row by row. Rows without a single nonzero count
/// cannot be weighted and are dropped; the second return value lists them
/// so callers can warn.
pub fn weight_matrix(matrix: &TermDocumentMatrix) -> (WeightedTermDocumentMatrix, Vec<Term>) {
    let article_count = matrix.article_count() as f64;
    let mut terms = Vec::new();
    let mut idf_values = Vec::new();
    let mut rows = Vec::new();
    let mut dropped = Vec::new();
    for (term, counts) in matrix.terms().iter().zip(matrix.rows()) {
        if counts.is_empty() {
            dropped.push(term.clone());
            continue;
        }
        let idf_value = (article_count / counts.len() as f64).ln();
        terms.push(term.clone());
        idf_values.push(idf_value);
        rows.push(
            counts
                .iter()
                .map(|&(col, count)| (col, idf_value * f64::from(count)))
                .collect(),
        );
    }
    (
        WeightedTermDocumentMatrix {
            terms,
            articles: matrix.articles().to_vec(),
            idf: idf_values,
            rows,
        },
        dropped,
    )
}

/// Sample Pearson correlation of two equal-length vectors. Constant input
/// has no direction, so it correlates to 0 by convention instead of NaN;
/// results are clamped to [-1, 1].
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, AnalyticsError> {
    if x.len() != y.len() {
        return Err(AnalyticsError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let xs: Vec<(u32, f64)> = x.iter().enumerate().map(|(i, &v)| (i as u32, v)).collect();
    let ys: Vec<(u32, f64)> = y.iter().enumerate().map(|(i, &v)| (i as u32, v)).collect();
    Ok(sparse_pearson(x.len(), &xs, &ys))
}

/// Correlation from sparse rows over `n` total columns: sums run over the
/// explicit entries, absent columns contribute zero. Entries must be
/// column-sorted. The merged walk over shared columns fixes the summation
/// order, so swapping the arguments gives a bit-identical result.
fn sparse_pearson(n: usize, a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let (mut sum_a, mut sumsq_a) = (0.0, 0.0);
    for &(_, v) in a {
        sum_a += v;
        sumsq_a += v * v;
    }
    let (mut sum_b, mut sumsq_b) = (0.0, 0.0);
    for &(_, v) in b {
        sum_b += v;
        sumsq_b += v * v;
    }
    let mut cross = 0.0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                cross += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    let var_a = sumsq_a - sum_a * sum_a / nf;
    let var_b = sumsq_b - sum_b * sum_b / nf;
    if var_a <= VAR_EPS * sumsq_a || var_b <= VAR_EPS * sumsq_b {
        return 0.0;
    }
    let cov = cross - sum_a * sum_b / nf;
    (cov / (var_a.sqrt() * var_b.sqrt())).clamp(-1.0, 1.0)
}

/// Terms whose citation pattern correlates with a query term at or above a
/// threshold. The query itself is always a member, pinned at score 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarTermSet {
    query_term: Term,
    threshold: f64,
    scores: BTreeMap<Term, f64>,
}

impl SimilarTermSet {
    /// The set containing only the query term itself.
    pub fn single(query_term: Term, threshold: f64) -> Self {
        let mut scores = BTreeMap::new();
        scores.insert(query_term.clone(), 1.0);
        SimilarTermSet {
            query_term,
            threshold,
            scores,
        }
    }

    /// Builds a set from explicit scores, enforcing the invariants the
    /// rest of the pipeline relies on: the threshold lies strictly in
    /// (0, 1), the query term is present with score exactly 1, and every
    /// score is at least the threshold (hence positive).
    pub fn with_scores<I>(
        query_term: Term,
        threshold: f64,
        scores: I,
    ) -> Result<Self, AnalyticsError>
    where
        I: IntoIterator<Item = (Term, f64)>,
    {
        validate_threshold(threshold)?;
        let scores: BTreeMap<Term, f64> = scores.into_iter().collect();
        match scores.get(&query_term) {
            Some(&s) => {
                if s != 1.0 {
                    return Err(AnalyticsError::InvalidSimilarSet(format!(
                        "query term `{query_term}` must have score 1, got {s}"
                    )));
                }
            }
            None => {
                return Err(AnalyticsError::InvalidSimilarSet(format!(
                    "query term `{query_term}` is missing from the set"
                )))
            }
        }
        for (term, &score) in &scores {
            if !(score >= threshold && score <= 1.0) {
                return Err(AnalyticsError::InvalidSimilarSet(format!(
                    "score {score} for `{term}` is outside [{threshold}, 1]"
                )));
            }
        }
        Ok(SimilarTermSet {
            query_term,
            threshold,
            scores,
        })
    }

    pub fn query_term(&self) -> &Term {
        &self.query_term
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn score(&self, term: &Term) -> Option<f64> {
        self.scores.get(term).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, f64)> {
        self.scores.iter().map(|(t, &s)| (t, s))
    }

    /// Members ordered by (score descending, term ascending).
    pub fn ranked(&self) -> Vec<(&Term, f64)> {
        let mut out: Vec<(&Term, f64)> = self.scores.iter().map(|(t, &s)| (t, s)).collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        out
    }
}

impl fmt::Display for SimilarTermSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (term, score) in self.ranked() {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{term}: {score:.4}")?;
            first = false;
        }
        Ok(())
    }
}

fn validate_threshold(threshold: f64) -> Result<(), AnalyticsError> {
    if threshold.is_finite() && threshold > 0.0 && threshold < 1.0 {
        Ok(())
    } else {
        Err(AnalyticsError::InvalidThreshold(threshold))
    }
}

/// Every term whose row correlates with `query`'s row at `threshold` or
/// above, with the raw correlation as its score; the query itself is
/// included at score 1.
pub fn similar_terms(
    matrix: &WeightedTermDocumentMatrix,
    query: &Term,
    threshold: f64,
) -> Result<SimilarTermSet, AnalyticsError> {
    validate_threshold(threshold)?;
    let row = matrix
        .row_of(query)
        .ok_or_else(|| AnalyticsError::UnknownTerm(query.clone()))?;
    let mut scores = BTreeMap::new();
    scores.insert(query.clone(), 1.0);
    for (idx, term) in matrix.terms().iter().enumerate() {
        if idx == row {
            continue;
        }
        let p = sparse_pearson(
            matrix.article_count(),
            &matrix.rows()[row],
            &matrix.rows()[idx],
        );
        if p >= threshold {
            scores.insert(term.clone(), p);
        }
    }
    Ok(SimilarTermSet {
        query_term: query.clone(),
        threshold,
        scores,
    })
}

/// The `k` terms with the largest weighted values in `article`'s column,
/// ordered by (value descending, term ascending). Zero-valued cells never
/// qualify, so fewer than `k` results are possible.
pub fn descriptive_terms(
    matrix: &WeightedTermDocumentMatrix,
    article: &ArticleId,
    k: usize,
) -> Result<Vec<(Term, f64)>, AnalyticsError> {
    let col = matrix
        .articles()
        .binary_search(article)
        .map_err(|_| AnalyticsError::UnknownArticle(article.clone()))? as u32;
    let mut found: Vec<(Term, f64)> = Vec::new();
    for (term, row) in matrix.terms().iter().zip(matrix.rows()) {
        if let Ok(i) = row.binary_search_by_key(&col, |&(c, _)| c) {
            let value = row[i].1;
            if value > 0.0 {
                found.push((term.clone(), value));
            }
        }
    }
    found.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    found.truncate(k);
    Ok(found)
}
