//! End-to-end query pipeline: resolve a query term, expand it to its
//! similar-term set, superpose the matching subgraphs into a weighted
//! network, and rank the articles of that network.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::{similar_terms, AnalyticsError, SimilarTermSet, WeightedTermDocumentMatrix};
use crate::corpus::{normalize_text, Term, TermDictionary};
use crate::graph::{superpose, term_subgraph, TermLabeledGraph};
use crate::ranking::{
    hits, indegree_rank, pagerank, RankAlgorithm, RankConfig, RankingError, RankingResult,
};

/// How many dictionary entries an unknown-term error suggests at most.
const MAX_SUGGESTIONS: usize = 5;

/// User-facing algorithm selection; `Hits` covers authorities and,
/// on request, hubs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryAlgorithm {
    Indegree,
    Hits,
    Pagerank,
}

impl QueryAlgorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            QueryAlgorithm::Indegree => "indegree",
            QueryAlgorithm::Hits => "hits",
            QueryAlgorithm::Pagerank => "pagerank",
        }
    }
}

impl fmt::Display for QueryAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Controls for one query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryConfig {
    /// Similarity threshold, strictly between 0 and 1.
    pub delta: f64,
    /// Expand the query with correlated terms before ranking.
    pub use_similar_terms: bool,
    /// Also report hub scores when HITS runs.
    pub include_hubs: bool,
    /// Keep at most this many entries per ranking.
    pub top_k: usize,
    /// Which algorithms to run; must be non-empty.
    pub algorithms: Vec<QueryAlgorithm>,
    pub rank_config: RankConfig,
}

impl Default for QueryConfig {
    fn default() -> Self {
        QueryConfig {
            delta: 0.35,
            use_similar_terms: true,
            include_hubs: false,
            top_k: 10,
            algorithms: vec![
                QueryAlgorithm::Indegree,
                QueryAlgorithm::Hits,
                QueryAlgorithm::Pagerank,
            ],
            rank_config: RankConfig::default(),
        }
    }
}

impl QueryConfig {
    pub fn validate(&self) -> Result<(), QueryError> {
        if !(self.delta.is_finite() && self.delta > 0.0 && self.delta < 1.0) {
            return Err(QueryError::InvalidConfig(format!(
                "delta must lie strictly between 0 and 1, got {}",
                self.delta
            )));
        }
        if self.algorithms.is_empty() {
            return Err(QueryError::InvalidConfig(
                "at least one ranking algorithm must be selected".to_owned(),
            ));
        }
        self.rank_config
            .validate()
            .map_err(|e| QueryError::InvalidConfig(e.to_string()))
    }
}

/// Node and arc counts of a query network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSize {
    pub nodes: usize,
    pub arcs: usize,
}

/// Everything one query produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub query_term: Term,
    pub similar_terms: SimilarTermSet,
    /// Size of the reduced single-term subgraph, before expansion.
    pub base_network_size: NetworkSize,
    /// Size of the reduced network the rankings ran on.
    pub network_size: NetworkSize,
    /// One result per reported score family, truncated to `top_k`.
    pub rankings: BTreeMap<RankAlgorithm, RankingResult>,
}

/// Bookkeeping summary of a query's networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub nodes: usize,
    pub arcs: usize,
    pub base_nodes: usize,
    pub base_arcs: usize,
    /// Nodes the similar-term expansion added beyond the single-term subgraph.
    pub enrichment_nodes: usize,
    pub similar_term_count: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum QueryError {
    #[error("unknown term `{term}`{}", render_suggestions(.suggestions))]
    UnknownTerm {
        term: String,
        suggestions: Vec<String>,
    },
    #[error("term `{term}` has no citation evidence: it never occurs in any citation context")]
    NoCitationEvidence { term: String },
    #[error("invalid query config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error(transparent)]
    Ranking(#[from] RankingError),
}

fn render_suggestions(suggestions: &[String]) -> String {
    if suggestions.is_empty() {
        String::new()
    } else {
        format!("; closest dictionary entries: {}", suggestions.join(", "))
    }
}

/// Normalizes raw user input into a dictionary term, or explains what was
/// close to it.
fn resolve_term(dictionary: &TermDictionary, raw: &str) -> Result<Term, QueryError> {
    let Some(term) = Term::new(raw) else {
        return Err(QueryError::UnknownTerm {
            term: raw.to_owned(),
            suggestions: Vec::new(),
        });
    };
    if dictionary.contains(&term) {
        return Ok(term);
    }
    let suggestions = dictionary
        .prefix_matches(&normalize_text(raw), MAX_SUGGESTIONS)
        .into_iter()
        .map(|t| t.as_str().to_owned())
        .collect();
    Err(QueryError::UnknownTerm {
        term: term.as_str().to_owned(),
        suggestions,
    })
}

/// Ranks the articles relevant to one query term.
///
/// The term is normalized and must be a dictionary entry with at least one
/// occurrence on an arc. With `use_similar_terms` the network superposes
/// every correlated term's subgraph; otherwise it is exactly the term's own
/// subgraph with unit weights.
pub fn rank_for_term(
    graph: &TermLabeledGraph,
    matrix: &WeightedTermDocumentMatrix,
    dictionary: &TermDictionary,
    raw_term: &str,
    config: &QueryConfig,
) -> Result<QueryResult, QueryError> {
    config.validate()?;
    let term = resolve_term(dictionary, raw_term)?;
    if matrix.terms().binary_search(&term).is_err() {
        return Err(QueryError::NoCitationEvidence {
            term: term.as_str().to_owned(),
        });
    }
    let similar = if config.use_similar_terms {
        similar_terms(matrix, &term, config.delta)?
    } else {
        SimilarTermSet::single(term, config.delta)
    };
    rank_with_similar_set(graph, &similar, config)
}

/// Ranks with a caller-supplied similar-term set instead of deriving one
/// from matrix correlations.
pub fn rank_with_similar_set(
    graph: &TermLabeledGraph,
    similar: &SimilarTermSet,
    config: &QueryConfig,
) -> Result<QueryResult, QueryError> {
    config.validate()?;
    let term = similar.query_term().clone();
    let base = term_subgraph(graph, &term, true);
    let network = superpose(graph, similar, true);
    if network.arc_count() == 0 {
        return Err(QueryError::NoCitationEvidence {
            term: term.as_str().to_owned(),
        });
    }

    let mut selected: Vec<QueryAlgorithm> = config.algorithms.clone();
    selected.sort_unstable();
    selected.dedup();

    let mut rankings = BTreeMap::new();
    let mut push = |mut result: RankingResult| {
        result.entries.truncate(config.top_k);
        rankings.insert(result.algorithm, result);
    };
    for algorithm in selected {
        match algorithm {
            QueryAlgorithm::Indegree => push(indegree_rank(&network)),
            QueryAlgorithm::Hits => {
                let scores = hits(&network, &config.rank_config)?;
                push(scores.authority);
                if config.include_hubs {
                    push(scores.hub);
                }
            }
            QueryAlgorithm::Pagerank => push(pagerank(&network, &config.rank_config)?),
        }
    }

    Ok(QueryResult {
        query_term: term,
        similar_terms: similar.clone(),
        base_network_size: NetworkSize {
            nodes: base.nodes.len(),
            arcs: base.arcs.len(),
        },
        network_size: NetworkSize {
            nodes: network.node_count(),
            arcs: network.arc_count(),
        },
        rankings,
    })
}

/// Summarizes a query's network sizes, including how many nodes the
/// similar-term expansion brought in.
pub fn report_network_stats(result: &QueryResult) -> NetworkStats {
    NetworkStats {
        nodes: result.network_size.nodes,
        arcs: result.network_size.arcs,
        base_nodes: result.base_network_size.nodes,
        base_arcs: result.base_network_size.arcs,
        enrichment_nodes: result.network_size.nodes - result.base_network_size.nodes,
        similar_term_count: result.similar_terms.len(),
    }
}
