//! Context-sensitive ranking of linked document corpora.
//!
//! The crate ingests a line-delimited corpus of articles and citation
//! contexts, builds a citation graph whose arcs are labeled with the terms
//! found near each citation marker, derives term–document statistics from
//! those labels, widens a query term with statistically correlated terms,
//! overlays the per-term subgraphs into one weighted network, and ranks the
//! articles in that network.
//!
//! Pipeline: [`corpus::parse_corpus`] → [`graph::build_graph`] →
//! [`analytics::build_matrix`] → [`analytics::weight_matrix`] →
//! [`query::rank_for_term`]. [`snapshot::IndexSnapshot`] bundles the
//! prepared artifacts into a single deterministic on-disk file.

pub mod analytics;
pub mod corpus;
pub mod graph;
pub mod query;
pub mod ranking;
pub mod snapshot;

pub use analytics::{
    build_matrix, descriptive_terms, idf, pearson, similar_terms, weight_matrix, AnalyticsError,
    SimilarTermSet, TermDocumentMatrix, WeightedTermDocumentMatrix,
};
pub use corpus::{
    build_term_dictionary, extract_window, identify_terms, normalize_text, parse_corpus, ArticleId,
    ArticleRecord, CitationRecord, CorpusIndex, IngestConfig, IngestStats, ParseError, Term,
    TermDictionary, WindowError,
};
pub use graph::{
    build_graph, superpose, term_subgraph, union_term_sets, TermLabeledGraph, TermSubgraph,
    WeightedCitationGraph,
};
pub use query::{
    rank_for_term, rank_with_similar_set, report_network_stats, NetworkSize, NetworkStats,
    QueryAlgorithm, QueryConfig, QueryError, QueryResult,
};
pub use ranking::{
    hits, indegree_rank, pagerank, HitsScores, RankAlgorithm, RankConfig, RankEntry, RankingError,
    RankingResult,
};
pub use snapshot::{BuildOutcome, IndexSnapshot, SnapshotError, FORMAT_VERSION};
