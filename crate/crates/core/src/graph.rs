//! Citation graphs: term-labeled arcs, per-term subgraphs, and the
//! similarity-weighted overlay that queries are ranked on.
//!
//! Arcs run from the citing article to the cited one. The full graph keeps
//! every citing pair, labeled with the set of terms identified in the
//! citation contexts between the two articles; a pair whose contexts match
//! no dictionary term keeps an empty label set. Per-term views and the
//! weighted overlay are derived from that one structure.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::analytics::SimilarTermSet;
use crate::corpus::{extract_window, identify_terms, ArticleId, CorpusIndex, IngestConfig, Term};

/// Directed citation graph whose arcs carry term labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermLabeledGraph {
    nodes: BTreeSet<ArticleId>,
    /// source → target → terms seen in the citation contexts of the pair.
    arcs: BTreeMap<ArticleId, BTreeMap<ArticleId, BTreeSet<Term>>>,
}

impl TermLabeledGraph {
    pub fn new() -> Self {
        TermLabeledGraph::default()
    }

    pub fn insert_node(&mut self, id: ArticleId) {
        self.nodes.insert(id);
    }

    /// Adds an arc, unioning `labels` into any labels the pair already
    /// carries, and registers both endpoints.
    ///
    /// # Panics
    /// On self-loops, which this representation forbids.
    pub fn insert_labeled_arc(
        &mut self,
        source: ArticleId,
        target: ArticleId,
        labels: impl IntoIterator<Item = Term>,
    ) {
        assert!(source != target, "self-loop on `{source}`");
        self.nodes.insert(source.clone());
        self.nodes.insert(target.clone());
        self.arcs
            .entry(source)
            .or_default()
            .entry(target)
            .or_default()
            .extend(labels);
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.values().map(BTreeMap::len).sum()
    }

    pub fn contains_node(&self, id: &ArticleId) -> bool {
        self.nodes.contains(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &ArticleId> {
        self.nodes.iter()
    }

    /// Arcs in (source, target) order with their label sets.
    pub fn arcs(&self) -> impl Iterator<Item = (&ArticleId, &ArticleId, &BTreeSet<Term>)> {
        self.arcs.iter().flat_map(|(source, targets)| {
            targets
                .iter()
                .map(move |(target, labels)| (source, target, labels))
        })
    }

    /// Label set of one arc, if the arc exists.
    pub fn labels(&self, source: &ArticleId, target: &ArticleId) -> Option<&BTreeSet<Term>> {
        self.arcs
            .get(source)
            .and_then(|targets| targets.get(target))
    }
}

/// The arcs of the full graph labeled with one focal term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermSubgraph {
    pub term: Term,
    pub nodes: BTreeSet<ArticleId>,
    pub arcs: BTreeSet<(ArticleId, ArticleId)>,
}

/// Citation graph with positive arc weights, ready for ranking.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WeightedCitationGraph {
    nodes: BTreeSet<ArticleId>,
    arcs: BTreeMap<ArticleId, BTreeMap<ArticleId, f64>>,
}

impl WeightedCitationGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_node(&mut self, id: ArticleId) {
        self.nodes.insert(id);
    }

    /// Adds an arc and registers both endpoints.
    ///
    /// # Panics
    /// On self-loops and on weights that are not finite and positive; both
    /// are programming errors for this representation.
    pub fn insert_arc(&mut self, source: ArticleId, target: ArticleId, weight: f64) {
        assert!(source != target, "self-loop on `{source}`");
        assert!(
            weight.is_finite() && weight > 0.0,
            "arc weight must be finite and positive, got {weight}"
        );
        self.nodes.insert(source.clone());
        self.nodes.insert(target.clone());
        self.arcs.entry(source).or_default().insert(target, weight);
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.values().map(BTreeMap::len).sum()
    }

    pub fn contains_node(&self, id: &ArticleId) -> bool {
        self.nodes.contains(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &ArticleId> {
        self.nodes.iter()
    }

    /// Arcs in (source, target) order.
    pub fn arcs(&self) -> impl Iterator<Item = (&ArticleId, &ArticleId, f64)> {
        self.arcs.iter().flat_map(|(source, targets)| {
            targets
                .iter()
                .map(move |(target, weight)| (source, target, *weight))
        })
    }

    pub fn weight(&self, source: &ArticleId, target: &ArticleId) -> Option<f64> {
        self.arcs
            .get(source)
            .and_then(|targets| targets.get(target))
            .copied()
    }
}

/// Builds the term-labeled graph of a parsed corpus: one node per article,
/// one arc per citing pair, labels unioned over every citation record of
/// that pair.
pub fn build_graph(index: &CorpusIndex, config: &IngestConfig) -> TermLabeledGraph {
    let mut graph = TermLabeledGraph {
        nodes: index.articles.keys().cloned().collect(),
        arcs: BTreeMap::new(),
    };
    for record in &index.citations {
        let window = extract_window(&record.context, record.marker_offset, config.window_chars)
            .expect("marker offsets are validated at parse time");
        let terms = identify_terms(window, &index.dictionary, config);
        graph.insert_labeled_arc(record.source.clone(), record.target.clone(), terms);
    }
    graph
}

/// Restricts the graph to arcs labeled with `term`. With `reduce`, only
/// the endpoints of those arcs remain as nodes; otherwise every node of
/// the full graph is kept.
pub fn term_subgraph(graph: &TermLabeledGraph, term: &Term, reduce: bool) -> TermSubgraph {
    let mut arcs = BTreeSet::new();
    for (source, target, labels) in graph.arcs() {
        if labels.contains(term) {
            arcs.insert((source.clone(), target.clone()));
        }
    }
    let nodes = if reduce {
        arcs.iter()
            .flat_map(|(source, target)| [source.clone(), target.clone()])
            .collect()
    } else {
        graph.nodes.clone()
    };
    TermSubgraph {
        term: term.clone(),
        nodes,
        arcs,
    }
}

/// Every term that labels at least one arc.
pub fn union_term_sets(graph: &TermLabeledGraph) -> BTreeSet<Term> {
    graph
        .arcs()
        .flat_map(|(_, _, labels)| labels.iter().cloned())
        .collect()
}

/// Overlays the subgraphs of every term in `similar` into one weighted
/// graph: an arc is kept when any of its labels is in the set, and its
/// weight is the sum of the scores of the labels that are.
///
/// With `reduce`, only arc endpoints appear as nodes; otherwise all nodes
/// of the full graph are kept.
pub fn superpose(
    graph: &TermLabeledGraph,
    similar: &SimilarTermSet,
    reduce: bool,
) -> WeightedCitationGraph {
    let mut out = WeightedCitationGraph::new();
    for (source, target, labels) in graph.arcs() {
        let mut weight = 0.0;
        let mut matched = false;
        // Labels iterate in lexicographic order, which fixes the summation
        // order and keeps weights reproducible run to run.
        for term in labels {
            if let Some(score) = similar.score(term) {
                weight += score;
                matched = true;
            }
        }
        if matched {
            out.insert_arc(source.clone(), target.clone(), weight);
        }
    }
    if !reduce {
        for node in &graph.nodes {
            out.insert_node(node.clone());
        }
    }
    out
}
