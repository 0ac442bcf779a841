//! Ranking algorithms over weighted citation graphs: weighted in-degree,
//! hub/authority fixed points, and random-surfer scores.
//!
//! All three are deterministic: nodes and arcs are visited in sorted
//! order, so identical graphs and configs produce bit-identical scores,
//! and ties in the final ordering break by ascending article id.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::ArticleId;
use crate::graph::WeightedCitationGraph;

/// Which scoring produced a [`RankingResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankAlgorithm {
    Indegree,
    HitsAuthority,
    HitsHub,
    Pagerank,
}

impl RankAlgorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            RankAlgorithm::Indegree => "indegree",
            RankAlgorithm::HitsAuthority => "hits_authority",
            RankAlgorithm::HitsHub => "hits_hub",
            RankAlgorithm::Pagerank => "pagerank",
        }
    }
}

impl fmt::Display for RankAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Iteration controls shared by the iterative algorithms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankConfig {
    /// Random-surfer damping factor, strictly between 0 and 1.
    pub damping: f64,
    /// Upper bound on power iterations.
    pub max_iterations: usize,
    /// Convergence threshold on the L1 change between iterations.
    pub tolerance: f64,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig {
            damping: 0.85,
            max_iterations: 100,
            tolerance: 1e-9,
        }
    }
}

impl RankConfig {
    pub fn validate(&self) -> Result<(), RankingError> {
        if !(self.damping.is_finite() && self.damping > 0.0 && self.damping < 1.0) {
            return Err(RankingError::InvalidConfig(format!(
                "damping must lie strictly between 0 and 1, got {}",
                self.damping
            )));
        }
        if self.max_iterations == 0 {
            return Err(RankingError::InvalidConfig(
                "max_iterations must be at least 1".to_owned(),
            ));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(RankingError::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RankingError {
    #[error("graph has no link structure to iterate on")]
    NoLinkStructure,
    #[error("invalid rank config: {0}")]
    InvalidConfig(String),
}

/// One scored article.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub article_id: ArticleId,
    pub score: f64,
}

/// Scores for every node of the ranked graph, best first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingResult {
    pub algorithm: RankAlgorithm,
    /// Ordered by (score descending, article id ascending).
    pub entries: Vec<RankEntry>,
    pub iterations_used: usize,
    pub converged: bool,
}

/// The two score families HITS produces in one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HitsScores {
    pub authority: RankingResult,
    pub hub: RankingResult,
}

/// Sorted-index view of a weighted graph for the iteration loops.
struct IndexedGraph {
    nodes: Vec<ArticleId>,
    /// (source, target, weight) with indexes into `nodes`, arc-sorted.
    arcs: Vec<(usize, usize, f64)>,
    out_weight: Vec<f64>,
}

impl IndexedGraph {
    fn new(graph: &WeightedCitationGraph) -> Self {
        let nodes: Vec<ArticleId> = graph.nodes().cloned().collect();
        let index_of = |id: &ArticleId| {
            nodes
                .binary_search(id)
                .expect("arc endpoints are always registered as nodes")
        };
        let mut arcs = Vec::with_capacity(graph.arc_count());
        let mut out_weight = vec![0.0; nodes.len()];
        for (source, target, weight) in graph.arcs() {
            let s = index_of(source);
            arcs.push((s, index_of(target), weight));
            out_weight[s] += weight;
        }
        IndexedGraph {
            nodes,
            arcs,
            out_weight,
        }
    }
}

fn ranked_entries(nodes: &[ArticleId], scores: Vec<f64>) -> Vec<RankEntry> {
    let mut entries: Vec<RankEntry> = nodes
        .iter()
        .cloned()
        .zip(scores)
        .map(|(article_id, score)| RankEntry { article_id, score })
        .collect();
    entries.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.article_id.cmp(&b.article_id))
    });
    entries
}

fn l1_change(old: &[f64], new: &[f64]) -> f64 {
    old.iter().zip(new).map(|(a, b)| (a - b).abs()).sum()
}

fn normalize_l2(values: &mut [f64]) {
    let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for v in values.iter_mut() {
            *v /= norm;
        }
    }
}

/// Scores each article by the summed weight of its incoming arcs. Articles
/// nothing points at score 0 and still appear in the result.
pub fn indegree_rank(graph: &WeightedCitationGraph) -> RankingResult {
    let ig = IndexedGraph::new(graph);
    let mut scores = vec![0.0; ig.nodes.len()];
    for &(_, target, weight) in &ig.arcs {
        scores[target] += weight;
    }
    RankingResult {
        algorithm: RankAlgorithm::Indegree,
        entries: ranked_entries(&ig.nodes, scores),
        iterations_used: 0,
        converged: true,
    }
}

/// Hub/authority power iteration: authorities absorb the hub scores along
/// incoming arcs, hubs absorb the fresh authority scores along outgoing
/// arcs, and both vectors are renormalized to unit Euclidean length each
/// round. Stops when the combined L1 change drops below the tolerance.
pub fn hits(
    graph: &WeightedCitationGraph,
    config: &RankConfig,
) -> Result<HitsScores, RankingError> {
    config.validate()?;
    let ig = IndexedGraph::new(graph);
    if ig.arcs.is_empty() {
        return Err(RankingError::NoLinkStructure);
    }
    let n = ig.nodes.len();
    let uniform = 1.0 / (n as f64).sqrt();
    let mut authority = vec![uniform; n];
    let mut hub = vec![uniform; n];
    let mut iterations_used = config.max_iterations;
    let mut converged = false;
    for iteration in 1..=config.max_iterations {
        let mut next_authority = vec![0.0; n];
        for &(source, target, weight) in &ig.arcs {
            next_authority[target] += weight * hub[source];
        }
        normalize_l2(&mut next_authority);
        let mut next_hub = vec![0.0; n];
        for &(source, target, weight) in &ig.arcs {
            next_hub[source] += weight * next_authority[target];
        }
        normalize_l2(&mut next_hub);
        let change = l1_change(&authority, &next_authority) + l1_change(&hub, &next_hub);
        authority = next_authority;
        hub = next_hub;
        if change < config.tolerance {
            iterations_used = iteration;
            converged = true;
            break;
        }
    }
    Ok(HitsScores {
        authority: RankingResult {
            algorithm: RankAlgorithm::HitsAuthority,
            entries: ranked_entries(&ig.nodes, authority),
            iterations_used,
            converged,
        },
        hub: RankingResult {
            algorithm: RankAlgorithm::HitsHub,
            entries: ranked_entries(&ig.nodes, hub),
            iterations_used,
            converged,
        },
    })
}

/// Random-surfer scores by power iteration. Each round every article gets
/// the teleport share `(1 - d)/N`, a damped share of the scores flowing
/// along incoming arcs (each source splits its score in proportion to arc
/// weight), and an equal damped share of the mass parked on articles with
/// no outgoing arcs. Scores therefore sum to 1 every round.
pub fn pagerank(
    graph: &WeightedCitationGraph,
    config: &RankConfig,
) -> Result<RankingResult, RankingError> {
    config.validate()?;
    let ig = IndexedGraph::new(graph);
    let n = ig.nodes.len();
    if n == 0 {
        return Ok(RankingResult {
            algorithm: RankAlgorithm::Pagerank,
            entries: Vec::new(),
            iterations_used: 0,
            converged: true,
        });
    }
    let nf = n as f64;
    let damping = config.damping;
    let teleport = (1.0 - damping) / nf;
    let dangling: Vec<usize> = (0..n).filter(|&i| ig.out_weight[i] == 0.0).collect();
    let transitions: Vec<(usize, usize, f64)> = ig
        .arcs
        .iter()
        .map(|&(source, target, weight)| (source, target, weight / ig.out_weight[source]))
        .collect();

    let mut scores = vec![1.0 / nf; n];
    let mut iterations_used = config.max_iterations;
    let mut converged = false;
    for iteration in 1..=config.max_iterations {
        let dangling_mass: f64 = dangling.iter().map(|&i| scores[i]).sum();
        let mut next = vec![teleport + damping * dangling_mass / nf; n];
        for &(source, target, probability) in &transitions {
            next[target] += damping * scores[source] * probability;
        }
        let change = l1_change(&scores, &next);
        scores = next;
        if change < config.tolerance {
            iterations_used = iteration;
            converged = true;
            break;
        }
    }
    Ok(RankingResult {
        algorithm: RankAlgorithm::Pagerank,
        entries: ranked_entries(&ig.nodes, scores),
        iterations_used,
        converged,
    })
}
