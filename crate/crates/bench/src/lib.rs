//! Deterministic workload generators for the benchmark suite: weighted
//! digraphs with citation-like skewed in-degree, and synthetic
//! line-delimited corpora.

use citerank_core::{ArticleId, WeightedCitationGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// Phrases the corpus generator scatters through titles, keyword lists,
/// and citation contexts.
pub const KEYWORDS: &[&str] = &[
    "anchor text",
    "citation network",
    "community detection",
    "distributed storage",
    "graph partitioning",
    "index compression",
    "link prediction",
    "power law",
    "query expansion",
    "random walk",
    "spectral clustering",
    "stream processing",
];

/// Article identifier for the `i`-th synthetic node.
pub fn article_id(i: usize) -> ArticleId {
    ArticleId::new(format!("n{i:05}"))
}

/// A weighted digraph with `nodes` vertices and up to `arcs` random arcs.
/// Targets are skewed toward low indices so in-degree is distributed like
/// a citation network; weights lie in [0.2, 3).
pub fn synthetic_weighted_graph(seed: u64, nodes: usize, arcs: usize) -> WeightedCitationGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graph = WeightedCitationGraph::new();
    for i in 0..nodes {
        graph.insert_node(article_id(i));
    }
    for _ in 0..arcs {
        let source = rng.gen_range(0..nodes);
        let target = rng.gen_range(0..nodes).min(rng.gen_range(0..nodes));
        if source == target {
            continue;
        }
        graph.insert_arc(
            article_id(source),
            article_id(target),
            rng.gen_range(0.2..3.0),
        );
    }
    graph
}

/// A synthetic corpus: `articles` article records followed by `citations`
/// citation records whose contexts mention sampled keywords near the
/// marker. Output is one JSON record per line.
pub fn synthetic_corpus(seed: u64, articles: usize, citations: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::with_capacity(articles + citations);
    for i in 0..articles {
        let picks = rng.gen_range(1..=3);
        let keywords: Vec<&str> = KEYWORDS.choose_multiple(&mut rng, picks).copied().collect();
        lines.push(
            json!({
                "kind": "article",
                "id": article_id(i).as_str(),
                "title": format!("Synthetic Study {i}"),
                "keywords": keywords,
            })
            .to_string(),
        );
    }
    for _ in 0..citations {
        let source = rng.gen_range(0..articles);
        let mut target = rng.gen_range(0..articles).min(rng.gen_range(0..articles));
        if target == source {
            target = (target + 1) % articles;
        }
        let picks = rng.gen_range(1..=3);
        let mentions: Vec<&str> = KEYWORDS.choose_multiple(&mut rng, picks).copied().collect();
        let prefix = format!(
            "this line of work on {} was first explored in ",
            mentions.join(" and ")
        );
        let marker_offset = prefix.chars().count();
        let context = format!("{prefix}[7], which remains the standard reference");
        lines.push(
            json!({
                "kind": "citation",
                "source": article_id(source).as_str(),
                "target": article_id(target).as_str(),
                "context": context,
                "marker_offset": marker_offset,
            })
            .to_string(),
        );
    }
    let mut corpus = lines.join("\n");
    corpus.push('\n');
    corpus
}
