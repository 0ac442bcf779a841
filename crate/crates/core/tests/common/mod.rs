//! Shared fixtures, independent oracles, and seeded generators for the
//! integration suites. Each suite uses a subset of these helpers.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fmt::Write as _;

use citerank_core::{ArticleId, Term, TermLabeledGraph, WeightedCitationGraph};
use rand::seq::SliceRandom;
use rand::Rng;

pub const TOY: &str = include_str!("../fixtures/toy_corpus.jsonl");

pub fn id(s: &str) -> ArticleId {
    ArticleId::new(s)
}

pub fn term(s: &str) -> Term {
    Term::new(s).unwrap_or_else(|| panic!("`{s}` does not normalize to a term"))
}

/// Solves the random-surfer fixed point directly: (I − d·A)p = (1−d)/n · 1,
/// where A holds out-weight-normalized transition probabilities and
/// dangling columns spread uniformly. Gauss-Jordan elimination with partial
/// pivoting; independent of the power-iteration code under test.
pub fn pagerank_by_linear_solve(
    graph: &WeightedCitationGraph,
    damping: f64,
) -> BTreeMap<ArticleId, f64> {
    let nodes: Vec<ArticleId> = graph.nodes().cloned().collect();
    let n = nodes.len();
    assert!(n > 0, "linear solve needs at least one node");
    let nf = n as f64;
    let index: BTreeMap<&ArticleId, usize> = nodes.iter().zip(0..).collect();

    let mut out_weight = vec![0.0; n];
    for (s, _, w) in graph.arcs() {
        out_weight[index[s]] += w;
    }
    let mut a = vec![vec![0.0; n]; n];
    for (s, t, w) in graph.arcs() {
        a[index[t]][index[s]] += w / out_weight[index[s]];
    }
    for (i, &ow) in out_weight.iter().enumerate() {
        if ow == 0.0 {
            for row in a.iter_mut() {
                row[i] += 1.0 / nf;
            }
        }
    }

    // Augmented system [I − d·A | (1−d)/n].
    let mut m = vec![vec![0.0; n + 1]; n];
    for j in 0..n {
        for i in 0..n {
            m[j][i] = -damping * a[j][i];
        }
        m[j][j] += 1.0;
        m[j][n] = (1.0 - damping) / nf;
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r1, &r2| m[r1][col].abs().total_cmp(&m[r2][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        assert!(m[col][col].abs() > 1e-12, "singular transition system");
        let pivot_row = m[col].clone();
        for (row, cells) in m.iter_mut().enumerate() {
            if row != col {
                let factor = cells[col] / pivot_row[col];
                for (cell, &p) in cells.iter_mut().zip(&pivot_row).skip(col) {
                    *cell -= factor * p;
                }
            }
        }
    }
    nodes
        .into_iter()
        .enumerate()
        .map(|(i, node)| (node, m[i][n] / m[i][i]))
        .collect()
}

/// Dense hub/authority power iteration with a fixed iteration count and no
/// convergence logic; the reference for the implementation under test.
pub fn hits_by_dense_iteration(
    graph: &WeightedCitationGraph,
    iterations: usize,
) -> (BTreeMap<ArticleId, f64>, BTreeMap<ArticleId, f64>) {
    let nodes: Vec<ArticleId> = graph.nodes().cloned().collect();
    let n = nodes.len();
    let index: BTreeMap<&ArticleId, usize> = nodes.iter().zip(0..).collect();
    let mut w = vec![vec![0.0; n]; n];
    for (s, t, weight) in graph.arcs() {
        w[index[s]][index[t]] = weight;
    }

    let normalize = |v: &mut Vec<f64>| {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for x in v.iter_mut() {
                *x /= norm;
            }
        }
    };
    let mut authority = vec![1.0 / (n as f64).sqrt(); n];
    let mut hub = authority.clone();
    for _ in 0..iterations {
        let mut next_a = vec![0.0; n];
        for s in 0..n {
            for t in 0..n {
                next_a[t] += w[s][t] * hub[s];
            }
        }
        normalize(&mut next_a);
        let mut next_h = vec![0.0; n];
        for s in 0..n {
            for t in 0..n {
                next_h[s] += w[s][t] * next_a[t];
            }
        }
        normalize(&mut next_h);
        authority = next_a;
        hub = next_h;
    }
    let pack = |v: Vec<f64>| nodes.iter().cloned().zip(v).collect();
    (pack(authority), pack(hub))
}

/// Counts the distinct citers of `target` whose arc carries `focus`; the
/// brute-force definition of a term-document matrix cell.
pub fn distinct_citers_with_term(
    graph: &TermLabeledGraph,
    focus: &Term,
    target: &ArticleId,
) -> u32 {
    graph
        .arcs()
        .filter(|(_, t, labels)| *t == target && labels.contains(focus))
        .count() as u32
}

fn node_name(i: usize) -> ArticleId {
    id(&format!("n{i:03}"))
}

/// Random weighted digraph: up to `max_nodes` nodes, some of them dangling,
/// arc weights in [0.1, 5).
pub fn random_weighted_graph(rng: &mut impl Rng, max_nodes: usize) -> WeightedCitationGraph {
    let n = rng.gen_range(1..=max_nodes);
    let mut graph = WeightedCitationGraph::new();
    for i in 0..n {
        graph.insert_node(node_name(i));
    }
    for s in 0..n {
        if rng.gen_bool(0.25) {
            continue; // leave this node dangling
        }
        for t in 0..n {
            if s != t && rng.gen_bool(0.18) {
                graph.insert_arc(node_name(s), node_name(t), rng.gen_range(0.1..5.0));
            }
        }
    }
    graph
}

/// Random term-labeled digraph over a small vocabulary; some arcs carry no
/// labels at all.
pub fn random_labeled_graph(rng: &mut impl Rng) -> TermLabeledGraph {
    let n = rng.gen_range(2..=12);
    let vocab: Vec<Term> = (0..rng.gen_range(2usize..=8))
        .map(|i| term(&format!("topic {i}")))
        .collect();
    let mut graph = TermLabeledGraph::new();
    for i in 0..n {
        graph.insert_node(node_name(i));
    }
    for s in 0..n {
        for t in 0..n {
            if s != t && rng.gen_bool(0.2) {
                let k = rng.gen_range(0..=3.min(vocab.len()));
                let labels: Vec<Term> = vocab.choose_multiple(rng, k).cloned().collect();
                graph.insert_labeled_arc(node_name(s), node_name(t), labels);
            }
        }
    }
    graph
}

const KEYWORD_POOL: [&str; 10] = [
    "graph mining",
    "spectral method",
    "random walk",
    "link analysis",
    "web search",
    "data clustering",
    "matrix factorization",
    "network flow",
    "community detection",
    "label propagation",
];

fn article_line(out: &mut String, id: &str, title: &str, keywords: &[&str]) {
    let line = serde_json::json!({
        "kind": "article",
        "id": id,
        "title": title,
        "keywords": keywords,
    });
    writeln!(out, "{line}").unwrap();
}

fn citation_line(
    out: &mut String,
    source: &str,
    target: &str,
    context: &str,
    marker_offset: usize,
) {
    let line = serde_json::json!({
        "kind": "citation",
        "source": source,
        "target": target,
        "context": context,
        "marker_offset": marker_offset,
    });
    writeln!(out, "{line}").unwrap();
}

/// Builds a context sentence mentioning `mentions` before the citation
/// marker, returning the text and the marker's character offset.
fn context_with(mentions: &[&str]) -> (String, usize) {
    let mut text = String::from("Following the work on ");
    for (i, mention) in mentions.iter().enumerate() {
        if i > 0 {
            text.push_str(" and ");
        }
        text.push_str(mention);
    }
    if mentions.is_empty() {
        text.push_str("earlier systems");
    }
    text.push(' ');
    let marker = text.chars().count();
    text.push_str("[] we study the behaviour of large collections.");
    (text, marker)
}

/// Random parseable corpus: every source declared, no self-citations,
/// contexts mentioning a few pooled keywords.
pub fn random_corpus_jsonl(rng: &mut impl Rng) -> String {
    let n_articles = rng.gen_range(12..=30);
    let mut out = String::new();
    for i in 0..n_articles {
        let k = rng.gen_range(1..=3);
        let keywords: Vec<&str> = KEYWORD_POOL.choose_multiple(rng, k).copied().collect();
        article_line(
            &mut out,
            &format!("r{i:03}"),
            &format!("Report {i}"),
            &keywords,
        );
    }
    let n_citations = rng.gen_range(20..=60);
    for _ in 0..n_citations {
        let s = rng.gen_range(0..n_articles);
        let mut t = rng.gen_range(0..n_articles);
        if s == t {
            t = (t + 1) % n_articles;
        }
        let k = rng.gen_range(0..=3);
        let mentions: Vec<&str> = KEYWORD_POOL.choose_multiple(rng, k).copied().collect();
        let (context, marker) = context_with(&mentions);
        citation_line(
            &mut out,
            &format!("r{s:03}"),
            &format!("r{t:03}"),
            &context,
            marker,
        );
    }
    out
}

/// A corpus with a planted ground truth: `g0` never carries the query
/// keyword in its own record, yet 12 articles cite it with that keyword in
/// their citation contexts. A smaller analogue `m0` collects 3 such
/// citations, and background articles cite each other (and sometimes `g0`)
/// without the keyword.
pub fn planted_keyword_corpus(seed: u64) -> String {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();

    article_line(
        &mut out,
        "g0",
        "The Colossus Storage Substrate",
        &["distributed storage", "fault tolerance"],
    );
    article_line(
        &mut out,
        "m0",
        "A Cluster Scheduling Layer",
        &["cluster scheduling", "fault tolerance"],
    );

    let citers = 12;
    for i in 0..citers {
        article_line(
            &mut out,
            &format!("c{i:02}"),
            &format!("Workload Study {i}"),
            &["hadoop", "data clustering"],
        );
        let (context, marker) = context_with(&["hadoop"]);
        citation_line(&mut out, &format!("c{i:02}"), "g0", &context, marker);
        if i < 3 {
            let (context, marker) = context_with(&["hadoop", "cluster scheduling"]);
            citation_line(&mut out, &format!("c{i:02}"), "m0", &context, marker);
        }
    }

    let background = 200 - 2 - citers;
    for i in 0..background {
        let k = rng.gen_range(1..=2);
        let keywords: Vec<&str> = KEYWORD_POOL.choose_multiple(&mut rng, k).copied().collect();
        article_line(
            &mut out,
            &format!("b{i:03}"),
            &format!("Background {i}"),
            &keywords,
        );
    }
    for _ in 0..320 {
        let s = rng.gen_range(0..background);
        let mut t = rng.gen_range(0..background);
        if s == t {
            t = (t + 1) % background;
        }
        let k = rng.gen_range(0..=2);
        let mentions: Vec<&str> = KEYWORD_POOL.choose_multiple(&mut rng, k).copied().collect();
        let (context, marker) = context_with(&mentions);
        citation_line(
            &mut out,
            &format!("b{s:03}"),
            &format!("b{t:03}"),
            &context,
            marker,
        );
    }
    // Citations of g0 that never mention the planted keyword: these arcs
    // must stay outside the keyword's query network.
    for i in 0..5 {
        let (context, marker) = context_with(&["distributed storage"]);
        citation_line(&mut out, &format!("b{i:03}"), "g0", &context, marker);
    }
    out
}
