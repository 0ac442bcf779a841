//! Self-contained, versioned persistence of a fully built index: the
//! term-labeled graph, both matrices, the dictionary, and a digest of the
//! corpus the index came from.
//!
//! Snapshots are JSON with stable field and key ordering, so rebuilding
//! from the same corpus bytes produces the same snapshot bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analytics::{
    build_matrix, weight_matrix, TermDocumentMatrix, WeightedTermDocumentMatrix,
};
use crate::corpus::{
    parse_corpus, ArticleId, ArticleRecord, IngestConfig, IngestStats, ParseError, Term,
    TermDictionary,
};
use crate::graph::{build_graph, TermLabeledGraph};

/// Current snapshot layout version; bumped on any incompatible change.
pub const FORMAT_VERSION: u32 = 1;

/// First bytes of every snapshot, guarding against unrelated JSON files.
const MAGIC: &str = "citerank-index";

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("i/o error on snapshot: {0}")]
    Io(#[from] std::io::Error),
    #[error("snapshot format error: {0}")]
    Format(String),
    #[error("snapshot has format version {found}, this build reads version {expected}")]
    VersionMismatch { found: u32, expected: u32 },
}

/// Everything a query needs, persisted as one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSnapshot {
    magic: String,
    pub format_version: u32,
    /// SHA-256 of the exact corpus bytes the index was built from.
    pub corpus_digest: String,
    pub ingest_config: IngestConfig,
    pub ingest_stats: IngestStats,
    pub articles: BTreeMap<ArticleId, ArticleRecord>,
    pub dictionary: TermDictionary,
    pub graph: TermLabeledGraph,
    pub matrix_f: TermDocumentMatrix,
    pub matrix_n: WeightedTermDocumentMatrix,
}

/// A freshly built snapshot plus build-time diagnostics.
#[derive(Debug, Clone)]
pub struct BuildOutcome {
    pub snapshot: IndexSnapshot,
    /// Terms dropped while weighting the matrix (no occurrences at all).
    pub dropped_terms: Vec<Term>,
}

fn hex_sha256(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let mut out = String::with_capacity(hash.len() * 2);
    for byte in hash {
        write!(out, "{byte:02x}").expect("writing to a String cannot fail");
    }
    out
}

impl IndexSnapshot {
    /// Parses a corpus and derives every index artifact from it.
    pub fn build(corpus: &[u8], config: &IngestConfig) -> Result<BuildOutcome, ParseError> {
        let index = parse_corpus(corpus, config)?;
        let graph = build_graph(&index, config);
        let matrix_f = build_matrix(&graph);
        let (matrix_n, dropped_terms) = weight_matrix(&matrix_f);
        let snapshot = IndexSnapshot {
            magic: MAGIC.to_owned(),
            format_version: FORMAT_VERSION,
            corpus_digest: hex_sha256(corpus),
            ingest_config: config.clone(),
            ingest_stats: index.stats,
            articles: index.articles,
            dictionary: index.dictionary,
            graph,
            matrix_f,
            matrix_n,
        };
        Ok(BuildOutcome {
            snapshot,
            dropped_terms,
        })
    }

    /// Title of an article, if the snapshot knows it.
    pub fn title(&self, id: &ArticleId) -> Option<&str> {
        self.articles.get(id).map(|a| a.title.as_str())
    }

    /// Serializes to the stable on-disk representation.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self)
            .expect("snapshot fields are all string-keyed maps and finite numbers");
        bytes.push(b'\n');
        bytes
    }

    /// Reads a snapshot back, refusing wrong magic or version before
    /// interpreting the rest of the document.
    pub fn from_bytes(bytes: &[u8]) -> Result<IndexSnapshot, SnapshotError> {
        #[derive(Deserialize)]
        struct Header {
            magic: String,
            format_version: u32,
        }
        let header: Header = serde_json::from_slice(bytes)
            .map_err(|e| SnapshotError::Format(format!("not an index snapshot: {e}")))?;
        if header.magic != MAGIC {
            return Err(SnapshotError::Format(format!(
                "not an index snapshot (found magic `{}`)",
                header.magic
            )));
        }
        if header.format_version != FORMAT_VERSION {
            return Err(SnapshotError::VersionMismatch {
                found: header.format_version,
                expected: FORMAT_VERSION,
            });
        }
        let snapshot: IndexSnapshot =
            serde_json::from_slice(bytes).map_err(|e| SnapshotError::Format(e.to_string()))?;
        snapshot.validate()?;
        Ok(snapshot)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SnapshotError> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<IndexSnapshot, SnapshotError> {
        IndexSnapshot::from_bytes(&fs::read(path)?)
    }

    /// Structural consistency checks applied after deserialization.
    fn validate(&self) -> Result<(), SnapshotError> {
        for node in self.graph.nodes() {
            if !self.articles.contains_key(node) {
                return Err(SnapshotError::Format(format!(
                    "graph node `{node}` has no article record"
                )));
            }
        }
        if self.matrix_f.articles() != self.matrix_n.articles() {
            return Err(SnapshotError::Format(
                "plain and weighted matrices disagree on their article columns".to_owned(),
            ));
        }
        Ok(())
    }
}
