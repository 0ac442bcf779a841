//! Command-line front end: build a citation index from a line-delimited
//! corpus and query it for article rankings, correlated terms, descriptive
//! terms, and summary statistics.
//!
//! Exit codes: 0 success, 1 input or parse failure, 2 term or article not
//! found, 3 index format-version mismatch.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use citerank_core::{
    descriptive_terms, rank_for_term, report_network_stats, similar_terms, AnalyticsError,
    ArticleId, IndexSnapshot, IngestConfig, QueryAlgorithm, QueryConfig, QueryError, QueryResult,
    RankConfig, SnapshotError, Term,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "citerank",
    version,
    about = "Rank linked documents by what their citers say about them"
)]
struct Cli {
    /// Index snapshot path: written by `build`, read by every other command.
    #[arg(long, global = true, value_name = "PATH")]
    index: Option<PathBuf>,
    /// Output format for data printed to standard output.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Tsv)]
    format: OutputFormat,
    /// Suppress informational messages on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest a corpus file and write the index snapshot.
    Build(BuildArgs),
    /// Rank articles for a query term.
    #[command(visible_alias = "rank")]
    Query(QueryArgs),
    /// List terms statistically correlated with a query term.
    SimilarTerms(SimilarArgs),
    /// List the terms that best describe one article.
    Describe(DescribeArgs),
    /// Print summary statistics of an index snapshot.
    Stats,
}

#[derive(Args)]
struct BuildArgs {
    /// Corpus file: UTF-8, one JSON record per line.
    corpus: PathBuf,
    /// Total context-window width, in characters, around a citation marker.
    #[arg(long, value_name = "N")]
    window_chars: Option<usize>,
    /// Longest keyword phrase, in words, admitted to the term dictionary.
    #[arg(long, value_name = "N")]
    term_max_words: Option<usize>,
    /// Report only the longest dictionary match at each window position.
    #[arg(long)]
    longest_match_only: bool,
}

#[derive(Args)]
struct QueryArgs {
    /// Query term.
    #[arg(long, value_name = "TERM")]
    term: String,
    /// Similarity threshold for expanding the query term, in (0, 1).
    #[arg(long, default_value_t = 0.35)]
    delta: f64,
    /// Rank on the single-term network, without expansion.
    #[arg(long)]
    no_similar: bool,
    /// Keep at most this many entries per ranking.
    #[arg(long, default_value_t = 10, value_name = "N")]
    top_k: usize,
    /// Comma-separated subset of: indegree, hits, pagerank.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    algorithms: Option<Vec<AlgorithmArg>>,
    /// Random-surfer damping factor, in (0, 1).
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    /// Convergence threshold on the L1 change between iterations.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Upper bound on power iterations.
    #[arg(long, default_value_t = 100, value_name = "N")]
    max_iters: usize,
    /// Also report hub scores when hits runs.
    #[arg(long)]
    emit_hubs: bool,
}

#[derive(Args)]
struct SimilarArgs {
    /// Query term.
    #[arg(long, value_name = "TERM")]
    term: String,
    /// Correlation threshold for set membership, in (0, 1).
    #[arg(long, default_value_t = 0.35)]
    delta: f64,
}

#[derive(Args)]
struct DescribeArgs {
    /// Article identifier.
    #[arg(long, value_name = "ID")]
    article: String,
    /// Keep at most this many terms.
    #[arg(long, default_value_t = 10, value_name = "N")]
    top_k: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    Indegree,
    Hits,
    Pagerank,
}

impl From<AlgorithmArg> for QueryAlgorithm {
    fn from(arg: AlgorithmArg) -> Self {
        match arg {
            AlgorithmArg::Indegree => QueryAlgorithm::Indegree,
            AlgorithmArg::Hits => QueryAlgorithm::Hits,
            AlgorithmArg::Pagerank => QueryAlgorithm::Pagerank,
        }
    }
}

/// Failure classes, one per documented exit code.
#[derive(Debug)]
enum CliError {
    /// Unreadable input, malformed corpus or snapshot, invalid config.
    Input(String),
    /// Term or article absent from the index.
    NotFound(String),
    /// Snapshot written by an incompatible format version.
    Version(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::NotFound(_) => 2,
            CliError::Version(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::NotFound(m) | CliError::Version(m) => m,
        }
    }
}

impl From<SnapshotError> for CliError {
    fn from(err: SnapshotError) -> Self {
        match err {
            SnapshotError::VersionMismatch { .. } => CliError::Version(err.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<QueryError> for CliError {
    fn from(err: QueryError) -> Self {
        match err {
            QueryError::UnknownTerm { .. } | QueryError::NoCitationEvidence { .. } => {
                CliError::NotFound(err.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let index = cli
        .index
        .as_deref()
        .ok_or_else(|| CliError::Input("--index <PATH> is required".to_string()))?;
    match &cli.command {
        Command::Build(args) => cmd_build(index, args, cli.quiet),
        Command::Query(args) => cmd_query(index, args, cli.format, cli.quiet),
        Command::SimilarTerms(args) => cmd_similar_terms(index, args, cli.format),
        Command::Describe(args) => cmd_describe(index, args, cli.format),
        Command::Stats => cmd_stats(index, cli.format),
    }
}

fn cmd_build(index: &Path, args: &BuildArgs, quiet: bool) -> Result<(), CliError> {
    let mut config = IngestConfig::default();
    if let Some(width) = args.window_chars {
        config.window_chars = width;
    }
    if let Some(words) = args.term_max_words {
        config.term_max_words = words;
    }
    if args.longest_match_only {
        config.longest_match_only = true;
    }

    let corpus = fs::read(&args.corpus).map_err(|err| {
        CliError::Input(format!(
            "cannot read corpus {}: {err}",
            args.corpus.display()
        ))
    })?;
    let outcome =
        IndexSnapshot::build(&corpus, &config).map_err(|err| CliError::Input(err.to_string()))?;
    let snapshot = outcome.snapshot;
    snapshot.save(index)?;

    if snapshot.articles.is_empty() {
        eprintln!(
            "warning: corpus {} contains no records; wrote an empty index",
            args.corpus.display()
        );
    }
    if !quiet {
        eprintln!(
            "indexed {} articles ({} stubs), {} citation arcs, {} dictionary terms -> {}",
            snapshot.articles.len(),
            snapshot.ingest_stats.stub_articles,
            snapshot.graph.arc_count(),
            snapshot.dictionary.len(),
            index.display()
        );
        if !outcome.dropped_terms.is_empty() {
            eprintln!(
                "note: {} dictionary terms never occur in citation contexts",
                outcome.dropped_terms.len()
            );
        }
    }
    Ok(())
}

fn cmd_query(
    index: &Path,
    args: &QueryArgs,
    format: OutputFormat,
    quiet: bool,
) -> Result<(), CliError> {
    let snapshot = IndexSnapshot::load(index)?;
    let algorithms: Vec<QueryAlgorithm> = match &args.algorithms {
        Some(list) => list.iter().copied().map(Into::into).collect(),
        None => QueryConfig::default().algorithms,
    };
    let config = QueryConfig {
        delta: args.delta,
        use_similar_terms: !args.no_similar,
        include_hubs: args.emit_hubs,
        top_k: args.top_k,
        algorithms,
        rank_config: RankConfig {
            damping: args.damping,
            max_iterations: args.max_iters,
            tolerance: args.tolerance,
        },
    };
    let result = rank_for_term(
        &snapshot.graph,
        &snapshot.matrix_n,
        &snapshot.dictionary,
        &args.term,
        &config,
    )?;
    if !quiet {
        let stats = report_network_stats(&result);
        eprintln!(
            "network: {} nodes, {} arcs; {} similar terms added {} nodes over the single-term subgraph",
            stats.nodes, stats.arcs, stats.similar_term_count, stats.enrichment_nodes
        );
    }
    let rendered = match format {
        OutputFormat::Tsv => render_rankings_tsv(&snapshot, &result),
        OutputFormat::Json => render_json(&result),
    };
    emit(&rendered)
}

fn render_rankings_tsv(snapshot: &IndexSnapshot, result: &QueryResult) -> String {
    let mut out = String::new();
    for (algorithm, ranking) in &result.rankings {
        writeln!(out, "# algorithm\t{algorithm}").expect("writes to String cannot fail");
        for (position, entry) in ranking.entries.iter().enumerate() {
            let title = snapshot.title(&entry.article_id).unwrap_or("");
            writeln!(
                out,
                "{}\t{}\t{}\t{:.6}",
                position + 1,
                entry.article_id,
                title,
                entry.score
            )
            .expect("writes to String cannot fail");
        }
    }
    out
}

fn render_json<T: serde::Serialize>(value: &T) -> String {
    let mut rendered =
        serde_json::to_string_pretty(value).expect("index artifacts always serialize to JSON");
    rendered.push('\n');
    rendered
}

/// Write a command's data to standard output in one call. A broken pipe
/// (consumer stopped reading) is a normal way for output to end, not an
/// error.
fn emit(data: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match out.write_all(data.as_bytes()).and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        Err(err) if err.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(err) => Err(CliError::Input(format!(
            "cannot write to standard output: {err}"
        ))),
    }
}

fn cmd_similar_terms(
    index: &Path,
    args: &SimilarArgs,
    format: OutputFormat,
) -> Result<(), CliError> {
    let snapshot = IndexSnapshot::load(index)?;
    let term = Term::new(&args.term).ok_or_else(|| {
        CliError::NotFound(format!("term `{}` is empty after normalization", args.term))
    })?;
    let set = similar_terms(&snapshot.matrix_n, &term, args.delta).map_err(|err| match err {
        AnalyticsError::UnknownTerm(unknown) => {
            let mut message = format!("term `{unknown}` has no citation evidence in this index");
            let suggestions = snapshot.dictionary.prefix_matches(unknown.as_str(), 5);
            if !suggestions.is_empty() {
                let rendered: Vec<&str> = suggestions.iter().map(Term::as_str).collect();
                message.push_str(&format!(
                    "; close dictionary entries: {}",
                    rendered.join(", ")
                ));
            }
            CliError::NotFound(message)
        }
        other => CliError::Input(other.to_string()),
    })?;
    let rendered = match format {
        OutputFormat::Tsv => {
            let mut out = String::new();
            for (member, score) in set.ranked() {
                writeln!(out, "{member}\t{score:.4}").expect("writes to String cannot fail");
            }
            out
        }
        OutputFormat::Json => render_json(&set),
    };
    emit(&rendered)
}

fn cmd_describe(index: &Path, args: &DescribeArgs, format: OutputFormat) -> Result<(), CliError> {
    let snapshot = IndexSnapshot::load(index)?;
    let article = ArticleId::new(args.article.clone());
    if !snapshot.articles.contains_key(&article) {
        return Err(CliError::NotFound(format!(
            "article `{article}` is not in the index"
        )));
    }
    let rows = match descriptive_terms(&snapshot.matrix_n, &article, args.top_k) {
        Ok(rows) => rows,
        // Declared but never cited: no column in the matrix, nothing
        // describes it.
        Err(AnalyticsError::UnknownArticle(_)) => Vec::new(),
        Err(other) => return Err(CliError::Input(other.to_string())),
    };
    let rendered = match format {
        OutputFormat::Tsv => {
            let mut out = String::new();
            for (term, score) in &rows {
                writeln!(out, "{term}\t{score:.4}").expect("writes to String cannot fail");
            }
            out
        }
        OutputFormat::Json => render_json(&rows),
    };
    emit(&rendered)
}

fn cmd_stats(index: &Path, format: OutputFormat) -> Result<(), CliError> {
    let snapshot = IndexSnapshot::load(index)?;
    let stub_titles = snapshot.ingest_stats.stub_articles;
    let rows: Vec<(&str, String)> = vec![
        ("format_version", snapshot.format_version.to_string()),
        ("corpus_digest", snapshot.corpus_digest.clone()),
        ("articles", snapshot.articles.len().to_string()),
        ("stub_articles", stub_titles.to_string()),
        ("graph_nodes", snapshot.graph.node_count().to_string()),
        ("citation_arcs", snapshot.graph.arc_count().to_string()),
        ("dictionary_terms", snapshot.dictionary.len().to_string()),
        (
            "evidenced_terms",
            snapshot.matrix_n.terms().len().to_string(),
        ),
        (
            "self_citations_rejected",
            snapshot.ingest_stats.self_citations_rejected.to_string(),
        ),
    ];
    let rendered = match format {
        OutputFormat::Tsv => {
            let mut out = String::new();
            for (key, value) in &rows {
                writeln!(out, "{key}\t{value}").expect("writes to String cannot fail");
            }
            out
        }
        OutputFormat::Json => {
            let object: serde_json::Map<String, serde_json::Value> = rows
                .into_iter()
                .map(|(key, value)| (key.to_string(), serde_json::Value::String(value)))
                .collect();
            render_json(&object)
        }
    };
    emit(&rendered)
}
