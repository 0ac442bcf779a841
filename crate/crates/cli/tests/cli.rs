//! End-to-end tests of the `citerank` binary: exit codes, output formats,
//! and round-trip determinism, exercised against the bundled toy corpus.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

const TOY_CORPUS: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../core/tests/fixtures/toy_corpus.jsonl"
);

fn citerank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_citerank"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is utf-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is utf-8")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process exits normally")
}

fn build_toy_index(dir: &TempDir) -> PathBuf {
    let index = dir.path().join("toy.idx");
    let output = citerank(&["--index", index.to_str().unwrap(), "build", TOY_CORPUS]);
    assert_eq!(
        exit_code(&output),
        0,
        "build failed: {}",
        stderr_of(&output)
    );
    index
}

#[test]
fn build_reports_corpus_shape_on_stderr() {
    let dir = TempDir::new().unwrap();
    let index = dir.path().join("toy.idx");
    let output = citerank(&["--index", index.to_str().unwrap(), "build", TOY_CORPUS]);
    assert_eq!(exit_code(&output), 0);
    let info = stderr_of(&output);
    assert!(info.contains("6 articles"), "unexpected stderr: {info}");
    assert!(index.exists());
}

#[test]
fn rebuilding_from_the_same_corpus_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let first = build_toy_index(&dir);
    let second_path = dir.path().join("again.idx");
    let output = citerank(&[
        "--index",
        second_path.to_str().unwrap(),
        "build",
        TOY_CORPUS,
    ]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(fs::read(first).unwrap(), fs::read(second_path).unwrap());
}

#[test]
fn query_without_expansion_ranks_a4_first_by_indegree() {
    let dir = TempDir::new().unwrap();
    let index = build_toy_index(&dir);
    let output = citerank(&[
        "--index",
        index.to_str().unwrap(),
        "--quiet",
        "query",
        "--term",
        "power law",
        "--no-similar",
    ]);
    assert_eq!(exit_code(&output), 0, "{}", stderr_of(&output));
    let lines: Vec<String> = stdout_of(&output).lines().map(String::from).collect();
    assert_eq!(lines[0], "# algorithm\tindegree");
    assert_eq!(lines[1], "1\ta4\tA Model of Preferential Linking\t2.000000");
}

#[test]
fn rank_is_an_alias_for_query() {
    let dir = TempDir::new().unwrap();
    let index = build_toy_index(&dir);
    let args_tail = [
        "--quiet",
        "--term",
        "power law",
        "--delta",
        "0.35",
        "--top-k",
        "10",
    ];
    let mut query_args = vec!["--index", index.to_str().unwrap(), "query"];
    query_args.extend_from_slice(&args_tail);
    let mut rank_args = vec!["--index", index.to_str().unwrap(), "rank"];
    rank_args.extend_from_slice(&args_tail);
    let via_query = citerank(&query_args);
    let via_rank = citerank(&rank_args);
    assert_eq!(exit_code(&via_query), 0);
    assert_eq!(exit_code(&via_rank), 0);
    assert_eq!(via_query.stdout, via_rank.stdout);
}

#[test]
fn query_json_exposes_the_contract_keys() {
    let dir = TempDir::new().unwrap();
    let index = build_toy_index(&dir);
    let output = citerank(&[
        "--index",
        index.to_str().unwrap(),
        "--quiet",
        "--format",
        "json",
        "query",
        "--term",
        "power law",
    ]);
    assert_eq!(exit_code(&output), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    for key in ["query_term", "similar_terms", "network_size", "rankings"] {
        assert!(value.get(key).is_some(), "missing key {key}");
    }
    let rankings = value["rankings"].as_object().unwrap();
    assert!(rankings.contains_key("indegree"));
    assert!(rankings.contains_key("hits_authority"));
    assert!(rankings.contains_key("pagerank"));
    assert_eq!(
        value["rankings"]["indegree"]["entries"][0]["article_id"],
        "a4"
    );
}

#[test]
fn repeated_queries_print_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let index = build_toy_index(&dir);
    let args = [
        "--index",
        index.to_str().unwrap(),
        "--quiet",
        "--format",
        "json",
        "query",
        "--term",
        "power law",
    ];
    let first = citerank(&args);
    let second = citerank(&args);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn unknown_term_exits_2_and_suggests_dictionary_entries() {
    let dir = TempDir::new().unwrap();
    let index = build_toy_index(&dir);
    let output = citerank(&[
        "--index",
        index.to_str().unwrap(),
        "query",
        "--term",
        "power",
    ]);
    assert_eq!(exit_code(&output), 2);
    assert!(
        stderr_of(&output).contains("power law"),
        "{}",
        stderr_of(&output)
    );

    let nonsense = citerank(&["--index", index.to_str().unwrap(), "query", "--term", "zzz"]);
    assert_eq!(exit_code(&nonsense), 2);
}

#[test]
fn algorithm_selection_controls_the_emitted_blocks() {
    let dir = TempDir::new().unwrap();
    let index = build_toy_index(&dir);
    let output = citerank(&[
        "--index",
        index.to_str().unwrap(),
        "--quiet",
        "query",
        "--term",
        "power law",
        "--algorithms",
        "pagerank",
        "--top-k",
        "2",
    ]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.starts_with("# algorithm\tpagerank\n"));
    assert!(!text.contains("indegree"));
    assert_eq!(text.lines().count(), 3, "header plus two entries: {text}");
}

#[test]
fn emit_hubs_adds_a_hub_block() {
    let dir = TempDir::new().unwrap();
    let index = build_toy_index(&dir);
    let output = citerank(&[
        "--index",
        index.to_str().unwrap(),
        "--quiet",
        "query",
        "--term",
        "power law",
        "--algorithms",
        "hits",
        "--emit-hubs",
    ]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("# algorithm\thits_authority"));
    assert!(text.contains("# algorithm\thits_hub"));
}

#[test]
fn similar_terms_reports_the_perfectly_correlated_pair() {
    let dir = TempDir::new().unwrap();
    let index = build_toy_index(&dir);
    let output = citerank(&[
        "--index",
        index.to_str().unwrap(),
        "similar-terms",
        "--term",
        "clustering coefficient",
    ]);
    assert_eq!(exit_code(&output), 0);
    let lines: Vec<String> = stdout_of(&output).lines().map(String::from).collect();
    assert_eq!(
        lines,
        vec![
            "clustering coefficient\t1.0000".to_string(),
            "small world\t1.0000".to_string(),
        ]
    );
}

#[test]
fn describe_orders_terms_by_weighted_score() {
    let dir = TempDir::new().unwrap();
    let index = build_toy_index(&dir);
    let output = citerank(&[
        "--index",
        index.to_str().unwrap(),
        "describe",
        "--article",
        "a6",
        "--top-k",
        "3",
    ]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(
        stdout_of(&output),
        "web graph\t3.5835\ndegree distribution\t1.0986\npower law\t0.6931\n"
    );
}

#[test]
fn describe_with_k_zero_prints_an_empty_table() {
    let dir = TempDir::new().unwrap();
    let index = build_toy_index(&dir);
    let output = citerank(&[
        "--index",
        index.to_str().unwrap(),
        "describe",
        "--article",
        "a6",
        "--top-k",
        "0",
    ]);
    assert_eq!(exit_code(&output), 0);
    assert!(stdout_of(&output).is_empty());
}

#[test]
fn describe_unknown_article_exits_2() {
    let dir = TempDir::new().unwrap();
    let index = build_toy_index(&dir);
    let output = citerank(&[
        "--index",
        index.to_str().unwrap(),
        "describe",
        "--article",
        "a99",
    ]);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn stats_summarizes_the_index() {
    let dir = TempDir::new().unwrap();
    let index = build_toy_index(&dir);
    let output = citerank(&["--index", index.to_str().unwrap(), "stats"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("articles\t6"));
    assert!(text.contains("citation_arcs\t6"));
    assert!(text.contains("evidenced_terms\t5"));
}

#[test]
fn empty_corpus_builds_an_empty_index_with_a_warning() {
    let dir = TempDir::new().unwrap();
    let corpus = dir.path().join("empty.jsonl");
    fs::write(&corpus, "").unwrap();
    let index = dir.path().join("empty.idx");
    let output = citerank(&[
        "--index",
        index.to_str().unwrap(),
        "build",
        corpus.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    assert!(
        stderr_of(&output).contains("warning"),
        "{}",
        stderr_of(&output)
    );

    let stats = citerank(&["--index", index.to_str().unwrap(), "stats"]);
    assert_eq!(exit_code(&stats), 0);
    assert!(stdout_of(&stats).contains("articles\t0"));
}

#[test]
fn malformed_citation_line_exits_1_naming_the_line() {
    let dir = TempDir::new().unwrap();
    let corpus = dir.path().join("bad.jsonl");
    fs::write(
        &corpus,
        "{\"kind\":\"article\",\"id\":\"x1\",\"title\":\"X\",\"keywords\":[]}\n{\"kind\":\"citation\",\"source\":\"x1\"}\n",
    )
    .unwrap();
    let index = dir.path().join("bad.idx");
    let output = citerank(&[
        "--index",
        index.to_str().unwrap(),
        "build",
        corpus.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 1);
    assert!(
        stderr_of(&output).contains("line 2"),
        "{}",
        stderr_of(&output)
    );
}

#[test]
fn missing_or_corrupt_index_exits_1() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.idx");
    let output = citerank(&["--index", missing.to_str().unwrap(), "stats"]);
    assert_eq!(exit_code(&output), 1);

    let corrupt = dir.path().join("corrupt.idx");
    fs::write(&corrupt, "not an index").unwrap();
    let output = citerank(&["--index", corrupt.to_str().unwrap(), "stats"]);
    assert_eq!(exit_code(&output), 1);
}

#[test]
fn newer_format_version_exits_3() {
    let dir = TempDir::new().unwrap();
    let index = build_toy_index(&dir);
    let text = fs::read_to_string(&index).unwrap();
    let bumped = text.replace("\"format_version\": 1", "\"format_version\": 99");
    assert_ne!(text, bumped, "version field not found in snapshot");
    let future = dir.path().join("future.idx");
    fs::write(&future, bumped).unwrap();
    let output = citerank(&["--index", future.to_str().unwrap(), "stats"]);
    assert_eq!(exit_code(&output), 3);
    assert!(
        stderr_of(&output).contains("version"),
        "{}",
        stderr_of(&output)
    );
}

#[test]
fn quiet_suppresses_informational_stderr() {
    let dir = TempDir::new().unwrap();
    let index = dir.path().join("toy.idx");
    let output = citerank(&[
        "--index",
        index.to_str().unwrap(),
        "--quiet",
        "build",
        TOY_CORPUS,
    ]);
    assert_eq!(exit_code(&output), 0);
    assert!(stderr_of(&output).is_empty(), "{}", stderr_of(&output));
}
