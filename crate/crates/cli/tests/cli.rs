use std::path::Path;
use std::process::{Command, Output};

use blits::objectives::CutGraph;
use blits::oracle::SetFunction;
use blits::stats::MeanEstimate;
use blits_cli::experiment::TraceFile;
use blits_cli::io::{load_edge_list, write_edge_list};
use itertools::Itertools;

fn blits(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blits")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");

    let ok = blits(&["run", "--objective", "cut", "--model", "er", "--n", "20", "--k", "4", "--out", path_str(&trace)]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stderr).contains("blits_plus"));

    let too_big = blits(&["run", "--objective", "cut", "--model", "er", "--n", "5", "--k", "6"]);
    assert_eq!(too_big.status.code(), Some(2));

    let bad_config = dir.path().join("bad.cfg");
    std::fs::write(&bad_config, "objective=cut\nthis line is wrong\n").unwrap();
    let parse = blits(&["run", "--config", path_str(&bad_config)]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains(":2"));

    let negative = dir.path().join("neg.tsv");
    std::fs::write(&negative, "0\t1\t-2\n").unwrap();
    let contract = blits(&["run", "--objective", "cut", "--input", path_str(&negative), "--k", "1"]);
    assert_eq!(contract.status.code(), Some(2));

    let missing = blits(&["plot-data", "--trace", path_str(&dir.path().join("absent.csv"))]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn failing_job_writes_partial_trace_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = blits(&[
        "run", "--objective", "cut", "--model", "er", "--n", "80", "--k", "40", "--r", "2", "--mode", "exact",
        "--algorithms", "blits,greedy", "--out", path_str(&trace),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let parsed = TraceFile::read(&trace).unwrap();
    assert_eq!(parsed.errors.len(), 1);
    assert_eq!(parsed.records.len(), 40);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.cfg");
    let trace = dir.path().join("trace.csv");
    std::fs::write(&config, "objective=cut\nmodel=er\nn=30\nk=3\nalgorithms=greedy\nexperiment_id=from_file\n").unwrap();
    let out = blits(&["run", "--config", path_str(&config), "--k", "5", "--experiment-id", "from_flag", "--out", path_str(&trace)]);
    assert_eq!(out.status.code(), Some(0));
    let parsed = TraceFile::read(&trace).unwrap();
    assert_eq!(parsed.records.len(), 5);
    assert!(parsed.records.iter().all(|r| r.experiment_id == "from_flag"));
}

#[test]
fn plot_data_for_one_run_and_for_identical_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let plot = dir.path().join("plot.csv");
    let run = blits(&["run", "--objective", "cut", "--model", "ba", "--n", "60", "--m", "3", "--k", "6", "--out", path_str(&trace)]);
    assert_eq!(run.status.code(), Some(0));
    let out = blits(&["plot-data", "--trace", path_str(&trace), "--out", path_str(&plot)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&plot).unwrap();
    assert!(text.starts_with("algorithm,adaptive_round,mean_value,stderr,runs\n"));
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[3], "0", "{line}");
        assert_eq!(fields[4], "1", "{line}");
    }

    // Two copies of the same run under different seeds have zero spread.
    let mut parsed = TraceFile::read(&trace).unwrap();
    let copies: Vec<_> = parsed.records.iter().cloned().map(|mut r| {
        r.seed += 1000;
        r
    }).collect();
    parsed.records.extend(copies);
    let doubled = dir.path().join("doubled.csv");
    parsed.write(&doubled).unwrap();
    let out = blits(&["plot-data", "--trace", path_str(&doubled)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[3], "0", "{line}");
        assert_eq!(fields[4], "2", "{line}");
    }
}

#[test]
fn random_baseline_matches_its_expectation() {
    // Expected cut of a uniform k-subset, by enumeration.
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("g.tsv");
    let gen = blits(&["generate", "--model", "er", "--n", "10", "--p", "0.5", "--weights", "uniform", "--seed", "3", "--out", path_str(&graph_path)]);
    assert_eq!(gen.status.code(), Some(0));
    let g = load_edge_list(&graph_path).unwrap().graph;
    let n = g.n();
    let k = 4;
    let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let expected = subsets.iter().map(|s| g.value(s)).sum::<f64>() / subsets.len() as f64;

    let trace = dir.path().join("trace.csv");
    let out = blits(&[
        "run", "--objective", "cut", "--input", path_str(&graph_path), "--k", "4", "--algorithms", "random",
        "--reps", "200", "--out", path_str(&trace),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let values: Vec<f64> = TraceFile::read(&trace).unwrap().records.iter().map(|r| r.value).collect();
    assert_eq!(values.len(), 200);
    let est = MeanEstimate::from_samples(&values);
    assert!((est.mean - expected).abs() <= 3.0 * est.std_err, "{} vs {expected} (se {})", est.mean, est.std_err);
}

#[test]
fn generated_edge_list_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.tsv");
    let out = blits(&["generate", "--model", "sbm", "--clusters", "3", "--size-lo", "4", "--size-hi", "6", "--seed", "1", "--out", path_str(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let loaded = load_edge_list(&path).unwrap();
    let mut buf = Vec::new();
    write_edge_list(&loaded.graph, &mut buf).unwrap();
    let again: CutGraph = blits_cli::io::read_edge_list(buf.as_slice(), Path::new("mem")).unwrap().graph;
    assert_eq!(again.edges(), loaded.graph.edges());
}
