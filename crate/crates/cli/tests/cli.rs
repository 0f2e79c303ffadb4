use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pprloc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pprloc"))
        .args(args)
        .current_dir(dir)
        .env("PPR_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn manifest(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&pprloc(dir.path(), &["no-such-command"])), 1);
    assert_eq!(code(&pprloc(dir.path(), &["solve", "--alpha", "0.5"])), 1);
    assert_eq!(code(&pprloc(dir.path(), &["gen-degseq", "--n", "10"])), 1);
    assert_eq!(code(&pprloc(dir.path(), &["bound", "--d", "10", "--p", "1", "--eps-grid", "1e-3,1e-2"])), 1);
    assert_eq!(code(&pprloc(dir.path(), &["--help"])), 0);
    assert_eq!(code(&pprloc(dir.path(), &["--version"])), 0);
}

#[test]
fn runtime_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = pprloc(dir.path(), &["solve", "--graph", "missing.txt", "--alpha", "0.5", "--eps", "1e-3"]);
    assert_eq!(code(&o), 2);
    fs::write(dir.path().join("bad.pprg"), b"PPRG0garbage").unwrap();
    let o = pprloc(dir.path(), &["curve", "--graph", "bad.pprg", "--alpha", "0.5"]);
    assert_eq!(code(&o), 2);
    fs::write(dir.path().join("bad.txt"), "1 2\n3 x\n").unwrap();
    let o = pprloc(dir.path(), &["ingest", "--input", "bad.txt"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn ingest_round_trips_through_cache() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("e.txt"), "# comment\n10 20\n20 30\n30 10\n10 10\n10 20\n40 50\n").unwrap();
    let o = pprloc(d, &["ingest", "--input", "e.txt", "--lcc", "--out", "g.pprg"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let stats: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(stats["nodes"], 3);
    assert_eq!(stats["edges"], 3);
    assert_eq!(stats["self_loops"], 1);
    assert_eq!(stats["duplicates"], 1);
    assert_eq!(&fs::read(d.join("g.pprg")).unwrap()[..5], b"PPRG1");

    let m = manifest(&d.join("g.pprg.manifest.json"));
    assert_eq!(m["subcommand"], "ingest");
    let hash = m["input_hashes"]["e.txt"].as_str().unwrap();
    assert_eq!(hash.len(), 64);

    // The cache stores compact ids; an edge list keeps the input ids.
    let o = pprloc(d, &["solve", "--graph", "g.pprg", "--alpha", "0.5", "--eps", "1e-6", "--seed-node", "1"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["seed_node"], 1);
    assert_eq!(r["converged"], true);
    assert_eq!(r["nnz_solution"], 3);

    assert_eq!(code(&pprloc(d, &["ingest", "--input", "e.txt", "--lcc", "--out", "g.txt"])), 0);
    let o = pprloc(d, &["solve", "--graph", "g.txt", "--alpha", "0.5", "--eps", "1e-6", "--seed-node", "20"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["seed_node"], 20);

    let o = pprloc(d, &["solve", "--graph", "g.txt", "--alpha", "0.5", "--eps", "1e-6", "--seed-node", "50"]);
    assert_eq!(code(&o), 1);
}

/// Everything except the manifest timestamp is reproducible.
#[test]
fn generation_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = |tag: &str| {
        let seq = format!("s{tag}.txt");
        let g = format!("g{tag}.txt");
        let c = format!("c{tag}.csv");
        assert_eq!(code(&pprloc(d, &["gen-degseq", "--n", "500", "--p", "0.7", "--out", &seq])), 0);
        let o = pprloc(d, &["gen-graph", "--degseq", &seq, "--seed", "9", "--out", &g]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let o = pprloc(d, &["curve", "--graph", &g, "--alpha", "0.85", "--eps-grid", "1e-1,1e-2,1e-3,1e-4", "--out", &c]);
        assert_eq!(code(&o), 0);
        (
            fs::read(d.join(&seq)).unwrap(),
            fs::read(d.join(&g)).unwrap(),
            fs::read(d.join(&c)).unwrap(),
            manifest(&d.join(format!("{g}.manifest.json"))),
        )
    };
    let a = run("a");
    let b = run("b");
    assert_eq!(a.0, b.0);
    assert_eq!(a.1, b.1);
    assert_eq!(a.2, b.2);
    assert_eq!(a.3["seeds"], b.3["seeds"]);
    assert_eq!(a.3["seeds"]["generator"], 9);
    assert_eq!(a.3["input_hashes"]["sa.txt"], b.3["input_hashes"]["sb.txt"]);
    let csv = String::from_utf8(a.2).unwrap();
    assert!(csv.starts_with("inv_eps,min_nnz\n10,"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn bound_and_bipartite_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = pprloc(d, &["bound", "--d", "100", "--delta", "2", "--p", "0.5", "--alpha", "0.5", "--eps", "1e-2", "--n", "1000000000"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "0.5");
    let undirected: u64 = row[7].parse().unwrap();
    assert!(undirected < 1_000_000_000);

    let o = pprloc(d, &["bipartite", "--n", "100", "--k", "50", "--alpha", "0.5", "--eps", "0.1", "--norm", "l1"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["norms"][0]["min_nnz"], 70);
    assert_eq!(r["norms"][0]["constructive_nnz"], 71);

    let o = pprloc(d, &["bipartite", "--table", "--sizes", "64,128,256,512", "--out", "t.csv"]);
    assert_eq!(code(&o), 0);
    let t = fs::read_to_string(d.join("t.csv")).unwrap();
    assert_eq!(t.lines().count(), 13);
    assert!(t.contains("dense,l1,No") && t.contains("dense,deg-l1,Yes"));
}

#[test]
fn pipeline_writes_curves_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = pprloc(
        d,
        &["pipeline", "figure4", "--n", "2000", "--p", "0.8", "--delta", "3", "--alpha", "0.25,0.85", "--eps-grid", "1e-1,1e-2,1e-3", "--out", "run"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let curve = fs::read_to_string(d.join("run/curve.csv")).unwrap();
    assert_eq!(curve.lines().count(), 7);
    assert!(curve.lines().nth(1).unwrap().starts_with("0.25,10,"));
    let bound = fs::read_to_string(d.join("run/bound.csv")).unwrap();
    assert_eq!(bound.lines().count(), 7);
    let m = manifest(&d.join("run/manifest.json"));
    assert_eq!(m["subcommand"], "pipeline");
    assert_eq!(m["outputs"].as_array().unwrap().len(), 4);
}

#[test]
fn pipeline_aborts_on_poor_connectivity() {
    let dir = tempfile::tempdir().unwrap();
    let o = pprloc(
        dir.path(),
        &["pipeline", "figure4", "--n", "3000", "--p", "0.5", "--delta", "1", "--generator", "chung-lu", "--out", "run"],
    );
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("largest component"));
}
