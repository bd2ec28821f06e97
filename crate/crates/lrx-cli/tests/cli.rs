use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lrx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn bfs_writes_the_small_layer_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bfs");
    let r = lrx(&["bfs", "--n", "4", "--out", out.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));

    let layers = read(&out, "layers.csv");
    let mut lines = layers.lines();
    assert_eq!(lines.next(), Some("distance,layer_size"));
    let sizes: Vec<u64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(sizes.len(), 7);
    assert_eq!(sizes.iter().sum::<u64>(), 24);

    let manifest: serde_json::Value = serde_json::from_str(&read(&out, "run.json")).unwrap();
    assert_eq!(manifest["subcommand"], "bfs");
    assert_eq!(manifest["config"]["n"], 4);
    assert!(manifest["versions"]["lrx-core"].is_string());
}

#[test]
fn longest_word_length_matches_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lw");
    let r = lrx(&["longest-word", "--n", "20", "--out", out.to_str().unwrap()]);
    assert!(r.status.success());
    let v: serde_json::Value = serde_json::from_str(&read(&out, "longest_word.json")).unwrap();
    assert_eq!(v["length"], 190);
    assert_eq!(v["word"].as_str().unwrap().len(), 190);
}

#[test]
fn construct_solves_a_given_state_within_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    let r = lrx(&[
        "construct",
        "--n",
        "5",
        "--state",
        "4,3,2,1,0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(r.status.success());
    let v: serde_json::Value = serde_json::from_str(&read(&out, "construct.json")).unwrap();
    assert_eq!(v["state"], "4,3,2,1,0");
    assert_eq!(v["within_bound"], true);
    assert!(v["length"].as_u64().unwrap() <= v["bound"].as_u64().unwrap());
}

#[test]
fn bad_flags_and_bad_states_fail_with_the_logic_code() {
    let r = lrx(&["bfs", "--n", "4", "--frobnicate"]);
    assert_eq!(r.status.code(), Some(2));

    let r = lrx(&["construct", "--n", "5", "--state", "0,0,1,2,3"]);
    assert_eq!(r.status.code(), Some(2));

    let r = lrx(&["mixing", "--n", "6", "--x-trick", "--history-depth", "2"]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn oversized_spectra_exit_with_the_resource_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sp");
    let r = lrx(&["spectrum", "--n", "8", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(3));
}

#[test]
fn dp_on_a_small_graph_converges_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dp");
    let r = lrx(&["dp", "--n", "5", "--out", out.to_str().unwrap()]);
    assert!(r.status.success());
    let v: serde_json::Value = serde_json::from_str(&read(&out, "dp.json")).unwrap();
    assert_eq!(v["converged"], true);
    assert_eq!(v["max_abs_err"], 0.0);
}

#[test]
fn beam_result_reports_the_solving_word() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bm");
    let r = lrx(&[
        "beam",
        "--n",
        "6",
        "--width",
        "64",
        "--heuristic",
        "oracle",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(r.status.success());
    let v: serde_json::Value = serde_json::from_str(&read(&out, "result.json")).unwrap();
    assert_eq!(v["found"], true);
    assert_eq!(v["seed"], 12345);
    let len = v["length"].as_u64().unwrap();
    assert_eq!(v["word"].as_str().unwrap().len() as u64, len);
    assert_eq!(v["steps"].as_u64().unwrap(), len);
}
