use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dtriple(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dtriple"))
        .args(args)
        .env_remove("DTRIPLE_JOBS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Output lines with the timing field dropped.
fn records(path: &Path) -> Vec<Value> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| {
            let mut v: Value = serde_json::from_str(l).unwrap();
            v.as_object_mut().unwrap().remove("wall_ms");
            v
        })
        .collect()
}

const GRID: [&str; 8] = ["sweep", "--eps", "-2,2", "--A", "2..6", "--K", "1..4", "--nu-max"];

fn sweep(out: &Path, extra: &[&str]) -> Output {
    let mut args: Vec<&str> = GRID.to_vec();
    args.extend(["10", "--output", out.to_str().unwrap()]);
    args.extend(extra);
    dtriple(&args)
}

#[test]
fn family_prints_the_extension() {
    let out = dtriple(&["family", "--A", "3", "--K", "3", "--eps", "-2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["d_plus"], "1540");
    assert_eq!(v["triple"]["b"], "15");
    assert_eq!(v["triple"]["c"], "32");
    assert_eq!(v["quadruple_valid"], true);
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(dtriple(&["family", "--A", "0", "--K", "3", "--eps", "-2"]).status.code(), Some(2));
    assert_eq!(dtriple(&["family", "--A", "3", "--K", "3", "--eps", "3"]).status.code(), Some(2));
    assert_eq!(dtriple(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn verify_accepts_and_rejects() {
    let ok = dtriple(&["verify", "--elems", "3,15,32,1540", "--n", "4"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = dtriple(&["verify", "--elems", "3,15,32,1541", "--n", "4"]);
    assert_ne!(json(&ok), json(&bad));
}

#[test]
fn quintuple_survivors() {
    let out = dtriple(&["quintuple", "--delta-max", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let mut got: Vec<Vec<u64>> = serde_json::from_value(json(&out)["survivors"].clone()).unwrap();
    got.sort();
    let want = vec![
        vec![21, 8928, 9815],
        vec![35, 42456, 44929],
        vec![48, 109921, 114563],
        vec![80, 510561, 523423],
        vec![99, 968320, 988001],
    ];
    assert_eq!(got, want);
}

#[test]
fn resumed_sweep_matches_a_fresh_one() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    assert_eq!(sweep(&full, &[]).status.code(), Some(0));
    let want = records(&full);
    assert!(want.len() > 4);

    // an interrupted run: a few finished lines and a torn one
    let part = dir.path().join("part.jsonl");
    let text = fs::read_to_string(&full).unwrap();
    let mut cut: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
    cut.push_str("{\"id\":\"2:6:");
    fs::write(&part, cut).unwrap();

    let out = sweep(&part, &["--resume"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["skipped"], 3);
    assert_eq!(records(&part), want);
}

#[test]
fn job_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.jsonl");
    let two = dir.path().join("two.jsonl");
    assert_eq!(sweep(&one, &["--jobs", "1"]).status.code(), Some(0));
    assert_eq!(sweep(&two, &["--jobs", "2"]).status.code(), Some(0));
    assert_eq!(records(&one), records(&two));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.conf");
    let out = dir.path().join("out.jsonl");
    let csv = dir.path().join("summary.csv");
    fs::write(
        &cfg,
        format!("# small grid\nmode = nu\neps = -2\nA = 2..3\nK = 1..40\nnu-max = 10\noutput = {}\n", out.display()),
    )
    .unwrap();
    let res = dtriple(&["sweep", "--config", cfg.to_str().unwrap(), "--A", "3..3", "--summary-csv", csv.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let recs = records(&out);
    // K = 1 gives b = −3 for A = 3, ε = −2
    assert_eq!(recs.len(), 39);
    assert!(recs.iter().all(|r| r["id"].as_str().unwrap().starts_with("-2:3:")));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 40);

    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(dtriple(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}
