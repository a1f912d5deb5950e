//! End-to-end runs of the `revdiam` binary: exit codes, report JSON, and
//! byte-deterministic generation.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_revdiam"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary must run")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout must be a JSON report")
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

const TRIANGLE: &str =
    r#"{"n":3,"arcs":[{"tail":0,"head":1},{"tail":1,"head":2},{"tail":2,"head":0}]}"#;

#[test]
fn solve_feasible_exits_zero_with_empty_witness() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "tri.json", TRIANGLE);
    let out = run(&["solve", "tri.json", "-d", "2", "-k", "0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["outcome"], "feasible");
    assert_eq!(report["witness"], serde_json::json!([]));
    assert_eq!(report["achieved_diameter"], 2);
    assert_eq!(report["cost"], 0);
}

#[test]
fn solve_infeasible_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "single.json", r#"{"n":2,"arcs":[{"tail":0,"head":1}]}"#);
    let out = run(&["solve", "single.json", "-d", "2", "-k", "1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["outcome"], "infeasible");
}

#[test]
fn malformed_instance_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", "{not json");
    let out = run(&["solve", "bad.json", "-d", "2", "-k", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["outcome"], "error");
}

#[test]
fn solve_rejects_small_target_diameter() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "tri.json", TRIANGLE);
    let out = run(&["solve", "tri.json", "-d", "1", "-k", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn all_algorithms_agree_on_a_cactus() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "flip.json",
        r#"{"n":4,"arcs":[{"tail":0,"head":1},{"tail":2,"head":1},{"tail":2,"head":3},{"tail":3,"head":0}]}"#,
    );
    for algo in ["auto", "brute", "cactus", "oracle"] {
        let out = run(&["solve", "flip.json", "-d", "3", "-k", "1", "--algo", algo], dir.path());
        assert_eq!(out.status.code(), Some(0), "algo {algo}");
        let report = stdout_json(&out);
        assert_eq!(report["cost"], 1, "algo {algo}");
        assert_eq!(report["witness"], serde_json::json!([1]), "algo {algo}");
    }
}

#[test]
fn oracle_cap_env_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "tri.json", TRIANGLE);
    let out = bin()
        .args(["solve", "tri.json", "-d", "2", "-k", "1", "--algo", "oracle"])
        .env("REVDIAM_ORACLE_CAP", "2")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let report = stdout_json(&out);
    assert!(report["error"].as_str().unwrap().contains("cap"));
}

#[test]
fn generate_partition_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["generate", "partition", "--values", "1,1", "--out", "part"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    for suffix in [".json", ".map.json", ".dot"] {
        assert!(dir.path().join(format!("part{suffix}")).exists(), "missing part{suffix}");
    }
    let map: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("part.map.json")).unwrap())
            .unwrap();
    assert_eq!(map["target_diameter"], 3);
    assert_eq!(map["budget"], 3);

    let out = run(&["solve", "part.json", "-d", "3", "-k", "3", "--mode", "weight"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["solve", "part.json", "-d", "3", "-k", "2", "--mode", "weight"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn generate_rejects_odd_partition_sums() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["generate", "partition", "--values", "1,2", "--out", "odd"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generation_is_byte_deterministic() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [dir_a.path(), dir_b.path()] {
        let out = run(
            &["generate", "ds", "--vertices", "3", "--edges", "0-1,0-2,1-2", "--ell", "1", "--out", "k3"],
            dir,
        );
        assert_eq!(out.status.code(), Some(0));
    }
    for suffix in [".json", ".map.json", ".dot"] {
        let a = std::fs::read(dir_a.path().join(format!("k3{suffix}"))).unwrap();
        let b = std::fs::read(dir_b.path().join(format!("k3{suffix}"))).unwrap();
        assert_eq!(a, b, "k3{suffix} differs between runs");
    }
}

#[test]
fn generated_ds_instance_solves_to_first_gadget() {
    let dir = tempfile::tempdir().unwrap();
    run(
        &["generate", "ds", "--vertices", "3", "--edges", "0-1,0-2,1-2", "--ell", "1", "--out", "k3"],
        dir.path(),
    );
    let instance: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("k3.json")).unwrap())
            .unwrap();
    assert_eq!(instance["n"], 24);

    let out = run(&["solve", "k3.json", "-d", "3", "-k", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["witness"], serde_json::json!([0]));
    assert_eq!(report["achieved_diameter"], 3);
}

#[test]
fn generate_counterexample_meta() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["generate", "counterexample", "--index", "8", "--out", "ce"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("ce.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["diameter_g"], 8);
    assert_eq!(meta["diameter_h"], 7);
    assert_eq!(meta["volume_g"], meta["volume_h"]);

    let out = run(&["generate", "counterexample", "--index", "7", "--out", "ce7"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn volume_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "tri.json", TRIANGLE);
    let out = run(&["volume", "tri.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["volume"]["num"], "3");
    assert_eq!(report["volume"]["den"], "1");

    let out = run(&["volume", "tri.json", "--sweep"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "mask,diameter,volume_num,volume_den");
    assert_eq!(lines.len(), 9);
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 4));
}

#[test]
fn verify_recomputes_independently() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "tri.json", TRIANGLE);
    write(dir.path(), "empty.json", r#"{"arc_ids":[]}"#);
    let out = run(&["verify", "tri.json", "empty.json", "-d", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["achieved_diameter"], 2);
    assert_eq!(report["cost"], 0);

    // A full-reversal witness still gives diameter 2; budget 0 fails it.
    write(dir.path(), "full.json", r#"{"arc_ids":[0,1,2]}"#);
    let out = run(&["verify", "tri.json", "full.json", "-d", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", "tri.json", "full.json", "-d", "2", "-k", "0"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    write(dir.path(), "oob.json", r#"{"arc_ids":[9]}"#);
    let out = run(&["verify", "tri.json", "oob.json", "-d", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_report_confirms_under_verify() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "flip.json",
        r#"{"n":4,"arcs":[{"tail":0,"head":1},{"tail":2,"head":1},{"tail":2,"head":3},{"tail":3,"head":0}]}"#,
    );
    let out = run(&["solve", "flip.json", "-d", "3", "-k", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let witness = stdout_json(&out)["witness"].clone();
    write(
        dir.path(),
        "w.json",
        &format!(r#"{{"arc_ids":{witness}}}"#),
    );
    let out = run(&["verify", "flip.json", "w.json", "-d", "3", "-k", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}
