use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flipspine")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn all_checks_pass(r: &Value) -> bool {
    r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true)
}

#[test]
fn euclid_reports() {
    let r = report(&["euclid", "34", "13"]);
    assert_eq!(r["outputs"]["E"], 8);
    assert_eq!(r["outputs"]["continued_fraction"], serde_json::json!([2, 1, 1, 1, 1, 2]));
    assert_eq!(r["outputs"]["monodromy_r"], 21);
    assert!(all_checks_pass(&r));
    assert_eq!(report(&["euclid", "5", "1"])["outputs"]["E"], 5);
    let r = report(&["euclid", "6", "4"]);
    assert_eq!((r["outputs"]["E"].clone(), r["outputs"]["gcd"].clone()), (3.into(), 2.into()));
    for key in ["command", "inputs", "outputs", "checks", "timing_seconds"] {
        assert!(r.get(key).is_some(), "{key}");
    }
}

#[test]
fn euclid_rejects_zero_pair() {
    let out = run(&["euclid", "0", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn farey_counts() {
    let r = report(&["farey", "34", "13"]);
    assert_eq!(r["outputs"]["crossings_tree_walk"], 8);
    assert_eq!(r["outputs"]["crossings_geodesic"], 8);
    assert!(all_checks_pass(&r));
}

#[test]
fn distance_exhaustive() {
    let r = report(&["distance", "7", "2", "--exhaustive"]);
    assert_eq!(r["outputs"]["min_distance"], 2);
    assert_eq!(report(&["distance", "4", "1", "--exhaustive"])["outputs"]["min_distance"], 1);
    let r = report(&["distance", "12", "5", "--exhaustive"]);
    assert_eq!(r["outputs"]["min_distance"], r["outputs"]["expected"]);
    assert!(all_checks_pass(&r));
}

#[test]
fn distance_cap_guidance() {
    let out = Command::new(env!("CARGO_BIN_EXE_flipspine"))
        .args(["distance", "20", "3", "--exhaustive"])
        .env("FLIPSPINE_MAX_P", "9")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--max-p"));
}

#[test]
fn construct_writes_figure_and_file() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fig.svg");
    let tri = dir.path().join("t.txt");
    let pts = dir.path().join("pts.csv");
    let r = report(&[
        "construct",
        "34",
        "13",
        "--svg",
        svg.to_str().unwrap(),
        "--output",
        tri.to_str().unwrap(),
        "--points",
        pts.to_str().unwrap(),
    ]);
    assert_eq!(r["outputs"]["witness_length"], 5);
    assert_eq!(r["outputs"]["length_profile"], serde_json::json!([0, 2, 3, 5, 8, 13]));
    assert!(all_checks_pass(&r));

    let doc = std::fs::read_to_string(&svg).unwrap();
    assert!(doc.starts_with("<svg"));
    assert_eq!(doc.matches("class=\"vertex\"").count(), 34);
    assert_eq!(doc.matches("class=\"diagonal\"").count(), 31);
    assert!(doc.contains("id=\"voronoi\""));
    assert!(doc.matches("class=\"voronoi-edge\"").count() > 0);

    let d = report(&["distance", "34", "13", "--triangulation", tri.to_str().unwrap(), "--budget", "5"]);
    assert_eq!(d["outputs"]["distance"], 5);

    let out_svg = dir.path().join("re.svg");
    let r = report(&[
        "render",
        "--triangulation",
        tri.to_str().unwrap(),
        "--points",
        pts.to_str().unwrap(),
        "--svg",
        out_svg.to_str().unwrap(),
    ]);
    assert_eq!(r["outputs"]["diagonals"], 31);
    let doc = std::fs::read_to_string(&out_svg).unwrap();
    assert!(!doc.contains("id=\"voronoi\""));
}

#[test]
fn construct_small() {
    let r = report(&["construct", "4", "1"]);
    assert_eq!(r["outputs"]["method"], "Fan");
    assert_eq!(r["outputs"]["witness_length"], 1);
    assert_eq!(report(&["construct", "7", "2"])["outputs"]["witness_length"], 2);
}

#[test]
fn bound_with_file() {
    let dir = tempfile::tempdir().unwrap();
    let tri = dir.path().join("fan.txt");
    std::fs::write(&tri, "p=7\n0-2\n0-3\n0-4\n0-5\n").unwrap();
    let r = report(&["bound", "7", "2", "--triangulation", tri.to_str().unwrap()]);
    assert_eq!(r["outputs"]["target"], 2);
    assert_eq!(r["outputs"]["oracle_minimum"], 2);
    assert_eq!(r["outputs"]["extremal_profile"], serde_json::json!([1, 3]));
    assert!(all_checks_pass(&r));
}

#[test]
fn spine_counts() {
    let r = report(&["spine", "5", "2"]);
    assert_eq!(r["outputs"]["spine_vertex_count"], 1);
    assert_eq!(r["outputs"]["monodromy_r"], 3);
    let r = report(&["spine", "34", "13", "--trials", "2"]);
    assert_eq!(r["outputs"]["spine_vertex_count"], 5);
    assert!(all_checks_pass(&r));
    let r = report(&["spine", "7", "1"]);
    assert_eq!(r["outputs"]["degenerate"], true);
}

#[test]
fn selftest_small_cap() {
    let r = report(&["selftest", "--max-p", "3"]);
    assert_eq!(r["checks"].as_array().unwrap().len(), 9);
    assert!(all_checks_pass(&r));
}

#[test]
fn text_output_is_default() {
    let out = run(&["euclid", "7", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("E: 5"));
    assert!(text.contains("[pass]"));
}
