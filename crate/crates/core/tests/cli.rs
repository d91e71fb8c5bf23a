//! End-to-end runs of the `sqpo` binary.

use std::fs;
use std::process::{Command, Output};

fn sqpo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqpo")).args(args).env("SQPO_THREADS", "1").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compose_counts_overlaps() {
    let o = sqpo(&["compose", "lib:v-", "lib:v+"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("2 admissible overlaps, 2 composite classes"));
}

#[test]
fn product_and_commutator() {
    let o = sqpo(&["product", "lib:v-", "lib:v+", "--commutator"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0|\t1\n");
}

#[test]
fn represent_reads_rule_and_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let rule = dir.path().join("rule.json");
    fs::write(&rule, sqpo::rule::library::vertex_delete().to_json()).unwrap();
    let graph = dir.path().join("graph.json");
    fs::write(&graph, sqpo::graph::Graph::from_edge_list(3, &[(0, 1), (1, 2)]).to_json()).unwrap();
    let o = sqpo(&["represent", rule.to_str().unwrap(), graph.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    let coefficients: Vec<&str> = text.lines().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(coefficients.len(), 2);
    assert!(coefficients.contains(&"1") && coefficients.contains(&"2"));
}

#[test]
fn malformed_input_names_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("bad.json");
    fs::write(&graph, "{\"vertices\": [0], \"edges\": [{\"id\": 0, \"src\": 0, \"trg\": 7}]}").unwrap();
    let o = sqpo(&["represent", "lib:v-", graph.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.json"), "{err}");
}

#[test]
fn simulate_writes_csv_flags_and_jumps() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    fs::write(
        &model,
        r#"{"rules": [{"name": "v+", "rule": "v+", "rate": 2.0}, {"name": "v-", "rule": "v-", "rate": 1.0}]}"#,
    )
    .unwrap();
    let out = dir.path().join("moments.csv");
    let flags = dir.path().join("flags.csv");
    let jumps = dir.path().join("jumps.jsonl");
    let args = |out: &std::path::Path| {
        vec![
            "simulate".to_string(),
            model.display().to_string(),
            "--seed=3".into(),
            "--t-max=2".into(),
            "--n-traj=50".into(),
            "--grid=1,2".into(),
            "--observables=V,E".into(),
            format!("--out={}", out.display()),
            format!("--flags-out={}", flags.display()),
            format!("--trajectories-out={}", jumps.display()),
        ]
    };
    let run = |out: &std::path::Path| {
        let a = args(out);
        sqpo(&a.iter().map(String::as_str).collect::<Vec<_>>())
    };
    let o = run(&out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("flagged trajectories: 0"));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("t,observable,mean,variance,stderr,n\n"));
    assert_eq!(csv.lines().count(), 5);
    assert_eq!(fs::read_to_string(&flags).unwrap().lines().count(), 51);
    let first = fs::read_to_string(&jumps).unwrap().lines().next().unwrap().to_string();
    let line: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert!(line["rule"] == "v+" || line["rule"] == "v-");

    // fixed seed gives identical output
    let again = dir.path().join("again.csv");
    assert!(run(&again).status.success());
    assert_eq!(csv, fs::read_to_string(&again).unwrap());
}

#[test]
fn runaway_trajectories_are_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    fs::write(&model, r#"{"rules": [{"name": "grow", "rule": "v+", "rate": 50.0}]}"#).unwrap();
    let flags = dir.path().join("flags.csv");
    let o = sqpo(&[
        "simulate",
        model.to_str().unwrap(),
        "--t-max=10",
        "--n-traj=3",
        "--max-size=20",
        "--flags-out",
        flags.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&flags).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains("Runaway")).count(), 3, "{text}");
}

#[test]
fn verify_reports_status() {
    let o = sqpo(&["verify", "--suite", "unit", "--n-random", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("PASS unit"));
    let o = sqpo(&["verify", "--suite", "fpc", "--size-bound", "2"]);
    assert!(o.status.success());
}

#[test]
fn reference_curves() {
    let o = sqpo(&["reference", "--formula", "edge-limit", "--eps-plus", "5"]);
    assert!(o.status.success());
    let value: f64 = stdout(&o).lines().nth(1).unwrap().parse().unwrap();
    assert!((value - 5.0 / 3.0).abs() < 1e-12);
    let o = sqpo(&["reference", "--formula", "mv", "--nu-minus", "0"]);
    assert_eq!(o.status.code(), Some(2));
}
