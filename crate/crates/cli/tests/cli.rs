use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sizeramsey")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn design_build_and_validate() {
    let v = json(&run(&["design", "build", "--kind", "sts", "--n", "13"]));
    assert_eq!(v["blocks"].as_array().unwrap().len(), 26);
    assert_eq!(v["manifest"]["tool"], "sizeramsey");
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d.json");
    fs::write(&file, stdout(&run(&["design", "build", "--kind", "affine", "--q", "5"]))).unwrap();
    let r = json(&run(&["design", "validate", "--file", file.to_str().unwrap()]));
    assert_eq!(r["valid"], true);
}

#[test]
fn broken_design_is_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    fs::write(&file, r#"{"n": 7, "block_size": 3, "blocks": [[0,1,2],[0,1,3]]}"#).unwrap();
    let r = json(&run(&["design", "validate", "--file", file.to_str().unwrap()]));
    assert_eq!(r["valid"], false);
    assert!(r["pair_violations"].as_u64().unwrap() > 0);
}

#[test]
fn hard_errors_exit_non_zero() {
    assert!(!run(&["design", "build", "--kind", "sts", "--n", "8"]).status.success());
    assert!(!run(&["colour", "--n", "81", "--strategy", "rainbow"]).status.success());
    assert!(!run(&["experiment", "run", "--n", "81", "--trials", "0"]).status.success());
    assert!(!run(&["couple-test", "--kind", "nonsense"]).status.success());
}

#[test]
fn decompose_petersen_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("petersen.json");
    let edges: Vec<(usize, usize)> = (0..5).flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)]).collect();
    fs::write(&file, serde_json::json!({"n": 10, "edges": edges}).to_string()).unwrap();
    let v = json(&run(&["decompose", "--pattern", file.to_str().unwrap()]));
    assert_eq!(v["valid"], true);
    assert_eq!(v["cycles"].as_array().unwrap().len(), 2);
    assert!(v["j"].as_array().unwrap().is_empty());
}

#[test]
fn colour_counts_add_up() {
    let v = json(&run(&["colour", "--n", "81", "--strategy", "uniform-random:0.5", "--seed", "4"]));
    let total = v["host_edges"].as_u64().unwrap();
    assert_eq!(v["red_edges"].as_u64().unwrap() + v["blue_edges"].as_u64().unwrap(), total);
}

#[test]
fn couple_test_csv_has_manifest() {
    let o = run(&["couple-test", "--kind", "block", "--block-size", "2", "--p", "0.3", "--trials", "1000", "--format", "csv"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let mut lines = s.lines();
    assert!(lines.next().unwrap().starts_with("# sizeramsey"));
    assert_eq!(lines.next().unwrap(), "test,index,value,reference,z_score,p_value,passed");
}

fn params_file(dir: &Path) -> String {
    let p = dir.join("params.json");
    fs::write(&p, r#"{"delta": 0.4, "z": 4, "eta": 0.1}"#).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn experiment_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let params = params_file(dir.path());
    let mut outputs = Vec::new();
    for run_id in 0..2 {
        let out = dir.path().join(format!("run{run_id}"));
        let o = run(&[
            "experiment", "run", "--n", "501", "--cubic", "12", "--trials", "3", "--strategy", "layer-flip", "--seed", "5",
            "--params", &params, "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push((fs::read(out.join("trials.csv")).unwrap(), fs::read(out.join("aggregate.json")).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert_eq!(csv.lines().count(), 2 + 3);
    let agg: serde_json::Value = serde_json::from_slice(&outputs[0].1).unwrap();
    assert_eq!(agg["aggregate"]["trials"], 3);
}

#[test]
fn host_audit_reports_multiplicity() {
    let dir = tempfile::tempdir().unwrap();
    let params = params_file(dir.path());
    let v = json(&run(&["host", "audit", "--n", "501", "--params", &params, "--seed", "1"]));
    assert!(v["layers"].as_u64().unwrap() >= 1);
    assert_eq!(v["edges_in_five_or_more_layers"], 0);
}
