//! End-to-end checks of the command-line surface.

use std::process::Command;

fn qklein(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qklein")).args(args).output().expect("binary runs")
}

fn json_report(stdout: &[u8]) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_slice(stdout).expect("valid JSON envelope");
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["engine"]["name"], "qklein");
    v["report"].clone()
}

#[test]
fn enumerate_counts_and_vectors() {
    let out = qklein(&["enumerate", "--prime", "7", "--a0", "6"]);
    assert!(out.status.success());
    let r = json_report(&out.stdout);
    assert_eq!(r["count"], 39);
    let out = qklein(&["enumerate", "--prime", "5", "--a0", "2"]);
    let r = json_report(&out.stdout);
    assert_eq!(r["count"], 2);
}

#[test]
fn enumerate_rejects_non_prime() {
    let out = qklein(&["enumerate", "--prime", "4", "--a0", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_refuses_oversized_cells() {
    let out = qklein(&["enumerate", "--prime", "19", "--a0", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("13997547"), "refusal names the estimated cost: {msg}");
}

#[test]
fn enumerate_csv_format() {
    let out = qklein(&["enumerate", "--prime", "5", "--a0", "4", "--format", "csv"]);
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1], "4,-1,-1");
}

#[test]
fn mine_5_4_report_shape() {
    let out = qklein(&["mine", "--prime", "5", "--a0", "4"]);
    assert!(out.status.success());
    let r = json_report(&out.stdout);
    assert_eq!(r["certified"].as_array().unwrap().len(), 1);
    let cert = &r["certified"][0];
    assert_eq!(cert["vector"], serde_json::json!([4, -1, -1]));
    assert_eq!(cert["prime"], 5);
    assert_eq!(cert["a0"], 4);
    assert_eq!(cert["alpha"], 1);
    assert!(cert["kind"]["Eigen"].is_object());
    assert!(r["rejected_count"].is_number());
}

#[test]
fn verify_eigen_square() {
    let out = qklein(&["verify", "--prime", "13", "--vector", "6,1,0,0,0,0,-4"]);
    assert!(out.status.success());
    let r = json_report(&out.stdout);
    assert_eq!(r["certificate"]["alpha"], 2);
    assert_eq!(r["certificate"]["kind"]["Eigen"]["lambda"], "169");
    assert_eq!(r["direct_reverification"], true);
}

#[test]
fn dissect_level7_row() {
    let out =
        qklein(&["dissect", "--prime", "7", "--vector", "2,-2,0,1", "--residue", "2"]);
    assert!(out.status.success());
    let r = json_report(&out.stdout);
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["residue"], 2);
    assert_eq!(rows[0]["coefficients"], serde_json::json!(["1", "3"]));
}

#[test]
fn tables_corollary_5s_exits_zero() {
    let out = qklein(&["tables", "corollary-5s"]);
    assert!(out.status.success());
    let out = qklein(&["tables", "no-such-table"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_output_across_thread_counts() {
    let one = qklein(&["--threads", "1", "mine", "--prime", "5", "--a0", "6"]);
    let two = qklein(&["--threads", "2", "mine", "--prime", "5", "--a0", "6"]);
    assert_eq!(one.stdout, two.stdout);
}
