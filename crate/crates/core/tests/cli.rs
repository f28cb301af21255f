use std::process::{Command, Output};

use serde_json::Value;

fn primefam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_primefam"))
        .args(args)
        .env_remove("PRIMEFAM_DEPTH_CAP")
        .env_remove("PRIMEFAM_BIT_CEILING")
        .env_remove("PRIMEFAM_SIEVE_CEILING")
        .env_remove("PRIMEFAM_OUTPUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn family_output_is_exact() {
    let o = primefam(&["family", "--t", "1/2", "--depth", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"t\":\"1/2\",\"e\":[2,3,7,13],\"f\":[\"2\",\"6\",\"42\",\"546\"]}\n");
}

#[test]
fn domain_errors_exit_1() {
    let o = primefam(&["family", "--t", "3/2", "--depth", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
    assert_eq!(primefam(&["intersect", "--t", "1/2", "--tp", "1/3"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_1() {
    let o = primefam(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(primefam(&["family", "--t", "1/2", "--depth", "2", "--bogus"]).status.code(), Some(1));
    assert_eq!(primefam(&["--help"]).status.code(), Some(0));
}

#[test]
fn cap_exhaustion_exits_2() {
    let o = primefam(&["family", "--t", "1/2", "--depth", "65"]);
    assert_eq!(o.status.code(), Some(2));
    let o = primefam(&["--depth-cap", "3", "family", "--t", "1/2", "--depth", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = primefam(&["--bit-ceiling", "8", "family", "--t", "1/2", "--depth", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn env_overrides_flags_defaults() {
    let o = Command::new(env!("CARGO_BIN_EXE_primefam"))
        .args(["family", "--t", "1/2", "--depth", "4"])
        .env("PRIMEFAM_DEPTH_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn intersect_and_membership() {
    let o = primefam(&["intersect", "--t", "1/3", "--tp", "1/2", "--cap", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["v_star"], 1);
    assert_eq!(v["common"], serde_json::json!([]));

    let v = json(&primefam(&["inS", "--t", "1/3"]));
    assert_eq!(v["in_s"], true);
    assert_eq!(v["p"], 3);
    let v = json(&primefam(&["inS", "--t", "2/3"]));
    assert_eq!(v["in_s"], false);
}

#[test]
fn embed_and_limits() {
    let v = json(&primefam(&["embed", "--t", "1/2", "--depth", "3"]));
    assert_eq!(v["entries"], serde_json::json!(["2", "6", "42"]));
    let v = json(&primefam(&["limits", "--kind", "one", "--depth", "5"]));
    assert_eq!(v["entries"], serde_json::json!(["2", "4", "8", "16", "32"]));
    let v = json(&primefam(&["limits", "--kind", "zero", "--depth", "5"]));
    assert_eq!(v["entries"], serde_json::json!([]));
    assert_eq!(primefam(&["limits", "--kind", "left:1/4", "--depth", "3"]).status.code(), Some(1));
}

#[test]
fn witness_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("primefam-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let w = primefam(&["witness", "--points", "1/3,1/2,2/3", "--cap", "64"]);
    assert_eq!(w.status.code(), Some(0));
    let wpath = dir.join("w.json");
    std::fs::write(&wpath, &w.stdout).unwrap();
    let wpath = wpath.to_str().unwrap();

    let mut lines = String::new();
    for t in ["1/3", "1/2", "2/3"] {
        lines.push_str(&stdout(&primefam(&["embed", "--t", t, "--depth", "6"])));
    }
    let epath = dir.join("e.jsonl");
    std::fs::write(&epath, &lines).unwrap();
    let epath = epath.to_str().unwrap();

    let ok = primefam(&["witness", "--check", wpath, "--embeddings", epath]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["verified"], true);
    assert_eq!(primefam(&["witness", "--check", wpath]).status.code(), Some(0));

    let mut tampered = json(&w);
    tampered["witness_indices"][0] = Value::String("6".into());
    std::fs::write(dir.join("bad.json"), tampered.to_string()).unwrap();
    let bad = primefam(&["witness", "--check", dir.join("bad.json").to_str().unwrap(), "--embeddings", epath]);
    assert_eq!(bad.status.code(), Some(3));
    assert_eq!(json(&bad)["verified"], false);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sample_emits_lines_or_array() {
    let o = primefam(&["--output", "json-lines", "sample", "--bits", "16", "--seed", "3", "--n", "4", "--depth", "3"]);
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[2]["index"], 2);
    let arr = json(&primefam(&["sample", "--bits", "16", "--seed", "3", "--n", "4", "--depth", "3"]));
    assert_eq!(arr.as_array().unwrap(), &lines);
}

#[test]
fn annihilate_and_atoms_reports() {
    let o = primefam(&["annihilate", "--basis", "1/3,2/5", "--bits", "64", "--seed", "1", "--n", "200", "--cap", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["hits"], 0);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 200);

    let o = primefam(&["annihilate", "--basis", "5/8", "--bits", "3", "--seed", "1", "--n", "200"]);
    assert!(json(&o)["hits"].as_u64().unwrap() > 0);

    let o = primefam(&["atoms", "--bits", "8", "--seed", "1", "--n", "20", "--cap", "64"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["failures"], serde_json::json!([]));
}

#[test]
fn gapstats_and_verify() {
    let v = json(&primefam(&["gapstats", "--lo", "1000", "--hi", "1000000"]));
    assert_eq!(v["max_ratio_num"], 34);
    assert_eq!(v["max_ratio_den"], 1327);
    let o = primefam(&["verify", "--suite", "limits", "--seed", "1", "--scale", "small"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["failures"], serde_json::json!([]));
    assert_eq!(primefam(&["verify", "--suite", "unknown"]).status.code(), Some(1));
}
