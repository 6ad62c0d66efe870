use std::process::{Command, Output};

use serde_json::Value;

fn earring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_earring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = earring(&all);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1, "one JSON object per run: {text}");
    (serde_json::from_str(&text).unwrap(), out.status.code().unwrap())
}

fn ok(args: &[&str]) -> Value {
    let (value, code) = json(args);
    assert_eq!(code, 0, "{value}");
    assert_eq!(value["status"], "ok");
    value["output"].clone()
}

#[test]
fn survives_and_island() {
    let out = ok(&["survives", "3"]);
    assert_eq!(out["verdict"], false);
    assert_eq!(out["details"]["first_pruned_prefix"], "3");

    let out = ok(&["survives", "e"]);
    assert_eq!(out["verdict"], true);
    assert_eq!(out["e_set"], serde_json::json!([1, 2]));

    let out = ok(&["island", "1,2,1,2,1"]);
    assert_eq!(out["island"], 1);
    assert_eq!(out["details"]["membership"]["kind"], "core");

    let out = ok(&["island", "1,2,1"]);
    assert_eq!(out["details"]["membership"]["kind"], "line");
    assert_eq!(out["details"]["membership"]["label"], 2);

    let out = ok(&["island", "e"]);
    assert_eq!(out["verdict"], false);
    assert_eq!(out["island"], Value::Null);
}

#[test]
fn ev() {
    assert_eq!(stdout(&earring(&["ev", "e"])).trim(), "{1,2}");
    // Input is reduced before the lookup.
    let out = ok(&["ev", "1,-1"]);
    assert_eq!(out["query"], "e");
    let (value, code) = json(&["ev", "3"]);
    assert_eq!(code, 1);
    assert_eq!(value["status"], "error");
}

#[test]
fn zpath_and_crosscheck() {
    let out = ok(&["zpath", "1"]);
    assert_eq!(out["details"]["z_path"], serde_json::json!(["1,2,1,2", "1,2,1,2,1"]));
    assert_eq!(out["island"], 1);
    assert_eq!(json(&["zpath", "0"]).1, 1);

    let out = ok(&["crosscheck", "9", "2"]);
    assert_eq!(out["verdict"], true);
    assert_eq!(out["details"]["disagreements"], serde_json::json!([]));
    assert_eq!(json(&["crosscheck", "9", "0"]).1, 1);
}

#[test]
fn lift() {
    let text = stdout(&earring(&["lift", "1,2,3,-2", "--trace"]));
    assert_eq!(
        text.lines().collect::<Vec<_>>(),
        ["1 tree 1", "2 tree 1,2", "3 loop 1,2", "-2 tree 1", "endpoint 1 tree_steps=3 loop_steps=1"]
    );
    let out = ok(&["lift", "-1", "--start", "1"]);
    assert_eq!(out["endpoint"], "e");
    assert_eq!(out["start"], "1");
    assert_eq!(out["steps"][0]["kind"], "tree");
    assert_eq!(json(&["lift", "1", "--start", "3"]).1, 1);
}

#[test]
fn in_k() {
    assert_eq!(ok(&["in-k", "3"])["verdict"], true);
    assert_eq!(ok(&["in-k", "1"])["verdict"], false);
    assert_eq!(ok(&["in-k", "e"])["verdict"], true);
    let (value, code) = json(&["in-k", "0"]);
    assert_eq!(code, 1);
    assert_eq!(value["status"], "error");
    assert_eq!(json(&["in-k", "1,x"]).1, 1);
    let plain = earring(&["in-k", "0"]);
    assert_eq!(plain.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&plain.stderr).contains("positive integer"));
}

#[test]
fn witness() {
    let out = ok(&["witness", "3"]);
    assert_eq!(out["certificate"]["index"], 9);
    assert_eq!(out["certificate"]["verdict"], true);
    assert_eq!(out["beta_len"], 52);
    let text = stdout(&earring(&["witness", "1", "--trace"]));
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 4 + 1 + 4 + 1);
    assert!(lines.last().unwrap().starts_with("j=1 beta_len=4 "));
    assert!(lines.last().unwrap().contains("verdict=true"));
    assert_eq!(json(&["witness", "1,-1"]).1, 1);
}

#[test]
fn scan() {
    let out = ok(&["scan", "--max-weight", "4"]);
    assert_eq!(out["failures"], serde_json::json!([]));
    let indices: Vec<u64> = out["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["index"].as_u64().unwrap())
        .collect();
    assert!(indices.windows(2).all(|p| p[0] < p[1]));
    assert_eq!(json(&["scan", "--max-weight", "1"]).1, 1);
}

#[test]
fn points_and_charts() {
    let out = ok(&["q-point", "e:e:3:0.5"]);
    assert_eq!(out["image"], serde_json::json!({"kind": "on_circle", "circle": 3, "t": 0.5}));
    assert_eq!(out["point"]["edge"]["kind"], "loop");
    assert_eq!(ok(&["q-point", "v:1,2"])["image"]["kind"], "origin");

    let out = ok(&["charts", "e:e:1:0.3"]);
    let charts = out["charts"].as_array().unwrap();
    assert_eq!(charts.len(), 2);
    assert_eq!(charts[0]["kind"], "edge");
    assert_eq!(charts[1]["kind"], "vertex");
    assert_eq!(charts[1]["vertex"], "e");
    assert_eq!(ok(&["charts", "e:e:1:0.5"])["charts"].as_array().unwrap().len(), 1);
    assert_eq!(json(&["charts", "e:e:1:1.5"]).1, 1);
    assert_eq!(json(&["q-point", "w:e"]).1, 1);
}

#[test]
fn atlas_check() {
    let out = ok(&["atlas-check", "--samples", "300", "--seed", "5"]);
    assert_eq!(out["round_trip_failures"], 0);
    assert_eq!(out["samples"], 300);
}

#[test]
fn usage_errors() {
    assert_eq!(earring(&["bogus"]).status.code(), Some(1));
    assert_eq!(earring(&[]).status.code(), Some(1));
    assert_eq!(earring(&["--help"]).status.code(), Some(0));
    let (value, code) = json(&["ev"]);
    assert_eq!(code, 1);
    assert_eq!(value["status"], "error");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["--json", "scan", "--max-weight", "4"][..],
        &["--json", "atlas-check", "--samples", "200"],
        &["witness", "2,-1", "--trace"],
    ] {
        assert_eq!(earring(args).stdout, earring(args).stdout);
    }
}
