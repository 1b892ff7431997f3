use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gersten-lab"))
        .args(args)
        .env_remove("GERSTEN_LAB_SEED")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_input(name: &str, value: &Value) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, value.to_string()).expect("tmpdir is writable");
    path
}

fn two_term(d: &[i64], n: usize) -> Value {
    json!({ "ranks": { "0": n, "1": n }, "d": { "1": { "rows": n, "cols": n, "entries": d } } })
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--count", "0"][..],
        &["verify", "--max-dim", "0"],
        &["verify", "--check-count", "no/such-check=3"],
        &["verify", "--check-count", "k0/telescope"],
        &["verify", "--check-count", "k0/telescope=0"],
        &["verify", "--ring", "Z@6"],
        &["verify", "--only", "nothing/matches"],
        &["classify", "/nonexistent/complex.json"],
        &["k0", "1/(t)", "--ring", "Q[t]@t"],
    ] {
        assert_eq!(lab(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_subset_passes() {
    let out = lab(&["verify", "--count", "5", "--only", "category/", "--ring", "Q[t]@t"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["passed"], true);
    assert_eq!(report["config"]["ring"], "Q[t]@t");
    let anchors: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["anchor"].as_str().unwrap()).collect();
    assert!(anchors.windows(2).all(|w| w[0] < w[1]));
    assert!(anchors.iter().all(|a| a.starts_with("category/")));
}

#[test]
fn sabotage_fails_with_counterexample() {
    let out = lab(&["verify", "--count", "20", "--only", "category/triangulation", "--sabotage", "ut-sign"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out);
    let check = &report["checks"][0];
    assert_eq!((check["anchor"].as_str(), &check["passed"]), (Some("category/triangulation"), &json!(false)));
    let cx = &check["counterexample"];
    assert!(cx["instance"].is_u64() && cx["seed"] == 42 && cx["data"]["violated"].is_string());
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_gersten-lab"));
        cmd.args(["verify", "--count", "2", "--only", "algebra/"]).env_remove("GERSTEN_LAB_SEED");
        if let Some(seed) = env {
            cmd.env("GERSTEN_LAB_SEED", seed);
        }
        json_of(&cmd.output().unwrap())["config"]["seed"].clone()
    };
    assert_eq!(run(None), 42);
    assert_eq!(run(Some("7")), 7);
}

#[test]
fn markdown_and_list() {
    let out = lab(&["verify", "--count", "2", "--only", "k0/", "--format", "markdown"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# Verification report") && text.contains("| `k0/telescope` | 2 | pass |"));
    let list = String::from_utf8(lab(&["verify", "--list"]).stdout).unwrap();
    assert!(list.lines().any(|l| l == "hnat/simplicial-levels"));
}

#[test]
fn classify_standard_object() {
    let path = write_input("standard.json", &two_term(&[5, 0, 0, 1], 2));
    let out = lab(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!((doc["n"].as_u64(), doc["m"].as_u64()), (Some(1), Some(1)));
    let identity = json!({ "rows": 2, "cols": 2, "entries": ["1", "0", "0", "1"] });
    assert_eq!(doc["witness"]["components"]["0"], identity);
    assert_eq!(doc["witness"]["components"]["1"], identity);
}

#[test]
fn classify_square_is_not_in_c() {
    let path = write_input("square.json", &two_term(&[25], 1));
    let out = lab(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    assert_eq!(doc["error"]["kind"], "NotInC");
    assert_eq!(doc["error"]["exponent"], 2);
}

#[test]
fn classify_ring_from_document() {
    let mut doc = two_term(&[0, 0], 1);
    doc["d"]["1"]["entries"] = json!(["t"]);
    doc["ring"] = json!("Q[t]@t");
    let path = write_input("poly.json", &doc);
    let out = json_of(&lab(&["classify", path.to_str().unwrap()]));
    assert_eq!((out["ring"].as_str(), out["n"].as_u64(), out["m"].as_u64()), (Some("Q[t]@t"), Some(1), Some(0)));
}

#[test]
fn k0_examples() {
    for (f, length) in [("5", 1), ("25", 2), ("-50", 2)] {
        let out = lab(&["k0", f]);
        assert_eq!(out.status.code(), Some(0));
        let doc = json_of(&out);
        assert_eq!((doc["class"].as_i64(), doc["length"].as_u64()), (Some(0), Some(length)), "f = {f}");
    }
    let out = lab(&["k0", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"]["kind"], "UnitElement");
    let poly = json_of(&lab(&["k0", "t^2 + t^3", "--ring", "Q[t]@t"]));
    assert_eq!((poly["class"].as_i64(), poly["length"].as_u64()), (Some(0), Some(2)));
}
