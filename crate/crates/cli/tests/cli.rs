use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn opcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opcat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = opcat(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_vec(v).unwrap()).unwrap();
    p
}

fn leaf(i: usize) -> Value {
    json!({ "Leaf": i })
}

fn node(name: &str, kids: Vec<Value>) -> Value {
    json!({ "Node": [name, kids] })
}

#[test]
fn free_operad_composite_matches_hand_computation() {
    let dir = TempDir::new().unwrap();
    let sig = write(
        dir.path(),
        "sig.json",
        &json!({ "p": 2, "q1": 2, "q2": 1, "r1": 2, "r2": 1, "r3": 1 }),
    );
    // q = p(q1(1,3), q2(2))
    let q = node("p", vec![node("q1", vec![leaf(1), leaf(3)]), node("q2", vec![leaf(2)])]);
    let f = json!({
        "target": node("p", vec![leaf(1), leaf(2)]),
        "uppers": [node("q1", vec![leaf(1), leaf(2)]), node("q2", vec![leaf(1)])],
        "labels": [[1, 3], [2]],
    });
    let g = json!({
        "target": q,
        "uppers": [node("r1", vec![leaf(1), leaf(2)]), node("r2", vec![leaf(1)]), node("r3", vec![leaf(1)])],
        "labels": [[2, 3], [4], [1]],
    });
    let fp = write(dir.path(), "f.json", &f);
    let gp = write(dir.path(), "g.json", &g);
    let out = ok_json(&[
        "compose",
        "--operad",
        "free",
        "--signature",
        sig.to_str().unwrap(),
        fp.to_str().unwrap(),
        gp.to_str().unwrap(),
    ]);
    let c = &out["composite"];
    assert_eq!(
        c["uppers"][0],
        node("q1", vec![node("r1", vec![leaf(2), leaf(3)]), node("r3", vec![leaf(1)])])
    );
    assert_eq!(c["uppers"][1], node("q2", vec![node("r2", vec![leaf(1)])]));
    assert_eq!(c["labels"], json!([[1, 2, 3], [4]]));
    assert_eq!(c["target"], f["target"]);
}

#[test]
fn mismatched_compose_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let f = json!({ "target": [1, 2], "uppers": [[1], [1]], "labels": [[1], [2]] });
    let g = json!({ "target": [1, 2, 3], "uppers": [[1], [1], [1]], "labels": [[1], [2], [3]] });
    let fp = write(dir.path(), "f.json", &f);
    let gp = write(dir.path(), "g.json", &g);
    let out = opcat(&["compose", "--operad", "uAs", fp.to_str().unwrap(), gp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gos_order_has_no_violations() {
    let out = ok_json(&["check-order", "--order", "gos", "--size", "3", "--grading", "2"]);
    assert_eq!(out["violations"], json!([]));
    assert!(out["checked"].as_u64().unwrap() > 0);
}

#[test]
fn os_order_csv() {
    let out = opcat(&["--format", "csv", "check-order", "--order", "os", "--size", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let last: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(last[2], "0");
}

#[test]
fn omega_needs_generators_at_each_p() {
    let out = ok_json(&["counterexample", "omega", "--kmax", "6"]);
    let at_p = out["summary"]["at_p"].as_array().unwrap();
    assert_eq!(at_p.len(), 4);
    for row in at_p {
        assert!(row[1].as_u64().unwrap() >= 1, "{row}");
    }
}

#[test]
fn surface_csv_has_a_generator_per_closed_genus() {
    let out = opcat(&["--format", "csv", "counterexample", "cs", "--genus", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("degree,dim,newGenerators"));
    let news: Vec<u64> = text
        .lines()
        .skip(1)
        .take(4)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(news, vec![1, 1, 1, 1]);
}

#[test]
fn cobordism_round_trip_through_phi_and_factor() {
    let dir = TempDir::new().unwrap();
    // a graded surjection 3 → 2 with fibers {1,3}, {2}
    let gos = write(
        dir.path(),
        "gos.json",
        &json!({ "n": 3, "m": 2, "table": [1, 2, 1], "grading": [1, 0] }),
    );
    let cob = ok_json(&["cobordism", "phi", gos.to_str().unwrap()]);
    assert_eq!(cob["n"], 2);
    assert_eq!(cob["m"], 3);
    let cp = write(dir.path(), "cob.json", &cob);
    let fac = ok_json(&["cobordism", "factor", cp.to_str().unwrap()]);
    assert_eq!(fac["graded"]["table"], json!([1, 2, 1]));
    assert_eq!(fac["graded"]["grading"], json!([1, 0]));
}

#[test]
fn cobordism_compose_adds_genus_through_loops() {
    let dir = TempDir::new().unwrap();
    // pair of pants 1 → 2, then its reverse 2 → 1: a torus with two holes
    let split = json!({ "n": 1, "m": 2, "components": [{ "S": [1], "T": [1, 2], "g": 0 }] });
    let merge = json!({ "n": 2, "m": 1, "components": [{ "S": [1, 2], "T": [1], "g": 0 }] });
    let a = write(dir.path(), "a.json", &merge);
    let b = write(dir.path(), "b.json", &split);
    let out = ok_json(&["cobordism", "compose", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out["components"], json!([{ "S": [1], "T": [1], "g": 1 }]));
}

#[test]
fn invalid_cobordism_is_rejected() {
    let dir = TempDir::new().unwrap();
    let bad = json!({ "n": 1, "m": 1, "components": [{ "S": [1], "T": [], "g": 0 }] });
    let p = write(dir.path(), "bad.json", &bad);
    let out = opcat(&["cobordism", "factor", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn probes_are_deterministic_per_seed() {
    let args = ["--seed", "7", "probe-g2", "--category", "gos", "--sequences", "5", "--bound", "3"];
    let a = opcat(&args);
    let b = opcat(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let rows: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(rows.as_array().unwrap().iter().all(|r| r["certified"] == json!(true)));
}

#[test]
fn nerve_seeds_differ() {
    let a = opcat(&["--seed", "1", "nerve"]);
    let b = opcat(&["--seed", "2", "nerve"]);
    assert!(a.status.success() && b.status.success());
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn bounds_and_unknown_names() {
    assert_eq!(opcat(&["counterexample", "omega", "--kmax", "40"]).status.code(), Some(2));
    assert_eq!(opcat(&["check-order", "--order", "xyz"]).status.code(), Some(2));
    assert_eq!(opcat(&["enumerate", "--operad", "pOp"]).status.code(), Some(2));
    assert_eq!(opcat(&["--format", "dot", "antichain"]).status.code(), Some(2));
}

#[test]
fn functor_checks() {
    for f in ["tw-u-ucom", "tw-u-uas"] {
        let out = ok_json(&["check-functor", "--functor", f, "--bound", "3"]);
        assert_eq!(out["violations"], 0, "{f}");
    }
    let out = ok_json(&["check-functor", "--functor", "cpop-fs"]);
    assert!(out["violations"].as_u64().unwrap() > 0);
}

#[test]
fn enumerate_counts_for_ucom() {
    let out = ok_json(&["enumerate", "--operad", "uCom", "--bound", "3"]);
    let rows = out.as_array().unwrap();
    assert_eq!(rows.len(), 16);
    for row in rows {
        let n = row["source"].as_array().unwrap().len() as u32;
        let m = row["target"].as_array().unwrap().len() as u64;
        assert_eq!(row["count"].as_u64().unwrap(), m.pow(n), "{row}");
    }
}
