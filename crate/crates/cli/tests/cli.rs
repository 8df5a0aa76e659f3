use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("gscone-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn gscone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gscone"))
        .args(args)
        .env_remove("SEED")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn paper_verify_passes() {
    let out = gscone(&["paper", "verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("11/11 claims passed"));

    let out = gscone(&["paper", "verify", "--json"]);
    let doc = json(&out);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["claims"].as_array().unwrap().len(), 11);
}

#[test]
fn paper_verify_selected_claims() {
    let out = gscone(&["--format", "json", "paper", "verify", "--claims", "1,2,9"]);
    assert_eq!(out.status.code(), Some(0));
    let ids: Vec<u64> = json(&out)["claims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_u64().unwrap())
        .collect();
    assert_eq!(ids, [1, 2, 9]);

    let out = gscone(&["paper", "verify", "--claims", "12"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_gs_exit_codes() {
    let out = gscone(&["check", "gs", &data("figure1.val")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("40 triples"));

    let out = gscone(&["check", "gs", &data("appendix_b_f.val")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("S={}"));

    let out = gscone(&["check", "gs", &data("appendix_b_f.val"), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["holds"], false);
    assert_eq!(doc["violations"].as_array().unwrap().len(), 3);
}

#[test]
fn check_other_properties() {
    let f = data("appendix_b_f.val");
    assert_eq!(gscone(&["check", "submodular", &f]).status.code(), Some(0));
    let out = gscone(&["check", "matroid-rank", &f]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("marginal"));

    let supermodular = scratch("super.val", "n=2\n{1,2}: 1\n");
    let out = gscone(&["check", "submodular", &supermodular, "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["witness"]["d2"], "1");

    let rank = scratch("u12.val", "n=2\n{1}: 1\n{2}: 1\n{1,2}: 1\n");
    assert_eq!(
        gscone(&["check", "matroid-rank", &rank]).status.code(),
        Some(0)
    );
}

#[test]
fn input_errors_exit_two() {
    let out = gscone(&["check", "gs", "/nonexistent/v.val"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/nonexistent/v.val"));

    let bad = scratch("bad.val", "n=3\n{1,2}: -1\n{1,4}: 0\n");
    let out = gscone(&["check", "gs", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("bad.val") && err.contains("line 3"), "{err}");

    assert_eq!(
        gscone(&["check", "gs", &data("figure1.val"), "--bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gscone(&["check", "convex", &data("figure1.val")])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn decompose_and_verify_certificate() {
    let v = data("figure1.val");
    let out = gscone(&["cone", "decompose", &v, "--json"]);
    assert_eq!(out.status.code(), Some(3));
    let doc = json(&out);
    assert_eq!(doc["decomposable"], false);
    let cert = scratch("cert.json", &doc["certificate"].to_string());
    let out = gscone(&["cone", "verify-certificate", &cert, &v]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let out = gscone(&[
        "cone",
        "verify-certificate",
        &data("figure2_certificate.val"),
        &v,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("<y, v> = -1"));

    // An additive valuation normalizes to zero, which no certificate separates.
    let additive = scratch("additive.val", "n=5\n{1}: 1\n");
    let out = gscone(&[
        "cone",
        "verify-certificate",
        &data("figure2_certificate.val"),
        &additive,
    ]);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(
        gscone(&["cone", "decompose", &v, "--n", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn decompose_small_valuation() {
    // Two parallel items: the normalized rank of U(1,2) plus an additive shift.
    let v = scratch("pair.val", "n=2\n{}: 1\n{1}: 3\n{2}: 2\n{1,2}: 3\n");
    let out = gscone(&["cone", "decompose", &v, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["decomposable"], true);
    assert_eq!(doc["offset"]["constant"], "1");
    let terms = doc["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["coefficient"], "1");
}

#[test]
fn matroid_enumeration() {
    let out = gscone(&["matroid", "enumerate", "-n", "5", "--count", "--iso"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("labelled: 406"));
    assert!(text.contains("isomorphism classes: 38"));

    let out = gscone(&["--json", "matroid", "enumerate", "-n", "3"]);
    let doc = json(&out);
    assert_eq!(doc["labelled"], 16);
    assert_eq!(doc["matroids"].as_array().unwrap().len(), 16);
}

#[test]
fn trees() {
    let v = data("figure1.val");
    let out = gscone(&["tree", &v, "--set", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("{1,2} label 2"), "{}", stdout(&out));

    let out = gscone(&["tree", &v, "--all", "--json"]);
    let doc = json(&out);
    assert_eq!(doc.as_array().unwrap().len(), 26);
    let empty = &doc[0];
    assert_eq!(empty["S"], "");
    assert_eq!(empty["nodes"][1]["set"], "1,2,3");
    assert_eq!(empty["nodes"][1]["label"], "1");

    assert_eq!(
        gscone(&["tree", &v, "--set", "1,2,3,4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gscone(&["tree", &data("appendix_b_f.val")]).status.code(),
        Some(2)
    );
}

#[test]
fn concordant_sum_command() {
    let v = data("figure1.val");
    let out = gscone(&["sum", &v, &v, "--alpha", "1/2", "--beta", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        std::fs::read_to_string(&v)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect::<String>()
    );

    let ab = scratch("ab.val", "n=3\n{1,2}: -1\n{1,2,3}: -1\n");
    let bc = scratch("bc.val", "n=3\n{2,3}: -1\n{1,2,3}: -1\n");
    let out = gscone(&["sum", &ab, &bc, "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["concordant"], false);
}

#[test]
fn sampling_is_deterministic() {
    let a = gscone(&["sample", "-n", "4", "--count", "3", "--seed", "42"]);
    let b = gscone(&["sample", "-n", "4", "--count", "3", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = gscone(&["sample", "-n", "4", "--count", "3", "--seed", "43"]);
    assert_ne!(a.stdout, c.stdout);

    let env = Command::new(env!("CARGO_BIN_EXE_gscone"))
        .args(["sample", "-n", "4", "--count", "3"])
        .env("SEED", "42")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);

    let sampled = scratch("sampled.val", &stdout(&gscone(&["sample", "-n", "3"])));
    assert_eq!(gscone(&["check", "gs", &sampled]).status.code(), Some(0));
}

#[test]
fn quiet_and_formats_agree() {
    let out = gscone(&["--quiet", "check", "gs", &data("appendix_b_f.val")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());

    let a = gscone(&["--json", "check", "gs", &data("figure1.val")]);
    let b = gscone(&["--format", "json", "check", "gs", &data("figure1.val")]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["triples_checked"], 40);
}
