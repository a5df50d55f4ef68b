use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_container-lab"));
    c.env_remove("CONTAINER_LAB_GUARD_N");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> String {
    let path = scratch(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is a JSON report")
}

#[test]
fn generate_examples() {
    let o = run(&["generate", "triangles", "--n", "4"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["n"], 6);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 4);

    let o = run(&["generate", "aps", "--n", "5", "--k", "3"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["edges"].as_array().unwrap().len(), 4);

    let a = run(&["generate", "random", "--n", "10", "--r", "3", "--m", "20", "--seed", "7"]);
    let b = run(&["generate", "random", "--n", "10", "--r", "3", "--m", "20", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let o = run(&["generate", "random", "--n", "4", "--r", "2", "--m", "7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn containers_examples() {
    let t4 = scratch("t4.json");
    assert!(run(&["generate", "triangles", "--n", "4", "--out", t4.to_str().unwrap()]).status.success());
    let o = run(&["containers", "--input", t4.to_str().unwrap(), "--mode", "cover", "--p", "1/72", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let containers = r["instances"][0]["containers"].as_array().unwrap();
    assert_eq!(containers.len(), 1);
    assert_eq!(containers[0]["fingerprint"], serde_json::json!([]));
    assert_eq!(containers[0]["container"], serde_json::json!([0, 1, 2, 3, 4, 5]));

    let star = write("star.json", r#"{"n": 4, "edges": [[0, 1], [0, 2], [0, 3]]}"#);
    let o = run(&["containers", "--input", &star, "--mode", "hardcore", "--p", "1/2", "--delta", "1/2", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["instances"][0]["containers"].as_array().unwrap().len(), 2);

    let o = run(&[
        "containers",
        "--input",
        &star,
        "--mode",
        "hardcore",
        "--p",
        "1/2",
        "--delta",
        "1/2",
        "--input-set",
        "0",
    ]);
    let r = json(&o);
    let c = &r["instances"][0]["containers"][0];
    assert_eq!((c["fingerprint"].clone(), c["container"].clone()), (serde_json::json!([0]), serde_json::json!([0])));
    assert!(r["instances"][0]["trace"].is_array());

    let t3 = write("t3.json", r#"{"n": 3, "edges": [[0, 1, 2]]}"#);
    let o = run(&["containers", "--input", &t3, "--mode", "cover", "--p", "1/4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1/72"));

    let o = run(&[
        "containers",
        "--input",
        &star,
        "--mode",
        "hardcore",
        "--p",
        "1/2",
        "--delta",
        "1/2",
        "--input-set",
        "0,1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["containers", "--input", &star, "--mode", "hardcore", "--p", "0.5", "--delta", "1/2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let o = run(&["verify", "--suite", "prop23", "--corpus", "random", "--count", "100", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["summary"]["instances"], 100);

    let k100 = scratch("k100.json");
    assert!(run(&["generate", "complete", "--n", "100", "--out", k100.to_str().unwrap()]).status.success());
    let o = run(&["verify", "--suite", "cover-lemmas", "--input", k100.to_str().unwrap(), "--p", "1/32"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["instances"][0]["trace"].as_array().unwrap().len(), 35);

    let o = run(&["verify", "--suite", "nope", "--corpus", "random"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_are_sorted_and_labelled() {
    let o = run(&["verify", "--suite", "janson", "--corpus", "random", "--count", "12", "--seed", "3"]);
    let r = json(&o);
    let digests: Vec<&str> = r["instances"].as_array().unwrap().iter().map(|i| i["digest"].as_str().unwrap()).collect();
    let mut sorted = digests.clone();
    sorted.sort();
    assert_eq!(digests, sorted);
    for inst in r["instances"].as_array().unwrap() {
        for check in inst["checks"].as_array().unwrap() {
            assert!(!check["claim"].as_str().unwrap().is_empty(), "{check}");
        }
    }
    let again = json(&run(&["verify", "--suite", "janson", "--corpus", "random", "--count", "12", "--seed", "3"]));
    assert_eq!(r["instances"].as_array().unwrap().len(), again["instances"].as_array().unwrap().len());
    for (a, b) in r["instances"].as_array().unwrap().iter().zip(again["instances"].as_array().unwrap()) {
        assert_eq!(a["checks"], b["checks"]);
    }
}

#[test]
fn bounds_examples() {
    let e = write("edge.json", r#"{"n": 2, "edges": [[0, 1]]}"#);
    let o = run(&["bounds", "--input", &e, "--which", "janson", "--p", "1/2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("mu = 1/4"), "{text}");
    assert!(text.contains("delta_star = 1/4"), "{text}");

    let na = write("nonantichain.json", r#"{"n": 3, "edges": [[0], [0, 1]]}"#);
    assert_eq!(run(&["bounds", "--input", &na, "--which", "lymb"]).status.code(), Some(2));

    let empty = write("empty.json", r#"{"n": 3, "edges": []}"#);
    let o = run(&["bounds", "--input", &empty, "--which", "harris", "--p", "1/4"]);
    assert!(stdout(&o).contains("product = 1"));
}

#[test]
fn prob_examples() {
    let e = write("edge2.json", r#"{"n": 2, "edges": [[0, 1]]}"#);
    assert_eq!(stdout(&run(&["prob", "--input", &e, "--p", "1/2"])).trim(), "3/4");
    assert_eq!(stdout(&run(&["prob", "--input", &e, "--p", "1/2", "--conditional", "0"])).trim(), "1/3");
    let empty = write("empty2.json", r#"{"n": 4, "edges": []}"#);
    let o = run(&["prob", "--input", &empty, "--p", "1/2", "--mc", "100000", "7"]);
    assert!(stdout(&o).starts_with("estimate = 1.000000"));
}

#[test]
fn guard_env_var() {
    let k = scratch("k30.json");
    assert!(run(&["generate", "complete", "--n", "30", "--out", k.to_str().unwrap()]).status.success());
    let o = run(&["prob", "--input", k.to_str().unwrap(), "--p", "1/2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin()
        .env("CONTAINER_LAB_GUARD_N", "32")
        .args(["prob", "--input", k.to_str().unwrap(), "--p", "1/2"])
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "31/1073741824");
    let o = bin()
        .env("CONTAINER_LAB_GUARD_N", "many")
        .args(["prob", "--input", k.to_str().unwrap(), "--p", "1/2"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_documents_are_rejected() {
    for (name, text) in [
        ("bad1.json", r#"{"n": 2, "edges": [[0, 2]]}"#),
        ("bad2.json", r#"{"n": 2, "edges": [[]]}"#),
        ("bad3.json", r#"{"n": 2, "edges": [[0, 1]], "extra": 1}"#),
        ("bad4.json", "not json"),
    ] {
        let path = write(name, text);
        let o = run(&["prob", "--input", &path, "--p", "1/2"]);
        assert_eq!(o.status.code(), Some(2), "{name}");
    }
    let unsorted = write("unsorted.json", r#"{"n": 3, "edges": [[2, 1]]}"#);
    let o = run(&["prob", "--input", &unsorted, "--p", "1/2"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}
