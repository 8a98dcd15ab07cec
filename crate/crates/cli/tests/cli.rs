use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_geomodal"));
    c.env_remove("GEOMODAL_MAX_POINTS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const MODEL: &str = "vietoris.json";

#[test]
fn check_prints_the_truth_set() {
    let out = run(&["check", "--model", data(MODEL).to_str().unwrap(), "--formula", "<box>(p:p)"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["truth_set"], serde_json::json!(["y"]));
}

#[test]
fn check_at_a_point_gives_a_verdict() {
    let m = data(MODEL);
    let yes = run(&["check", "--model", m.to_str().unwrap(), "--formula", "<box>(p:p)", "--point", "y"]);
    let no = run(&["check", "--model", m.to_str().unwrap(), "--formula", "<box>(p:p)", "--point", "x"]);
    assert_eq!((code(&yes), code(&no)), (0, 1));
    assert_eq!(json(&no)["holds"], false);
}

#[test]
fn formula_from_a_file() {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), "<dia>(p:p)\n").unwrap();
    let out = run(&["check", "--model", data(MODEL).to_str().unwrap(), "--formula-file", f.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["truth_set"], serde_json::json!(["x"]));
}

#[test]
fn formula_and_formula_file_conflict() {
    let out = run(&["check", "--model", data(MODEL).to_str().unwrap(), "--formula", "p:p", "--formula-file", "f.txt"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["error"]["kind"], "usage");
}

#[test]
fn presentation_pipes_into_points() {
    let present = run(&["present", "--frame", data("two.json").to_str().unwrap(), "--system", "M"]);
    assert_eq!(code(&present), 0);
    let mut child = bin().args(["points"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(&present.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["count"], 3);
    assert_eq!(v["space"]["points"].as_array().unwrap().len(), 3);
}

#[test]
fn non_open_valuation_names_the_letter() {
    let f = temp_json(
        r#"{"space": {"points": ["a", "b"], "opens": [[], ["a"], ["a", "b"]]},
            "functor": "vietoris", "gamma": {"a": [], "b": []}, "valuation": {"q": ["b"]}}"#,
    );
    let out = run(&["check", "--model", f.path().to_str().unwrap(), "--formula", "top"]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "not-open");
    let msg = v["error"]["message"].as_str().unwrap();
    assert!(msg.contains("valuation.q") && msg.contains("`q`"), "{msg}");
}

#[test]
fn transition_outside_the_carrier_is_rejected() {
    // {a} is not closed when {a} is the only proper open
    let f = temp_json(
        r#"{"space": {"points": ["a", "b"], "opens": [[], ["a"], ["a", "b"]]},
            "functor": "vietoris", "gamma": {"a": ["a"], "b": []}}"#,
    );
    let out = run(&["check", "--model", f.path().to_str().unwrap(), "--formula", "top"]);
    assert_eq!(code(&out), 2);
    let msg = json(&out)["error"]["message"].as_str().unwrap().to_string();
    assert!(msg.contains("gamma.a"), "{msg}");
}

#[test]
fn point_limit_from_the_environment() {
    let m = data(MODEL);
    let out = bin().env("GEOMODAL_MAX_POINTS", "1").args(["check", "--model", m.to_str().unwrap(), "--formula", "top"]).output().unwrap();
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["error"]["kind"], "resource-bound");
    let bad = bin().env("GEOMODAL_MAX_POINTS", "many").args(["check", "--model", m.to_str().unwrap(), "--formula", "top"]).output().unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn equivalence_verdicts() {
    let m = data(MODEL);
    let same = run(&["equiv", "--left", m.to_str().unwrap(), "--right", m.to_str().unwrap(), "--x", "x", "--y", "x"]);
    assert_eq!(code(&same), 0);
    assert_eq!(json(&same)["behavioural"], "equivalent");
    let differ = run(&["equiv", "--left", m.to_str().unwrap(), "--x", "x", "--y", "y"]);
    assert_eq!(code(&differ), 1);
}

#[test]
fn greatest_bisimulation_and_a_failing_relation() {
    let m = data(MODEL);
    let out = run(&["bisim", "--left", m.to_str().unwrap(), "--kind", "lambda"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["greatest"], serde_json::json!([["x", "x"], ["y", "y"]]));
    let r = temp_json(r#"{"pairs": [["x", "y"]]}"#);
    let bad = run(&["bisim", "--left", m.to_str().unwrap(), "--relation", r.path().to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    assert!(json(&bad)["counterexample"].as_str().unwrap().contains("`p`"));
}

#[test]
fn transition_search() {
    let out = run(&["bisim", "--left", data(MODEL).to_str().unwrap(), "--kind", "am"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["transition"]["found"].as_array().unwrap().len(), 2);
}

#[test]
fn compare_needs_a_seed_and_is_deterministic() {
    let m = data(MODEL);
    let m = m.to_str().unwrap();
    assert_eq!(code(&run(&["bisim", "--left", m, "--kind", "compare"])), 2);
    let a = run(&["bisim", "--left", m, "--kind", "compare", "--seed", "11"]);
    let b = run(&["bisim", "--left", m, "--kind", "compare", "--seed", "11"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["coincides"], true);
}

#[test]
fn lift_matches_the_builtin_functor() {
    let out = run(&["lift", "--base", "powerset", "--space", data("discrete2.json").to_str().unwrap(), "--compare", "vietoris"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["compare"]["homeomorphic"], true);
    assert_eq!(v["carrier"]["points"].as_array().unwrap().len(), 4);
}

#[test]
fn dualize_both_ways() {
    let s = run(&["dualize", "--space", data("indiscrete.json").to_str().unwrap()]);
    assert_eq!(code(&s), 0);
    let v = json(&s);
    assert_eq!(v["sober"], false);
    assert_eq!(v["points"]["points"].as_array().unwrap().len(), 1);
    let f = run(&["dualize", "--frame", data("two.json").to_str().unwrap()]);
    assert_eq!(json(&f)["points"]["points"].as_array().unwrap().len(), 1);
    assert_eq!(code(&run(&["dualize"])), 2);
}

#[test]
fn derivations() {
    let ok = run(&["proofcheck", "--derivation", data("derivation.json").to_str().unwrap()]);
    assert_eq!(code(&ok), 0);
    let bad = run(&["proofcheck", "--derivation", data("bad_derivation.json").to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    assert!(json(&bad)["failure"].as_str().unwrap().starts_with("step 1"));
}

#[test]
fn soundness_sweep_on_one_point() {
    let out = run(&["soundness", "--system", "monotone", "--functor", "dkh", "--max-points", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["sound"], true);
    let unknown = run(&["soundness", "--system", "nope", "--functor", "dkh"]);
    assert_eq!(json(&unknown)["error"]["kind"], "unknown-system");
}

#[test]
fn quotient_of_two_copies() {
    let m = data(MODEL);
    let out = run(&["quotient", "--model", m.to_str().unwrap(), "--model", m.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
    assert!(v["model"].is_object());
}

#[test]
fn text_output() {
    let out = run(&["check", "--model", data(MODEL).to_str().unwrap(), "--formula", "<box>(p:p)", "--output", "text"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("truth_set: [y]"));
}

#[test]
fn acceptance_driver_on_small_spaces() {
    let out = run(&["accept", "--suite", "all", "--max-points", "2", "--seed", "7"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    let ids: Vec<u64> = v["criteria"].as_array().unwrap().iter().map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, (1..=12).collect::<Vec<_>>());
    assert_eq!(code(&run(&["accept", "--suite", "all"])), 2);
}
