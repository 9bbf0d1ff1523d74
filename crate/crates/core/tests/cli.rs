use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubic-motives"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cubic-motives-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str], out: &PathBuf) -> (i32, Value) {
    let status = bin().args(args).arg("--out").arg(out).output().unwrap();
    let code = status.status.code().unwrap();
    let json = std::fs::read_to_string(out.with_extension("json"))
        .map(|s| serde_json::from_str(&s).unwrap())
        .unwrap_or(Value::Null);
    (code, json)
}

#[test]
fn projectors_suite_passes_and_reports() {
    let out = scratch("projectors");
    let (code, json) = run(&["projectors"], &out);
    assert_eq!(code, 0);
    let checks = json[0]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["id"] == "sum = Δ"));
    assert!(checks.iter().all(|c| c["anchor"].as_str().is_some_and(|a| !a.is_empty())));
    let md = std::fs::read_to_string(out.with_extension("md")).unwrap();
    assert!(md.contains("pi4prim idempotent"));
}

#[test]
fn derive_p_emits_the_coefficient_table() {
    let out = scratch("derive-p");
    let (code, json) = run(&["derive-p", "--gram", "random"], &out);
    assert_eq!(code, 0);
    let notes = json[0]["notes"][0].as_str().unwrap();
    assert!(notes.contains("(1/9)*h1^2*h2^3*h3^3"));
    let ids: Vec<&str> = json[0]["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"P independent of the Gram matrix"));
}

#[test]
fn witt_runs_are_deterministic() {
    let a = scratch("witt-a");
    let b = scratch("witt-b");
    let (ca, ja) = run(&["witt", "--random-seed", "17"], &a);
    let (cb, jb) = run(&["witt", "--seed", "17"], &b);
    assert_eq!((ca, cb), (0, 0));
    assert_eq!(ja[0]["checks"], jb[0]["checks"]);
}

#[test]
fn bad_config_exits_with_two() {
    let cfg = scratch("bad.json");
    std::fs::write(&cfg, r#"{"gram": [[1, 0], [0]]}"#).unwrap();
    let out = scratch("bad");
    let (code, _) = run(&["chern", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(code, 2);
    std::fs::write(&cfg, r#"{"unknown": 1}"#).unwrap();
    assert_eq!(run(&["chern", "--config", cfg.to_str().unwrap()], &out).0, 2);
    assert_eq!(run(&["chern", "--gram", "/nonexistent.json"], &out).0, 2);
}

#[test]
fn explicit_pair_from_config() {
    let cfg = scratch("pair.json");
    let pair = r#"{
        "rank": 3,
        "gamma_pairs": 0,
        "fourfold":  {"gram": [[1, 0, 0], [0, 1, 0], [0, 0, -1]], "alg_basis": [[1, 0, 0]]},
        "fourfold2": {"gram": [[1, 0, 0], [0, 4, 0], [0, 0, "-1/4"]], "alg_basis": [[1, 0, 0]]},
        "iso_tr": [["1/2", 0], [0, 2]]
    }"#;
    std::fs::write(&cfg, pair).unwrap();
    let out = scratch("pair");
    let (code, json) = run(&["gamma", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(code, 0, "{json}");
    let checks = json[0]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["id"].as_str().unwrap().starts_with("config pair")));
    assert!(checks.iter().all(|c| c["passed"] == true));
}
