use std::io::Write;
use std::process::Command;

use serde_json::Value;
use spinweave::cli::run;
use spinweave::document::StateDocument;

const BIN: &str = env!("CARGO_BIN_EXE_spinweave");

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("spinweave").chain(args.iter().copied());
    let code = run(argv.map(std::ffi::OsString::from), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn generate_valid_label() {
    let (code, out, _) = invoke(&["generate", "--path", "1/2,1", "--m", "0"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["holds"], true);
    assert_eq!(doc["state_alg"]["+-"]["1"], "1");
    assert_eq!(doc["inverse_ratio"], "1/2*sqrt(2)");
}

#[test]
fn generate_rejects_invalid_labels() {
    assert_eq!(invoke(&["generate", "--path", "1/2,2", "--m", "0"]).0, 1);
    assert_eq!(invoke(&["generate", "--path", "1/2,0", "--m", "1"]).0, 1);
    assert_eq!(invoke(&["generate", "--path", "1/2,1", "--m", "1/3"]).0, 1);
    assert_eq!(invoke(&["frobnicate"]).0, 1);
}

#[test]
fn document_round_trips() {
    let (_, out, _) = invoke(&["generate", "--path", "1/2,1,3/2,1", "--m", "-1", "--decimal"]);
    let doc: StateDocument = serde_json::from_str(&out).unwrap();
    let again = serde_json::to_string_pretty(&doc).unwrap();
    assert_eq!(again.trim_end(), out.trim_end());
    assert!(doc.normalized.is_some());
}

#[test]
fn verify_small_sweep() {
    let (code, out, err) = invoke(&["verify", "--n-max", "2", "--suite", "proportionality"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let suites = v["summary"]["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["totals"]["passed"], 4);
    assert!(err.contains("proportionality"));
}

#[test]
fn verify_full_suite_exits_cleanly() {
    let out = Command::new(BIN).args(["verify", "--n-max", "8", "--suite", "all"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn oracle_beyond_cap_reports_skips() {
    let (code, out, _) = invoke(&["verify", "--n-max", "9", "--suite", "oracle"]);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_str(&out).unwrap();
    let totals = &v["summary"]["suites"][0]["totals"];
    assert!(totals["skipped"].as_u64().unwrap() > 0);
    assert_eq!(totals["failed"], 0);
}

#[test]
fn oracle_command() {
    let (code, out, _) = invoke(&["oracle", "--path", "1/2,1,1/2", "--m", "1/2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["equal"], true);
    let (code, _, _) = invoke(&["oracle", "--path", "1/2,1,3/2,2,5/2,3,7/2,4", "--m", "0"]);
    assert_eq!(code, 3);
}

#[test]
fn enumerate_counts() {
    let (code, out, _) = invoke(&["enumerate", "--n", "4"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 6);
    assert_eq!(v["dimension"], 16);
}

#[test]
fn file_policy_matches_canonical() {
    let dir = std::env::temp_dir().join(format!("spinweave-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let layout = dir.join("layout.json");
    let mut f = std::fs::File::create(&layout).unwrap();
    write!(f, r#"{{"polarizers":"-+-","descent_pairs":{{"3":[3,2]}}}}"#).unwrap();
    drop(f);
    let policy = format!("file:{}", layout.display());
    let (code, out, err) = invoke(&["generate", "--path", "1/2,1,1/2", "--m", "1/2", "--policy", &policy]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ratio"], "sqrt(6)");
    assert_eq!(v["state_alg"]["++-"]["1"], "2");
    let written = dir.join("out.json");
    let (code, _, _) = invoke(&["generate", "--path", "1/2,1", "--m", "1", "--output", written.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(&written).unwrap().contains("\"++\""));
    std::fs::remove_dir_all(&dir).ok();
}
