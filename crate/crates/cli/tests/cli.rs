use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

/// Runs `cox` and returns (exit code, stdout).
fn cox(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cox")).args(args).output().expect("cox runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8"))
}

fn cox_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out) = cox(&full);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

#[test]
fn normalize_in_a_commuting_pair() {
    let (code, out) = cox(&["normalize", "--system", &data("d8.cox"), "--word", "b a"]);
    assert_eq!((code, out.trim()), (0, "ab"));
}

#[test]
fn determinant_of_alpha_p() {
    let (code, out) = cox(&["detp", "--rank", "3", "--prime", "5"]);
    assert_eq!((code, out.trim()), (0, "5"));
}

#[test]
fn domain_witness() {
    let (code, out) = cox(&["probe", "domain", "--system", &data("u3.cox"), "--x", "a", "--y", "b", "--radius", "3"]);
    assert_eq!((code, out.trim()), (0, "witness e"));
}

#[test]
fn exit_codes_follow_the_status() {
    let u3 = data("u3.cox");
    let dinf = data("dinf.cox");
    let (bad, sim) = (data("bad.endo"), data("dinf_sim.endo"));
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["frobnicate"], 2),
        (vec!["suite", "nope"], 2),
        (vec!["normalize", "--system", &u3, "--word", "xyz"], 2),
        (vec!["normalize", "--system", "/nonexistent.cox", "--word", "a"], 2),
        (vec!["geom-check", "--system", &u3, "--set", "a,b,aba"], 1),
        (vec!["geom-check", "--system", &u3, "--set", "a,b"], 0),
        (vec!["sim-check", "--system", &dinf, "--endo", &bad], 1),
        (vec!["sim-check", "--system", &dinf, "--endo", &sim], 0),
        (vec!["probe", "phi", "--system", &dinf, "--words", "a,bab"], 1),
        (vec!["probe", "domain", "--system", &dinf, "--x", "ab", "--y", "ab"], 1),
        (vec!["probe", "delta", "--system", &u3, "--words", "a,b,c"], 2),
        (vec!["order", "--system", &u3, "--word", "ab"], 0),
        (vec!["affine", "build", "--type", "custom"], 2),
        (vec!["affine", "refl-length", "--type", "A1~", "--word", "abababababababababab", "--bound", "2"], 3),
    ];
    for (args, expected) in cases {
        assert_eq!(cox(&args).0, expected, "{args:?}");
    }
    let (code, _) = cox(&["normalize", "--system", &data("broken.cox"), "--word", "a"]);
    assert_eq!(code, 2);
}

#[test]
fn json_reports_echo_the_seed_and_round_trip() {
    let (code, v) = cox_json(&["--seed", "11", "mult", "--system", &data("u3.cox"), "--word", "ab", "--word", "ba"]);
    assert_eq!(code, 0);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["command"], "mult");
    assert_eq!(v["report"]["product"], "e");
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);

    let (_, v) = cox_json(&["probe", "domain", "--system", &data("u3.cox"), "--x", "a", "--y", "b"]);
    assert_eq!(v["command"], "probe domain");
    assert_eq!(v["report"]["g"], "e");
}

#[test]
fn cutoffs_and_radii_are_reported() {
    let (_, v) = cox_json(&["order", "--system", &data("u3.cox"), "--word", "abc", "--order-cutoff", "9"]);
    assert_eq!(v["report"]["order_cutoff"], 9);
    let (_, v) = cox_json(&["refl-length", "--system", &data("u3.cox"), "--word", "abc", "--radius", "2"]);
    assert_eq!(v["report"]["search_radius"], 2);
}

#[test]
fn geometry_commands() {
    let u3 = data("u3.cox");
    let (_, out) = cox(&["canon-gens", "--system", &u3, "--set", "a,b,aba"]);
    assert_eq!(out.trim(), "{a, b}");
    // the chamber e meets both walls
    let (_, out) = cox(&["dist", "--system", &u3, "--t", "a", "--u", "b"]);
    assert_eq!(out.trim(), "0");
    let (_, out) = cox(&["dist", "--system", &u3, "--t", "a", "--u", "cbc"]);
    assert_eq!(out.trim(), "1");
    let (_, v) = cox_json(&["geom-check", "--system", &u3, "--set", "a,b,aba"]);
    assert_eq!(v["report"]["failing_triple"], serde_json::json!([0, 1, 2]));
}

#[test]
fn complexity_matrix_of_a_proper_sim() {
    let dinf = data("dinf.cox");
    let (code, out) = cox(&["sim-check", "--system", &dinf, "--endo", &data("dinf_sim.endo")]);
    assert_eq!((code, out.trim()), (0, "sim-proper"));
    let (code, out) = cox(&["delta", "--system", &dinf, "--endo", &data("dinf_sim.endo")]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn affine_models() {
    let (code, out) = cox(&["affine", "mult", "--type", "A1~", "--word", "ab", "--word", "ab"]);
    assert_eq!((code, out.trim()), (0, "((-2), 0)"));
    let (_, out) = cox(&["affine", "epsilon", "--type", "A2~", "--word", "abc"]);
    assert_eq!(out.trim(), "-1");
    let (code, _) = cox(&["affine", "build", "--type", "custom", &data("a1.aff")]);
    assert_eq!(code, 0);
    let (_, out) = cox(&["affine", "refl-length", "--type", "custom", &data("a1.aff"), "--word", "abab"]);
    assert_eq!(out.trim(), "2");
    let (code, v) = cox_json(&["--seed", "3", "affine", "interp", "--type", "A2~", "--pairs", "100"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["mismatches"], 0);
}

#[test]
fn raag_commands() {
    let p3 = data("p3.cox");
    let (_, v) = cox_json(&["raag", "embed", "--graph", &p3, "--word", "a^2 B"]);
    assert_eq!(v["report"]["in_kernel"], true);
    assert_eq!(v["report"]["image_length"], 6);
    let (code, out) = cox(&["raag", "index", "--graph", &p3]);
    assert_eq!((code, out.trim()), (0, "8 cosets in B_5 (expected 8)"));
}

#[test]
fn suite_runs_are_deterministic() {
    let strip = |mut v: Value| {
        v["seconds"] = Value::Null;
        for c in v["report"]["checks"].as_array_mut().unwrap() {
            c["seconds"] = Value::Null;
        }
        v
    };
    let (code, a) = cox_json(&["--seed", "7", "suite", "sim"]);
    let (_, b) = cox_json(&["--seed", "7", "suite", "sim"]);
    assert_eq!(code, 0);
    assert_eq!(a["seed"], 7);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn word_oracle_suite_passes() {
    let (code, out) = cox(&["suite", "word-oracle"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().skip(1).all(|l| l.contains("pass")), "{out}");
}
