use std::path::PathBuf;

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn file(rel: &str) -> String {
    root().join(rel).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("totref").chain(args.iter().copied());
    let code = totref::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut args = args.to_vec();
    args.extend(["--format", "json"]);
    let (code, out, _) = run(&args);
    (code, serde_json::from_str(&out).expect("JSON output"))
}

#[test]
fn pair_verify_z9_is_not_regular() {
    let z9 = file("rings/z9.json");
    let (code, v) = json(&["pair", "verify", "--ring", &z9, "--x", "3", "--y", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["report"]["facts"]["regular"], "no");
}

#[test]
fn pair_file_and_failure_exit() {
    let (code, v) = json(&["pair", "verify", "--pair", &file("pairs/f5_xy.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["facts"]["regular"], "yes");

    let (code, v) = json(&["pair", "verify", "--ring", &file("rings/z8.json"), "--x", "2", "--y", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["first_failure"]["check"], "exact-pair");
}

#[test]
fn end_ring_gate_on_non_regular_pair() {
    let z9 = file("rings/z9.json");
    let (code, v) = json(&["hom", "verify-end", "--ring", &z9, "--x", "3", "--y", "3", "--a", "3"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "precondition-failed");
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    let z9 = file("rings/z9.json");
    let (code, _, err) = run(&["pair", "verify", "--ring", &z9, "--x", "3+", "--y", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("parse"));
    assert_eq!(run(&["pair", "verify", "--ring", "no/such/ring.json", "--x", "3", "--y", "3"]).0, 2);
}

#[test]
fn hom_verbs_on_graded_pair() {
    let pair = file("pairs/f5_xy.json");
    let base = ["--pair", pair.as_str(), "--degree", "6"];
    for verb in [
        &["hom", "verify-hg", "--a", "z", "--b", "z^2"][..],
        &["hom", "verify-gaba", "--a", "z", "--b", "z"],
        &["hom", "verify-gaba", "--a", "z", "--b", "0"],
        &["hom", "verify-end", "--a", "z"],
        &["hom", "verify-ext", "--a", "z^2", "--b", "z", "--i-max", "2"],
        &["family", "verify-complex", "--a", "z^3"],
        &["family", "verify-tr", "--a", "z"],
    ] {
        let args: Vec<&str> = verb.iter().chain(&base).copied().collect();
        let (code, out, err) = run(&args);
        assert_eq!(code, 0, "{args:?}\n{out}{err}");
    }
}

#[test]
fn hom_compute_h_z_into_g_z() {
    let pair = file("pairs/f5_xy.json");
    let (code, v) = json(&["hom", "compute", "--pair", &pair, "--source", "H:z", "--target", "G:z"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["relations"], serde_json::json!([["x", "z^2"], ["0", "y"]]));
}

#[test]
fn oracle_over_z9() {
    let z9 = file("rings/z9.json");
    let (code, v) = json(&["oracle", "hom", "--ring", &z9, "--x", "3", "--y", "3", "--source", "G:0", "--target", "G:0"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["facts"]["oracle_count"], 81);
}

#[test]
fn run_main_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("family.json");
    let ring = file("rings/f5_xyz_xy.json");
    let args = [
        "family", "run-main", "--ring", &ring, "--x", "x", "--y", "y", "--b", "z,z^2,z", "--n-max", "3", "--degree",
        "8", "--format", "json", "--out", out.to_str().unwrap(),
    ];
    let (code, _, err) = run(&args);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["report"]["a"], serde_json::json!(["z", "z^3", "z^4"]));
}
