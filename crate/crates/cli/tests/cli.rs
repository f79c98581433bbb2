use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cyclounits"))
}

fn bundled_scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{}: {}", e, String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

#[test]
fn bundled_suite_passes() {
    let dir = bundled_scenarios();
    let o = run(&["scenario", "suite", dir.to_str().unwrap(), "--json"]);
    let summary = stdout_json(&o);
    assert_eq!(code(&o), 0, "{}", summary);
    assert_eq!(summary["passed"], summary["total"], "{}", summary);
    assert!(summary["total"].as_u64().unwrap() >= 40);
}

#[test]
fn exit_codes_by_failure_class() {
    let tmp = tempfile::tempdir().unwrap();
    let ok = write(
        tmp.path(),
        "ok.json",
        &json!({"id": "ok", "kind": "fermat", "params": {"n": 2}, "expect": {"unit_rank": 5}}),
    );
    let bad_expect = write(
        tmp.path(),
        "fail.json",
        &json!({"id": "f", "kind": "fermat", "params": {"n": 2}, "expect": {"unit_rank": 4}}),
    );
    let bad_params = write(
        tmp.path(),
        "schema.json",
        &json!({"id": "s", "kind": "fermat", "params": {"n": 2, "m": 1}}),
    );
    let not_a_scenario = write(tmp.path(), "junk.json", &json!([1, 2, 3]));
    let compute_err = write(
        tmp.path(),
        "err.json",
        &json!({"id": "e", "kind": "table", "params": {"name": "genus", "p": 2, "n": 3}}),
    );

    for (path, want) in [
        (&ok, 0),
        (&bad_expect, 1),
        (&bad_params, 2),
        (&not_a_scenario, 2),
        (&compute_err, 3),
    ] {
        let o = run(&["scenario", "run", path.to_str().unwrap(), "--json"]);
        assert_eq!(
            code(&o),
            want,
            "{}: {}",
            path.display(),
            String::from_utf8_lossy(&o.stdout)
        );
    }

    // a suite reports the worst member
    let o = run(&["scenario", "suite", tmp.path().to_str().unwrap(), "--json"]);
    let s = stdout_json(&o);
    assert_eq!(code(&o), 3);
    assert_eq!(
        (s["passed"].as_u64(), s["failed"].as_u64()),
        (Some(1), Some(1))
    );
    assert_eq!(
        (
            s["schema_errors"].as_u64(),
            s["computation_errors"].as_u64()
        ),
        (Some(2), Some(1))
    );
}

#[test]
fn missing_file_and_empty_suite() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["scenario", "suite", tmp.path().to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["total"], json!(0));
    let o = run(&[
        "scenario",
        "run",
        tmp.path().join("nope.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn expect_file_overrides_scenario_expectation() {
    let tmp = tempfile::tempdir().unwrap();
    let s = write(
        tmp.path(),
        "s.json",
        &json!({"id": "s", "kind": "fermat", "params": {"n": 3}, "expect": {"unit_rank": 0}}),
    );
    let e = write(
        tmp.path(),
        "e.json",
        &json!({"unit_rank": 8, "boundary_count": 9}),
    );
    assert_eq!(code(&run(&["scenario", "run", s.to_str().unwrap()])), 1);
    assert_eq!(
        code(&run(&[
            "scenario",
            "run",
            s.to_str().unwrap(),
            "--expect",
            e.to_str().unwrap()
        ])),
        0
    );
}

#[test]
fn json_reports_are_byte_identical() {
    let file = bundled_scenarios().join("three-lines-on-a-cubic.json");
    let a = run(&["scenario", "run", file.to_str().unwrap(), "--json"]);
    let b = run(&["scenario", "run", file.to_str().unwrap(), "--json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let t = run(&[
        "scenario",
        "run",
        file.to_str().unwrap(),
        "--json",
        "--timing",
    ]);
    assert!(stdout_json(&t)["wall_time_ms"].is_number());
    assert!(stdout_json(&a).get("wall_time_ms").is_none());
}

#[test]
fn snf_command_reads_matrix_files() {
    let tmp = tempfile::tempdir().unwrap();
    let m = write(
        tmp.path(),
        "m.json",
        &json!({"rows": 2, "cols": 2, "entries": [[2, 0], [0, 3]]}),
    );
    let o = run(&["snf", m.to_str().unwrap(), "--json", "--transforms"]);
    assert_eq!(code(&o), 0);
    let r = &stdout_json(&o)["result"];
    assert_eq!(r["factors"], json!(["1", "6"]));
    assert_eq!(r["minors_oracle"], json!("agrees"));
    assert!(r["u"].is_object() && r["v"].is_object());

    let bad = write(
        tmp.path(),
        "bad.json",
        &json!({"rows": 2, "cols": 2, "entries": [[1, 2]]}),
    );
    assert_eq!(code(&run(&["snf", bad.to_str().unwrap()])), 2);
}

#[test]
fn pell_and_norm_commands() {
    let o = run(&["pell", "x^4 + x", "--json"]);
    assert_eq!(code(&o), 0);
    let r = &stdout_json(&o)["result"];
    assert_eq!(
        (r["outcome"].as_str(), r["c"].as_str()),
        (Some("found"), Some("1/4"))
    );

    let o = run(&[
        "norm",
        "z - x*y",
        "--n",
        "2",
        "--f",
        "x^2*y^2 - 1",
        "--factor",
        "x*y - 1",
        "--factor",
        "x*y + 1",
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("is_unit: true"), "{}", text);

    // unparsable expression is an input problem, not a computation failure
    assert_eq!(code(&run(&["norm", "z +* 1", "--n", "2", "--f", "x"])), 2);
}

#[test]
fn selfcheck_is_seeded() {
    let a = run(&["selfcheck", "--seed", "3", "--cases", "8", "--json"]);
    let b = run(&["selfcheck", "--seed", "3", "--cases", "8", "--json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["passed"], json!(true));
}
