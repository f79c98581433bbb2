//! Scenario documents, expectation matching and suites.
//!
//! Exit codes: 0 success, 1 expectation mismatch, 2 schema violation,
//! 3 computation error. A suite exits with the largest code of its members.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::compute::{compute, Kind, RunError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    pub kind: Kind,
    pub params: Value,
    #[serde(default)]
    pub expect: Option<Value>,
    /// Free-text note on where the inputs and expected values come from.
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Computed without an expectation to check.
    Unchecked,
    Fail,
    SchemaError,
    ComputeError,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Unchecked => "unchecked",
            Verdict::Fail => "fail",
            Verdict::SchemaError => "schema_error",
            Verdict::ComputeError => "computation_error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::Unchecked => EXIT_OK,
            Verdict::Fail => EXIT_MISMATCH,
            Verdict::SchemaError => EXIT_SCHEMA,
            Verdict::ComputeError => EXIT_COMPUTE,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub verdict: Verdict,
    pub doc: Value,
    pub mismatches: Vec<String>,
}

impl Report {
    /// A document that never became a scenario.
    pub fn schema_failure(message: String) -> Self {
        Report {
            verdict: Verdict::SchemaError,
            doc: json!({"verdict": Verdict::SchemaError.name(), "error": {"kind": "schema", "message": message}}),
            mismatches: Vec::new(),
        }
    }
}

/// Parses a scenario document.
pub fn parse(text: &str) -> Result<Scenario, String> {
    serde_json::from_str(text).map_err(|e| format!("scenario: {}", e))
}

/// Strings and numbers compare by their text, so `"3"` matches `3`.
fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Checks that every field present in `expected` appears in `actual` with an
/// equal value; objects match recursively, arrays element by element.
pub fn compare(expected: &Value, actual: &Value, path: &str, out: &mut Vec<String>) {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => {
            for (k, ev) in e {
                let p = format!("{}/{}", path, k);
                match a.get(k) {
                    Some(av) => compare(ev, av, &p, out),
                    None => out.push(format!("{}: missing", p)),
                }
            }
        }
        (Value::Array(e), Value::Array(a)) => {
            if e.len() != a.len() {
                out.push(format!(
                    "{}: expected {} entries, got {}",
                    path,
                    e.len(),
                    a.len()
                ));
                return;
            }
            for (i, (ev, av)) in e.iter().zip(a).enumerate() {
                compare(ev, av, &format!("{}/{}", path, i), out);
            }
        }
        _ => {
            let same = match (scalar_text(expected), scalar_text(actual)) {
                (Some(x), Some(y)) => x == y,
                _ => expected == actual,
            };
            if !same {
                out.push(format!("{}: expected {}, got {}", path, expected, actual));
            }
        }
    }
}

/// Runs one scenario. `timing` adds the wall time, which makes the report
/// nondeterministic; it is off unless asked for.
pub fn run(s: &Scenario, expect_override: Option<&Value>, timing: bool) -> Report {
    let expect = expect_override.or(s.expect.as_ref());
    let start = Instant::now();
    let outcome = compute(s.kind, &s.params);
    let elapsed = start.elapsed();

    let mut doc = Map::new();
    doc.insert("id".into(), json!(s.id));
    doc.insert(
        "kind".into(),
        serde_json::to_value(s.kind).expect("kind serializes"),
    );
    doc.insert("params".into(), s.params.clone());
    if let Some(n) = &s.note {
        doc.insert("note".into(), json!(n));
    }
    let mut mismatches = Vec::new();
    let verdict = match &outcome {
        Ok(result) => {
            doc.insert("result".into(), result.clone());
            match expect {
                None => Verdict::Unchecked,
                Some(e) if e.get("error").is_some() => {
                    mismatches.push(format!(
                        "/error: expected {}, computation succeeded",
                        e["error"]
                    ));
                    Verdict::Fail
                }
                Some(e) => {
                    compare(e, result, "", &mut mismatches);
                    if mismatches.is_empty() {
                        Verdict::Pass
                    } else {
                        Verdict::Fail
                    }
                }
            }
        }
        Err(RunError::Schema(msg)) => {
            doc.insert("error".into(), json!({"kind": "schema", "message": msg}));
            Verdict::SchemaError
        }
        Err(RunError::Compute { tag, message }) => {
            doc.insert("error".into(), json!({"kind": tag, "message": message}));
            match expect.and_then(|e| e.get("error")) {
                Some(want) if scalar_text(want).as_deref() == Some(*tag) => Verdict::Pass,
                Some(want) => {
                    mismatches.push(format!("/error: expected {}, got \"{}\"", want, tag));
                    Verdict::Fail
                }
                None => Verdict::ComputeError,
            }
        }
    };
    if let Some(e) = expect {
        doc.insert("expect".into(), e.clone());
    }
    doc.insert("verdict".into(), json!(verdict.name()));
    if !mismatches.is_empty() {
        doc.insert("mismatches".into(), json!(mismatches));
    }
    if timing {
        doc.insert("wall_time_ms".into(), json!(elapsed.as_secs_f64() * 1000.0));
    }
    Report {
        verdict,
        doc: Value::Object(doc),
        mismatches,
    }
}

/// Reads and runs one scenario file.
pub fn run_file(path: &Path, expect_override: Option<&Value>, timing: bool) -> Report {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Report::schema_failure(format!("{}: {}", path.display(), e)),
    };
    match parse(&text) {
        Ok(s) => run(&s, expect_override, timing),
        Err(msg) => Report::schema_failure(msg),
    }
}

#[derive(Clone, Debug)]
pub struct SuiteEntry {
    pub file: String,
    pub report: Report,
}

#[derive(Clone, Debug)]
pub struct SuiteSummary {
    pub entries: Vec<SuiteEntry>,
}

impl SuiteSummary {
    pub fn exit_code(&self) -> i32 {
        self.entries
            .iter()
            .map(|e| e.report.verdict.exit_code())
            .max()
            .unwrap_or(EXIT_OK)
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.entries
            .iter()
            .filter(|e| e.report.verdict == v)
            .count()
    }

    pub fn to_json(&self) -> Value {
        let scenarios: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let mut m = Map::new();
                m.insert("file".into(), json!(e.file));
                if let Some(id) = e.report.doc.get("id") {
                    m.insert("id".into(), id.clone());
                }
                m.insert("verdict".into(), json!(e.report.verdict.name()));
                if !e.report.mismatches.is_empty() {
                    m.insert("mismatches".into(), json!(e.report.mismatches));
                }
                if let Some(err) = e.report.doc.get("error") {
                    m.insert("error".into(), err.clone());
                }
                Value::Object(m)
            })
            .collect();
        json!({
            "total": self.entries.len(),
            "passed": self.count(Verdict::Pass),
            "unchecked": self.count(Verdict::Unchecked),
            "failed": self.count(Verdict::Fail),
            "schema_errors": self.count(Verdict::SchemaError),
            "computation_errors": self.count(Verdict::ComputeError),
            "exit_code": self.exit_code(),
            "scenarios": scenarios,
        })
    }
}

/// Scenario files (`*.json`) directly inside `dir`, sorted by name.
pub fn scenario_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Runs every scenario in `dir`; scenarios run in parallel, the summary keeps file order.
pub fn run_suite(dir: &Path) -> std::io::Result<SuiteSummary> {
    let files = scenario_files(dir)?;
    let entries = files
        .par_iter()
        .map(|path| SuiteEntry {
            file: path
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
            report: run_file(path, None, false),
        })
        .collect();
    Ok(SuiteSummary { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(v: Value) -> Scenario {
        serde_json::from_value(v).unwrap()
    }

    #[test]
    fn expectations_match_subsets() {
        let mut out = Vec::new();
        compare(
            &json!({"a": 3, "b": {"c": ["1"]}}),
            &json!({"a": "3", "b": {"c": [1], "d": 0}, "e": 1}),
            "",
            &mut out,
        );
        assert!(out.is_empty(), "{:?}", out);
        compare(&json!({"a": [1, 2]}), &json!({"a": [1]}), "", &mut out);
        compare(&json!({"x": true}), &json!({}), "", &mut out);
        assert_eq!(out, vec!["/a: expected 2 entries, got 1", "/x: missing"]);
    }

    #[test]
    fn verdicts_and_exit_codes() {
        let s = scenario(
            json!({"id": "t", "kind": "fermat", "params": {"n": 3}, "expect": {"unit_rank": 8}}),
        );
        assert_eq!(run(&s, None, false).verdict, Verdict::Pass);
        let s = scenario(
            json!({"id": "t", "kind": "fermat", "params": {"n": 3}, "expect": {"unit_rank": 7}}),
        );
        assert_eq!(run(&s, None, false).verdict.exit_code(), EXIT_MISMATCH);
        let s = scenario(json!({"id": "t", "kind": "fermat", "params": {"n": "three"}}));
        assert_eq!(run(&s, None, false).verdict.exit_code(), EXIT_SCHEMA);
        let s = scenario(
            json!({"id": "t", "kind": "table", "params": {"name": "genus", "p": 2, "n": 3}}),
        );
        assert_eq!(run(&s, None, false).verdict.exit_code(), EXIT_COMPUTE);
        let s = scenario(
            json!({"id": "t", "kind": "table", "params": {"name": "genus", "p": 2, "n": 3}, "expect": {"error": "precondition"}}),
        );
        assert_eq!(run(&s, None, false).verdict, Verdict::Pass);
    }

    #[test]
    fn reports_are_deterministic_without_timing() {
        let s =
            scenario(json!({"id": "t", "kind": "form_product", "params": {"degrees": [2, 3, 5]}}));
        let a = serde_json::to_string(&run(&s, None, false).doc).unwrap();
        let b = serde_json::to_string(&run(&s, None, false).doc).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("wall_time"));
    }
}
