use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

mod compute;
mod expr;
mod json;
mod render;
mod scenario;
mod selfcheck;

use compute::{Kind, DEFAULT_PELL_BOUND};
use scenario::{Report, Scenario, Verdict, EXIT_MISMATCH, EXIT_OK, EXIT_SCHEMA};

#[derive(Parser)]
#[command(
    name = "cyclounits",
    version,
    about = "Unit groups from divisor lattices, cyclic-group cohomology and norms in cyclic covers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Print the full report as JSON.
    #[arg(long)]
    json: bool,
    /// Compare the result against an expected-result document.
    #[arg(long, value_name = "FILE")]
    expect: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Smith normal form of an integer matrix document.
    Snf {
        /// Matrix JSON, or `-` for stdin.
        input: PathBuf,
        /// Include the transforms U, V and S.
        #[arg(long)]
        transforms: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Tate cohomology of a cyclic G-module document.
    Cohomology {
        /// Module JSON, or `-` for stdin.
        input: PathBuf,
        /// Degrees to report (default 0..=4).
        #[arg(long = "degree", value_name = "I")]
        degrees: Vec<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Unit rank, boundary subgroup and class group from a divisor presentation.
    Nagata {
        /// Presentation JSON, or `-` for stdin.
        input: PathBuf,
        /// Matrix JSON whose columns are candidate unit divisors.
        #[arg(long, value_name = "FILE")]
        candidates: Option<PathBuf>,
        /// Classify the boundary subgroup for a prime-degree cover.
        #[arg(long, value_name = "P")]
        prime: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Run scenario documents.
    Scenario {
        #[command(subcommand)]
        action: ScenarioCommand,
    },
    /// Solve a² - f·b² = c for univariate f of even degree.
    Pell {
        /// f, e.g. "x^4 + x".
        f: String,
        /// Continued-fraction steps.
        #[arg(long, default_value_t = DEFAULT_PELL_BOUND)]
        bound: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Norm and unit tests for an element of A[z]/(z^n - f).
    Norm {
        /// Element, e.g. "z - x*y".
        element: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        f: String,
        /// Irreducible factor of f (repeatable); defaults to f itself.
        #[arg(long = "factor", value_name = "G")]
        factors: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Bounded search for nonconstant units of A[z]/(z^n - f).
    Search {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        f: String,
        #[arg(long = "factor", value_name = "G")]
        factors: Vec<String>,
        /// Degree bound (continued-fraction steps in the Pell case).
        #[arg(long)]
        bound: Option<usize>,
        /// Maximum number of terms per candidate.
        #[arg(long)]
        support: Option<usize>,
        /// Refuse searches with more candidates than this.
        #[arg(long)]
        limit: Option<u128>,
        #[command(flatten)]
        out: Output,
    },
    /// Randomized property checks against independent oracles.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// Run one scenario file.
    Run {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Expected-result document; overrides the scenario's own `expect`.
        #[arg(long, value_name = "FILE")]
        expect: Option<PathBuf>,
        /// Add wall time to the report (makes output nondeterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Run every `*.json` scenario in a directory.
    Suite {
        dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// Failure before any computation ran; always a schema-level problem.
struct InputError(String);

fn read_text(path: &Path) -> Result<String, InputError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| InputError(format!("stdin: {}", e)))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {}", path.display(), e)))
}

fn read_json(path: &Path) -> Result<Value, InputError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {}", path.display(), e)))
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("values serialize")
    );
}

fn print_report(report: &Report, json: bool, show_verdict: bool) {
    if json {
        print_json(&report.doc);
        return;
    }
    if let Some(id) = report
        .doc
        .get("id")
        .and_then(Value::as_str)
        .filter(|_| show_verdict)
    {
        println!("scenario {}: {}", id, report.verdict.name().to_uppercase());
    }
    if let Some(result) = report.doc.get("result") {
        print!("{}", render::render(result));
    }
    if let Some(err) = report.doc.get("error") {
        let kind = err["kind"].as_str().unwrap_or("error");
        let msg = err["message"].as_str().unwrap_or("");
        if report.verdict == Verdict::Pass {
            println!("expected error ({}): {}", kind, msg);
        } else {
            eprintln!("error ({}): {}", kind, msg);
        }
    }
    for m in &report.mismatches {
        eprintln!("mismatch {}", m);
    }
    if !show_verdict && report.doc.get("expect").is_some() {
        println!("expectation: {}", report.verdict.name());
    }
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

/// Runs a direct command as an anonymous scenario.
fn direct(name: &str, kind: Kind, params: Value, out: &Output) -> Result<i32, InputError> {
    let expect = out.expect.as_deref().map(read_json).transpose()?;
    let s = Scenario {
        id: name.to_string(),
        kind,
        params,
        expect: None,
        note: None,
    };
    let report = scenario::run(&s, expect.as_ref(), false);
    print_report(&report, out.json, false);
    Ok(report.verdict.exit_code())
}

fn dispatch(cmd: Command) -> Result<i32, InputError> {
    match cmd {
        Command::Snf {
            input,
            transforms,
            out,
        } => {
            let params = json!({"matrix": read_json(&input)?, "transforms": transforms});
            direct("snf", Kind::Snf, params, &out)
        }
        Command::Cohomology {
            input,
            degrees,
            out,
        } => {
            let mut params = json!({"module": read_json(&input)?});
            if !degrees.is_empty() {
                params["degrees"] = json!(degrees);
            }
            direct("cohomology", Kind::Cohomology, params, &out)
        }
        Command::Nagata {
            input,
            candidates,
            prime,
            out,
        } => {
            let mut params = json!({"presentation": read_json(&input)?});
            if let Some(c) = candidates {
                params["candidates"] = read_json(&c)?;
            }
            if let Some(p) = prime {
                params["prime"] = json!(p);
            }
            direct("nagata", Kind::Nagata, params, &out)
        }
        Command::Pell { f, bound, out } => {
            direct("pell", Kind::Pell, json!({"f": f, "bound": bound}), &out)
        }
        Command::Norm {
            element,
            n,
            f,
            factors,
            out,
        } => {
            let params = json!({"n": n, "f": f, "element": element, "factors": factors});
            direct("norm", Kind::Norm, params, &out)
        }
        Command::Search {
            n,
            f,
            factors,
            bound,
            support,
            limit,
            out,
        } => {
            let mut params = json!({"n": n, "f": f, "factors": factors});
            if let Some(b) = bound {
                params["degree_bound"] = json!(b);
            }
            if let Some(s) = support {
                params["support_bound"] = json!(s);
            }
            if let Some(l) = limit {
                params["candidate_limit"] = json!(l);
            }
            direct("search", Kind::UnitSearch, params, &out)
        }
        Command::Scenario {
            action:
                ScenarioCommand::Run {
                    file,
                    json,
                    expect,
                    timing,
                },
        } => {
            let expect = expect.as_deref().map(read_json).transpose()?;
            let report = scenario::run_file(&file, expect.as_ref(), timing);
            print_report(&report, json, true);
            Ok(report.verdict.exit_code())
        }
        Command::Scenario {
            action: ScenarioCommand::Suite { dir, json },
        } => {
            let summary = scenario::run_suite(&dir)
                .map_err(|e| InputError(format!("{}: {}", dir.display(), e)))?;
            if json {
                print_json(&summary.to_json());
            } else {
                for e in &summary.entries {
                    let id = e
                        .report
                        .doc
                        .get("id")
                        .and_then(Value::as_str)
                        .unwrap_or("-");
                    println!(
                        "{:<18} {} ({})",
                        e.report.verdict.name().to_uppercase(),
                        e.file,
                        id
                    );
                    for m in &e.report.mismatches {
                        println!("{:<18}   {}", "", m);
                    }
                    if e.report.verdict != Verdict::Pass {
                        if let Some(err) = e.report.doc.get("error") {
                            println!("{:<18}   {}", "", err["message"].as_str().unwrap_or(""));
                        }
                    }
                }
                println!(
                    "{} scenarios: {} passed, {} unchecked, {} failed, {} schema errors, {} computation errors",
                    summary.entries.len(),
                    summary.count(Verdict::Pass),
                    summary.count(Verdict::Unchecked),
                    summary.count(Verdict::Fail),
                    summary.count(Verdict::SchemaError),
                    summary.count(Verdict::ComputeError),
                );
            }
            Ok(summary.exit_code())
        }
        Command::Selfcheck { seed, cases, json } => {
            let results = selfcheck::run(seed, cases);
            if json {
                print_json(&selfcheck::to_json(seed, &results));
            } else {
                for r in &results {
                    let status = if r.passed() { "PASS" } else { "FAIL" };
                    println!(
                        "{} {}: {}/{} cases",
                        status,
                        r.name,
                        r.cases - r.failures.len(),
                        r.cases
                    );
                    for f in r.failures.iter().take(5) {
                        println!("    {}", f);
                    }
                }
                println!("seed {}", seed);
            }
            Ok(if results.iter().all(selfcheck::CheckResult::passed) {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => exit(code),
        Err(InputError(msg)) => {
            eprintln!("error (schema): {}", msg);
            exit(EXIT_SCHEMA)
        }
    }
}
