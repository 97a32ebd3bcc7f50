//! The acceptance criteria, one PASS/FAIL line each; the process fails if
//! any criterion does.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use truestage_cli::commands::{run_suite, Suite};
use truestage_cli::suites::Report;

fn args(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

/// Every command family with fixed flags, as `(name, args)`.
fn invocations(fixtures: &Path, out: &Path) -> Vec<(&'static str, Vec<String>)> {
    let f = |name: &str| fixtures.join(name).display().to_string();
    let o = |name: &str| out.join(name).display().to_string();
    let (singleton, congruence, pair, two_level) = (f("singleton.json"), f("congruence.json"), f("pair.json"), f("two_level.json"));
    let recorded = f("singleton_trace.jsonl");
    let (t1, t2, t3) = (o("singleton.jsonl"), o("congruence.jsonl"), o("counter.jsonl"));
    vec![
        ("nabla", args(&["nabla", "--table", "divergent", "--eta", "w", "--xi", "w", "--stage", "6"])),
        ("nabla halting", args(&["nabla", "--table", "halting", "--eta", "2", "--xi", "w+1", "--stage", "9"])),
        ("nabla true", args(&["--json", "nabla", "--table", "halting", "--xi", "2", "--true", "--len", "4"])),
        ("japprox", args(&["japprox", "--table", "guarded", "--sigma", "<0,0,1,0,0,0>"])),
        ("japprox alpha", args(&["japprox", "--table", "halting", "--sigma", "<0,0,0,0,0,0>", "--alpha", "w"])),
        ("believe", args(&["believe", "--table", "break", "--eta", "2", "-s", "3", "-t", "7", "--xi", "w"])),
        ("believe json", args(&["--json", "believe", "--table", "late", "-s", "3", "-t", "5", "--xi", "1", "--relation", "tri"])),
        ("stages", args(&["stages", "--table", "halting", "--eta", "w", "--xi", "w", "--max", "15"])),
        ("stages actual", args(&["stages", "--table", "halting", "--xi", "1", "--max", "20", "--actual"])),
        ("run singleton", args(&["run", "--system", &singleton, "--steps", "10", "--trace", &t1])),
        ("run congruence", args(&["--json", "run", "--table", "break", "--eta", "2", "--system", &congruence, "--steps", "20", "--trace", &t2])),
        ("run counter", args(&["run", "--system", "counter", "--steps", "15", "--trace", &t3])),
        ("replay", args(&["run", "--system", &singleton, "--replay", &recorded])),
        ("pairs halts", args(&["pairs", "--spec", &pair, "--steps", "40", "--machine-halts"])),
        ("pairs loops", args(&["--json", "pairs", "--spec", &pair, "--steps", "40", "--machine-loops"])),
        ("pairs empty", args(&["pairs", "--spec", &two_level, "--steps", "40"])),
        ("check", args(&["check", "ordinal", "sample", "--samples", "50"])),
        ("check seed", args(&["--seed", "7", "--json", "check", "sample", "--samples", "50"])),
    ]
}

/// Runs every invocation twice in fresh directories and compares stdout,
/// stderr, exit codes and every trace file byte for byte.
fn determinism() -> Report {
    let mut rep = Report::new("determinism");
    let bin = env!("CARGO_BIN_EXE_ts");
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let dirs = [tempfile::tempdir().expect("temp dir"), tempfile::tempdir().expect("temp dir")];
    let mut outputs = Vec::new();
    for dir in &dirs {
        let mut round = Vec::new();
        for (name, args) in invocations(&fixtures, dir.path()) {
            let out = Command::new(bin).args(&args).output().expect("ts runs");
            rep.check(out.status.success(), || format!("{name}: exit {:?}, stderr {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
            round.push((name, out.status.code(), out.stdout, out.stderr));
        }
        let mut traces: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path())
            .expect("temp dir lists")
            .map(|e| {
                let p = e.expect("entry").path();
                (p.file_name().expect("file name").to_string_lossy().into_owned(), std::fs::read(&p).expect("trace reads"))
            })
            .collect();
        traces.sort();
        outputs.push((round, traces));
    }
    let (first, second) = (&outputs[0], &outputs[1]);
    for (a, b) in first.0.iter().zip(&second.0) {
        rep.check(a == b, || format!("{}: output differs between invocations", a.0));
    }
    rep.check(first.1.len() == 3, || format!("expected 3 trace files, found {}", first.1.len()));
    rep.check(first.1 == second.1, || "trace files differ between invocations".to_string());
    rep
}

type Criterion = Box<dyn FnOnce() -> Report>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("1 jump-approximation laws", Box::new(|| run_suite(Suite::Jump, None, 0, 0))),
        ("2 transfinite tower laws", Box::new(|| run_suite(Suite::Tower, None, 0, 0))),
        ("3 ordinal normal form", Box::new(|| run_suite(Suite::Ordinal, None, 0, 0))),
        ("4 nabla laws", Box::new(|| run_suite(Suite::Nabla, None, 0, 0))),
        ("5 belief laws", Box::new(|| run_suite(Suite::Belief, None, 0, 0))),
        ("6 engine soundness", Box::new(|| run_suite(Suite::Engine, None, 0, 0))),
        ("7 structure pairs end to end", Box::new(|| run_suite(Suite::Pairs, None, 0, 0))),
        ("8 determinism", Box::new(determinism)),
    ];
    let mut ok = true;
    for (name, f) in criteria {
        let start = Instant::now();
        let rep = f();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if rep.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {name}: {} checks, {} failures, {secs:.1}s", rep.checks, rep.failed);
        for f in &rep.failures {
            println!("  counterexample: {f}");
        }
        ok &= rep.passed();
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
