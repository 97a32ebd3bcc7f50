//! Property suites behind `ts check` and the acceptance tests.

pub mod belief;
pub mod engine;
pub mod jump;
pub mod nabla;
pub mod ordinal;
pub mod pairs;
pub mod sample;
pub mod tower;

use std::fmt;

use truestage::FinString;

const KEPT_FAILURES: usize = 10;

/// Every string over `{0, …, alphabet−1}` of length at most `max_len`,
/// shortest first and lexicographically within a length.
pub fn strings(alphabet: u64, max_len: usize) -> Vec<FinString> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|v| (0..alphabet).map(move |x| [v.as_slice(), &[x]].concat())).collect();
        out.extend(layer.iter().cloned());
    }
    out.iter().map(|v| FinString::nats(v)).collect()
}

/// The outcome of one suite: how many checks ran and the first failures.
#[derive(Debug, Clone)]
pub struct Report {
    pub name: String,
    pub checks: u64,
    pub failed: u64,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(name: &str) -> Report {
        Report { name: name.to_string(), checks: 0, failed: 0, failures: Vec::new() }
    }

    /// Records one check; `what` describes the counterexample on failure.
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checks > 0
    }

    pub fn merge(&mut self, other: Report) {
        self.checks += other.checks;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(format!("{}: {f}", other.name));
            }
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} checks, {} failures)", self.name, self.checks, self.failed)?;
        for line in &self.failures {
            write!(f, "\n  counterexample: {line}")?;
        }
        Ok(())
    }
}
