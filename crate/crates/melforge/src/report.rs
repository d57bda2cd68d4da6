//! Machine-readable reports.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// One verified claim. Numeric claims name their tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    /// SHA-256 of the inputs the command read, in order.
    pub inputs_digest: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub results: BTreeMap<String, serde_json::Value>,
    /// Wall-clock milliseconds per stage; excluded from determinism checks.
    pub timings_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(command: &str, inputs: &[&[u8]]) -> Self {
        let mut h = Sha256::new();
        for i in inputs {
            h.update((i.len() as u64).to_le_bytes());
            h.update(i);
        }
        Report {
            command: command.to_string(),
            inputs_digest: hex::encode(h.finalize()),
            passed: true,
            checks: Vec::new(),
            results: BTreeMap::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.push(name, passed, detail.into(), None)
    }

    pub fn check_tol(
        &mut self,
        name: &str,
        passed: bool,
        detail: impl Into<String>,
        tolerance: impl Into<String>,
    ) -> bool {
        self.push(name, passed, detail.into(), Some(tolerance.into()))
    }

    fn push(&mut self, name: &str, passed: bool, detail: String, tolerance: Option<String>) -> bool {
        self.passed &= passed;
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
            tolerance,
        });
        passed
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    /// Runs `f`, recording its duration under `stage`.
    pub fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings_ms
            .insert(stage.to_string(), t.elapsed().as_millis() as u64);
        out
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// The report without timings, for byte-level comparison.
    pub fn without_timings(&self) -> Report {
        Report {
            timings_ms: BTreeMap::new(),
            ..self.clone()
        }
    }
}
