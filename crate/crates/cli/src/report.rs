//! JSON run report and the fixed set of warnings.

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Warning {
    NotGraded,
    Disconnected,
    Interpretive,
    NotStabilized,
    Sampled,
    ConstructionFailed,
    BruteforceSkipped,
    ThreadsIgnored,
}

impl Warning {
    pub fn message(self) -> &'static str {
        match self {
            Warning::NotGraded => "poset is not graded; alpha and the triple-based bound are omitted",
            Warning::Disconnected => "poset is disconnected; alpha and the triple-based bound are omitted",
            Warning::Interpretive => "gallery entry involves a reading choice in its transcription",
            Warning::NotStabilized => "window estimate did not stabilize within the tested range",
            Warning::Sampled => "families were sampled, not enumerated",
            Warning::ConstructionFailed => "constructive injection failed on at least one family",
            Warning::BruteforceSkipped => "auxiliary graph exceeds the brute-force cap; DP result is unchecked",
            Warning::ThreadsIgnored => "--threads ignored: worker pool unavailable or already initialised",
        }
    }

}

#[derive(Serialize)]
struct WarningEntry {
    code: Warning,
    message: &'static str,
}

#[derive(Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(path: &str, bytes: &[u8]) -> Self {
        InputDigest {
            path: path.to_string(),
            sha256: format!("{:x}", Sha256::digest(bytes)),
        }
    }
}

#[derive(Serialize)]
pub struct RunReport {
    tool: &'static str,
    version: &'static str,
    command: Vec<String>,
    inputs: Vec<InputDigest>,
    results: Value,
    warnings: Vec<WarningEntry>,
    timing_ms: u128,
}

/// Collects inputs and warnings while a command runs.
pub struct Ctx {
    started: Instant,
    pub inputs: Vec<InputDigest>,
    warnings: Vec<Warning>,
}

impl Ctx {
    pub fn new() -> Self {
        Ctx {
            started: Instant::now(),
            inputs: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn warn(&mut self, w: Warning) {
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }

    pub fn has(&self, w: Warning) -> bool {
        self.warnings.contains(&w)
    }

    pub fn finish(self, command: Vec<String>, results: Value) -> RunReport {
        RunReport {
            tool: "intchain",
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs: self.inputs,
            results,
            warnings: self
                .warnings
                .into_iter()
                .map(|code| WarningEntry {
                    code,
                    message: code.message(),
                })
                .collect(),
            timing_ms: self.started.elapsed().as_millis(),
        }
    }
}
