//! Command reports and their two renderings.
//!
//! Every subcommand produces one [`Report`]. Text format is for reading;
//! records format emits the report as a single JSON line whose fields are
//! stable, so downstream tooling can parse batches of runs. Emitting a
//! report as a record and parsing it back loses nothing.

use clap::ValueEnum;
use qsr_core::Verdict;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Human-readable lines.
    Text,
    /// One JSON object per report, on one line.
    Records,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub verdict: String,
    /// Named evidence for the verdict: counterexample sets (as canonical
    /// subset keys), checked counts, decomposition pieces, skip reasons.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub witnesses: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub elapsed_ms: u64,
    pub version: String,
}

impl Report {
    pub fn new(command: &str, verdict: Verdict) -> Report {
        Report {
            command: command.to_owned(),
            verdict: verdict.to_string(),
            witnesses: BTreeMap::new(),
            seed: None,
            elapsed_ms: 0,
            version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }

    pub fn witness(mut self, key: &str, value: impl fmt::Display) -> Report {
        self.witnesses.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Report {
        self.seed = Some(seed);
        self
    }

    /// Process exit code for this verdict: 0 for PASS and FOUND, 1 for
    /// FAIL and NONE (a search that was asked to find something and did
    /// not), 3 for SKIPPED and INCONCLUSIVE. Code 2 is reserved for usage
    /// and input errors, which never get as far as a report.
    pub fn exit_code(&self) -> u8 {
        match self.verdict.as_str() {
            "PASS" | "FOUND" => 0,
            "FAIL" | "NONE" => 1,
            _ => 3,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.render_text(),
            OutputFormat::Records => {
                let mut line = serde_json::to_string(self).expect("reports always serialise");
                line.push('\n');
                line
            }
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, self.verdict);
        for (key, value) in &self.witnesses {
            let _ = writeln!(out, "  {key}: {value}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "  seed: {seed}");
        }
        let _ = writeln!(out, "  elapsed: {} ms", self.elapsed_ms);
        out
    }
}

/// Parses one line of records output back into a report.
pub fn parse_record(line: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(line)
}
