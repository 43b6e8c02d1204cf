use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::config::{RunConfig, Subcommand};
use crate::error::{Error, Result};

/// Version of every CSV layout this tool writes; bumped on any header change.
pub const CSV_FORMAT_VERSION: u32 = 1;

/// How a measured value is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One invariant verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    /// Passes when `measured <= tolerance`; NaN fails.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            measured,
            comparison: Comparison::AtMost,
            tolerance,
            passed: measured <= tolerance,
        }
    }

    /// Passes when `measured >= tolerance`; NaN fails.
    pub fn at_least(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            measured,
            comparison: Comparison::AtLeast,
            tolerance,
            passed: measured >= tolerance,
        }
    }
}

/// Volatile fields, excluded from determinism comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Runtime {
    pub wall_clock_seconds: f64,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool: String,
    pub version: String,
    pub csv_format_version: u32,
    pub subcommand: Subcommand,
    pub config: RunConfig,
    /// Named scalar and structured results, keys sorted.
    pub outputs: Map<String, Value>,
    pub checks: Vec<CheckResult>,
    /// Artifact file names, relative to the record.
    pub artifacts: Vec<String>,
    pub runtime: Runtime,
}

impl RunRecord {
    pub fn new(subcommand: Subcommand, config: RunConfig) -> Self {
        RunRecord {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            csv_format_version: CSV_FORMAT_VERSION,
            subcommand,
            config,
            outputs: Map::new(),
            checks: Vec::new(),
            artifacts: Vec::new(),
            runtime: Runtime {
                wall_clock_seconds: 0.0,
                workers: 0,
            },
        }
    }

    pub fn output(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.outputs
            .insert(key.into(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// The record with `runtime` zeroed: the part that must replay bit-for-bit.
    pub fn deterministic_part(&self) -> RunRecord {
        RunRecord {
            runtime: Runtime {
                wall_clock_seconds: 0.0,
                workers: 0,
            },
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub record: String,
    pub check: String,
    pub measured: f64,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub verdict: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub passed: usize,
    pub failed: usize,
    /// Fixed-width table for terminals.
    #[serde(skip)]
    pub text: String,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Tabulates every check of every record; reporting only, never changes an
/// exit status.
pub fn emit_report(records: &[RunRecord]) -> Result<Report> {
    if records.is_empty() {
        return Err(Error::param("records", "need at least one record"));
    }
    let rows: Vec<ReportRow> = records
        .iter()
        .flat_map(|r| {
            r.checks.iter().map(move |c| ReportRow {
                record: r.subcommand.name().into(),
                check: c.name.clone(),
                measured: c.measured,
                comparison: c.comparison,
                tolerance: c.tolerance,
                verdict: if c.passed { "PASS" } else { "FAIL" },
            })
        })
        .collect();
    let passed = rows.iter().filter(|r| r.verdict == "PASS").count();
    let failed = rows.len() - passed;
    let width = rows.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<16} {:<width$} {:>12} {:>2} {:>12}  verdict",
        "record", "check", "measured", "", "tolerance"
    );
    for r in &rows {
        let cmp = match r.comparison {
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        };
        let _ = writeln!(
            text,
            "{:<16} {:<width$} {:>12.4e} {:>2} {:>12.4e}  {}",
            r.record, r.check, r.measured, cmp, r.tolerance, r.verdict
        );
    }
    let _ = writeln!(text, "{passed} passed, {failed} failed");
    Ok(Report {
        rows,
        passed,
        failed,
        text,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(checks: Vec<CheckResult>) -> RunRecord {
        let mut r = RunRecord::new(Subcommand::CheckAll, RunConfig::default());
        r.checks = checks;
        r
    }

    #[test]
    fn single_passing_record() {
        let rep = emit_report(&[record(vec![CheckResult::at_most("norm", 1e-13, 1e-12)])]).unwrap();
        assert_eq!((rep.passed, rep.failed), (1, 0));
        assert!(rep.text.contains("PASS"));
    }

    #[test]
    fn failing_row_is_flagged() {
        let rep = emit_report(&[record(vec![
            CheckResult::at_most("norm", 1e-13, 1e-12),
            CheckResult::at_least("order", 1.2, 1.9),
            CheckResult::at_most("nan", f64::NAN, 1.0),
        ])])
        .unwrap();
        assert_eq!((rep.passed, rep.failed), (1, 2));
        assert_eq!(rep.rows[1].verdict, "FAIL");
        assert!(rep.to_json().unwrap().contains("\"failed\": 2"));
    }

    #[test]
    fn counts_match_verdicts() {
        let a = record(vec![
            CheckResult::at_most("a", 0.0, 1.0),
            CheckResult::at_most("b", 2.0, 1.0),
        ]);
        let b = record(vec![CheckResult::at_least("c", 3.0, 1.0)]);
        let rep = emit_report(&[a.clone(), b.clone()]).unwrap();
        let oracle = [a, b]
            .iter()
            .flat_map(|r| r.checks.iter())
            .filter(|c| c.passed)
            .count();
        assert_eq!(rep.passed, oracle);
        assert_eq!(rep.rows.len(), 3);
        assert!(emit_report(&[]).is_err());
    }

    #[test]
    fn runtime_is_volatile() {
        let mut a = record(vec![]);
        let mut b = a.clone();
        a.runtime.wall_clock_seconds = 1.0;
        b.runtime.workers = 8;
        assert_ne!(a, b);
        assert_eq!(a.deterministic_part(), b.deterministic_part());
    }
}
