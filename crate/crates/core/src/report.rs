//! Verification reports: `key: value` lines and CSV blocks per stage.

use crate::numfmt::fmt17;
use std::fmt::Write as _;

/// A single measured quantity compared against a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Gating checks decide the exit status; the rest are informational.
    pub gate: bool,
    /// Passes when the value exceeds the threshold instead.
    pub lower_bound: bool,
}

impl Check {
    /// Gate passing when `value < tolerance`.
    pub fn gate(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            pass: value < tolerance,
            gate: true,
            lower_bound: false,
        }
    }

    /// Informational check passing when `value > floor`.
    pub fn at_least(name: impl Into<String>, value: f64, floor: f64) -> Self {
        Self {
            pass: value > floor,
            gate: false,
            lower_bound: true,
            ..Self::gate(name, value, floor)
        }
    }

    pub fn info(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            gate: false,
            ..Self::gate(name, value, tolerance)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvBlock {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvBlock {
    pub fn new(title: impl Into<String>, header: &[&str]) -> Self {
        Self {
            title: title.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageReport {
    pub name: String,
    pub checks: Vec<Check>,
    pub tables: Vec<CsvBlock>,
    pub notes: Vec<String>,
}

impl StageReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checks: Vec::new(),
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn gates_pass(&self) -> bool {
        self.checks.iter().filter(|c| c.gate).all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub header: Vec<(String, String)>,
    pub stages: Vec<StageReport>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.stages.iter().all(StageReport::gates_pass)
    }

    /// Name of the first stage with a failing gate.
    pub fn first_failure(&self) -> Option<&str> {
        self.stages
            .iter()
            .find(|s| !s.gates_pass())
            .map(|s| s.name.as_str())
    }

    pub fn stage(&self, name: &str) -> Option<&StageReport> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            let _ = writeln!(out, "{k}: {v}");
        }
        for s in &self.stages {
            let _ = writeln!(out, "\n[stage {}]", s.name);
            let _ = writeln!(out, "status: {}", if s.gates_pass() { "pass" } else { "FAIL" });
            for n in &s.notes {
                let _ = writeln!(out, "note: {n}");
            }
            for c in &s.checks {
                let _ = writeln!(
                    out,
                    "{}: {} {}={} {} {}",
                    c.name,
                    fmt17(c.value),
                    if c.lower_bound { "min" } else { "tol" },
                    fmt17(c.tolerance),
                    if c.pass { "pass" } else { "fail" },
                    if c.gate { "gate" } else { "info" }
                );
            }
            for t in &s.tables {
                let _ = writeln!(out, "--- csv {}", t.title);
                out.push_str(&t.to_csv());
                let _ = writeln!(out, "--- end");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn info_checks_never_gate() {
        let mut s = StageReport::new("b2");
        s.push(Check::info("ratio", 7.0, 1.0));
        assert!(s.gates_pass());
        s.push(Check::gate("residual", 1e-3, 1e-9));
        assert!(!s.gates_pass());
        let r = VerificationReport {
            header: vec![],
            stages: vec![StageReport::new("equilibria"), s],
        };
        assert_eq!(r.first_failure(), Some("b2"));
        assert!(r.to_text().contains("residual: 0.001 tol=1.0000000000000001e-9 fail gate"));
    }

    #[test]
    fn csv_layout() {
        let mut b = CsvBlock::new("t", &["a", "b"]);
        b.push(vec!["1".into(), "2".into()]);
        assert_eq!(b.to_csv(), "a,b\n1,2\n");
    }
}
