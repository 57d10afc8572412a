//! Check results and report rendering.
//!
//! The machine format is JSON and leaves out wall-clock timings so that two
//! runs on the same input produce identical bytes.

use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: false,
            witness: Some(witness.into()),
        }
    }

    /// Pass if `failure` is `None`, otherwise fail with the given witness.
    pub fn from_failure(name: impl Into<String>, failure: Option<String>) -> Self {
        match failure {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Machine,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "human" => Ok(Format::Human),
            "machine" => Ok(Format::Machine),
            other => Err(format!("unknown format `{other}` (expected human or machine)")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// Informational lines (computed values).
    pub info: Vec<String>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn info(&mut self, line: impl Into<String>) {
        self.info.push(line.into());
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: impl FnOnce() -> String) {
        self.checks.push(if passed {
            Check::pass(name)
        } else {
            Check::fail(name, witness())
        });
    }

    pub fn extend(&mut self, prefix: &str, other: Report) {
        for line in other.info {
            self.info.push(format!("{prefix}{line}"));
        }
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
        self.timings.extend(other.timings);
    }

    pub fn timed<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = std::time::Instant::now();
        let out = f();
        self.timings.push((label.to_string(), start.elapsed()));
        out
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.to_human(),
            Format::Machine => self.to_machine(),
        }
    }

    pub fn to_human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "$ {}", self.command);
        for line in &self.info {
            let _ = writeln!(s, "{line}");
        }
        for c in &self.checks {
            let _ = writeln!(s, "[{}] {}", if c.passed { "pass" } else { "FAIL" }, c.name);
            if let Some(w) = &c.witness {
                for l in w.lines() {
                    let _ = writeln!(s, "       {l}");
                }
            }
        }
        for (label, d) in &self.timings {
            let _ = writeln!(s, "time {label}: {:.3}s", d.as_secs_f64());
        }
        let failed = self.failures().count();
        let _ = writeln!(s, "{} checks, {} failed", self.checks.len(), failed);
        s
    }

    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_machine(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_round_trip() {
        let mut r = Report::new("hh --degree 2");
        r.info("dim HH^2 = 10");
        r.push(Check::pass("cocycles"));
        r.push(Check::fail("unit", "x = 1/2*p1"));
        r.timed("work", || ());
        let text = r.to_machine();
        let back = Report::from_machine(&text).unwrap();
        assert_eq!(back.to_machine(), text);
        assert_eq!(back.checks, r.checks);
        assert!(back.timings.is_empty());
        assert!(!back.all_passed());
    }

    #[test]
    fn human_lists_failures() {
        let mut r = Report::new("x");
        r.check("a", true, String::new);
        r.check("b", false, || "why".into());
        let h = r.to_human();
        assert!(h.contains("[pass] a"));
        assert!(h.contains("[FAIL] b"));
        assert!(h.contains("2 checks, 1 failed"));
    }
}
