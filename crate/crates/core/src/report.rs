//! Outcome of an inequality check, with exact sides and slack.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::oracle::ErrorBudget;
use crate::surd::{Surd, REPORT_DIGITS};
use crate::Result;

/// Label of the theorem constant as it appears in reports.
pub const THEOREM_CONSTANT_LABEL: &str = "2/(3+sqrt5)";

/// One named condition inside a composite report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

/// `lhs >= rhs`, decided exactly. `pass` holds iff `slack = lhs - rhs >= 0`.
///
/// Composite reports (witness and certificate verification) count their
/// checks: `lhs` is the number passed and `rhs` the number run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: Surd,
    pub rhs: Surd,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs_surd: Option<String>,
    pub slack: Surd,
    pub pass: bool,
    #[serde(default)]
    pub witness: Vec<String>,
    /// `lhs` to 50 digits, round-half-even.
    pub decimal: String,
    pub rhs_decimal: String,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<ErrorBudget>,
}

impl BoundReport {
    pub fn compare(name: impl Into<String>, lhs: Surd, rhs: Surd) -> Self {
        let slack = &lhs - &rhs;
        BoundReport {
            name: name.into(),
            pass: slack.is_nonnegative(),
            decimal: lhs.to_decimal(REPORT_DIGITS),
            rhs_decimal: rhs.to_decimal(REPORT_DIGITS),
            lhs,
            rhs,
            rhs_surd: None,
            slack,
            witness: Vec::new(),
            notes: Vec::new(),
            checks: Vec::new(),
            budget: None,
        }
    }

    /// Compare against `2/(3+sqrt5)`.
    pub fn against_theorem_constant(name: impl Into<String>, lhs: Surd) -> Self {
        let mut r = BoundReport::compare(name, lhs, Surd::inv_phi_squared());
        r.rhs_surd = Some(THEOREM_CONSTANT_LABEL.to_string());
        r
    }

    pub fn from_checks(name: impl Into<String>, checks: Vec<Check>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count() as i64;
        let total = checks.len() as i64;
        let mut r =
            BoundReport::compare(name, Surd::from(crate::Rat::from(passed)), Surd::from(crate::Rat::from(total)));
        r.checks = checks;
        r
    }

    pub fn with_witness<I, T>(mut self, witness: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: ToString,
    {
        self.witness = witness.into_iter().map(|w| w.to_string()).collect();
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn csv_header() -> &'static str {
        "name,lhs,rhs,slack,pass,decimal,witness"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.name,
            self.lhs,
            self.rhs_surd.as_deref().unwrap_or(&self.rhs.to_string()),
            self.slack,
            self.pass,
            self.decimal,
            self.witness.join(" ")
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let rhs = match &self.rhs_surd {
            Some(label) => format!("{label} = {}", self.rhs),
            None => self.rhs.to_string(),
        };
        let _ = writeln!(out, "{}", self.name);
        let _ = writeln!(out, "  lhs: {} ({})", self.lhs, self.decimal);
        let _ = writeln!(out, "  rhs: {} ({})", rhs, self.rhs_decimal);
        let _ = writeln!(out, "  slack: {}", self.slack);
        let _ = writeln!(out, "  pass_strict: {}", self.pass);
        if !self.witness.is_empty() {
            let _ = writeln!(out, "  witness: {}", self.witness.join(", "));
        }
        if let Some(b) = &self.budget {
            let _ = writeln!(
                out,
                "  budget: x_max={} per_x_error={} product_error={} stage_product_error={}",
                b.x_max, b.per_x_error, b.product_error, b.stage_product_error
            );
        }
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "  [{mark}] {}: {}", c.name, c.detail);
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    #[test]
    fn compare_against_constant() {
        let r = BoundReport::against_theorem_constant("q5", Surd::from(Rat::frac(5, 13)));
        assert!(r.pass);
        assert!(r.to_text().contains("pass_strict: true"));
        assert!(r.to_text().contains("5/13"));
        let r = BoundReport::against_theorem_constant("q5", Surd::from(Rat::frac(3, 8)));
        assert!(!r.pass);
    }

    #[test]
    fn composite_counts() {
        let r = BoundReport::from_checks("w", vec![Check::new("a", true, ""), Check::new("b", false, "")]);
        assert!(!r.pass);
        assert_eq!(r.lhs, Surd::from(Rat::from(1)));
        assert_eq!(r.failed_checks().count(), 1);
        let r = BoundReport::from_checks("empty", vec![]);
        assert!(r.pass);
    }

    #[test]
    fn json_round_trip() {
        let r = BoundReport::against_theorem_constant("q5", Surd::from(Rat::frac(5, 13)))
            .with_witness([1u32])
            .with_note("n=7");
        let s = r.to_json().unwrap();
        assert!(s.contains("\"rhs_surd\": \"2/(3+sqrt5)\""));
        assert!(s.contains("\"lhs\": \"5/13\""));
        assert_eq!(BoundReport::from_json(&s).unwrap(), r);
    }
}
