use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::stats::Estimate;

/// A named pass/fail judgement against a declared tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Parameters, analytic expectations, empirical estimates and checks of one experiment.
///
/// The wall-clock runtime is kept for display only so that serialized reports
/// are identical across runs with the same seed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub id: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub analytic: BTreeMap<String, f64>,
    pub empirical: BTreeMap<String, Estimate>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl ExperimentReport {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            ..Self::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("parameter is serializable");
        self.parameters.insert(key.to_owned(), v);
        self
    }

    pub fn analytic(&mut self, key: &str, value: f64) -> &mut Self {
        self.analytic.insert(key.to_owned(), value);
        self
    }

    pub fn empirical(&mut self, key: &str, value: Estimate) -> &mut Self {
        self.empirical.insert(key.to_owned(), value);
        self
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.checks.push(Check {
            name: name.to_owned(),
            pass,
            detail: detail.into(),
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// Aligned columns for terminals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "experiment {}", self.id);
        let width = self
            .parameters
            .keys()
            .chain(self.analytic.keys())
            .chain(self.empirical.keys())
            .chain(self.checks.iter().map(|c| &c.name))
            .map(|k| k.chars().count())
            .max()
            .unwrap_or(0);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "  param     {k:<width$}  {v}");
        }
        for (k, v) in &self.analytic {
            let _ = writeln!(out, "  analytic  {k:<width$}  {v:>12.6}");
        }
        for (k, e) in &self.empirical {
            let _ = writeln!(
                out,
                "  measured  {k:<width$}  {:>12.6}  [{:.6}, {:.6}]  n={}",
                e.value, e.lo, e.hi, e.n
            );
        }
        for c in &self.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "  {mark}      {:<width$}  {}", c.name, c.detail);
        }
        if !self.runtime.is_zero() {
            let _ = writeln!(out, "  runtime   {:.3}s", self.runtime.as_secs_f64());
        }
        out
    }
}
