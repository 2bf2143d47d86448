//! The JSON report: inputs echo, result blocks, residual summary, verdict.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use indrep::report::Check;
use indrep::Report;
use serde::Serialize;

use crate::job::{Inputs, Results, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Three significant digits, `1.23e-15`.
pub fn sci3(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x:.2e}")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub residual: String,
    pub location: String,
    pub pass: bool,
}

/// Worst residual over every check of one identity class.
#[derive(Debug, Clone, Serialize)]
pub struct ClassSummary {
    pub class: String,
    pub max_residual: String,
    /// Check name and location of the maximum.
    pub at: String,
    pub checks: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub task: &'static str,
    pub inputs: Inputs,
    pub results: Results,
    pub residuals: Vec<ClassSummary>,
    pub checks: Vec<CheckEntry>,
    pub tol: String,
    pub max_residual: String,
    pub verdict: Verdict,
    /// Seconds since the Unix epoch. Not part of the reproducible content.
    pub timestamp: String,
    #[serde(skip)]
    pub report: Report,
}

/// `frobenius[standard]/hat_vee` belongs to class `frobenius.hat_vee`.
pub fn class_of(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    let mut depth = 0usize;
    for ch in name.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            '/' if depth == 0 => out.push('.'),
            c if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out
}

pub fn summarize(checks: &[Check]) -> Vec<ClassSummary> {
    let mut classes: BTreeMap<String, Vec<&Check>> = BTreeMap::new();
    for c in checks {
        classes.entry(class_of(&c.name)).or_default().push(c);
    }
    classes
        .into_iter()
        .map(|(class, cs)| {
            let worst = cs.iter().copied().fold(cs[0], |w, c| if c.residual > w.residual || (c.residual.is_nan() && !w.residual.is_nan()) { c } else { w });
            ClassSummary {
                class,
                max_residual: sci3(worst.residual),
                at: format!("{} @ {}", worst.name, worst.location),
                checks: cs.len(),
                pass: cs.iter().all(|c| c.passed()),
            }
        })
        .collect()
}

impl RunReport {
    pub fn new(task: Task, inputs: Inputs, results: Results, report: Report) -> Self {
        let verdict = if report.passed() { Verdict::Pass } else { Verdict::Fail };
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()).to_string();
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            task: task.name(),
            tol: sci3(inputs.tol),
            inputs,
            results,
            residuals: summarize(&report.checks),
            checks: report
                .checks
                .iter()
                .map(|c| CheckEntry { name: c.name.clone(), residual: sci3(c.residual), location: c.location.clone(), pass: c.passed() })
                .collect(),
            max_residual: sci3(report.max_residual()),
            verdict,
            timestamp,
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// The report with the timestamp blanked, for reproducibility comparisons.
    pub fn comparable_json(text: &str) -> serde_json::Result<serde_json::Value> {
        let mut v: serde_json::Value = serde_json::from_str(text)?;
        if let Some(o) = v.as_object_mut() {
            o.remove("timestamp");
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_drop_instance_labels() {
        assert_eq!(class_of("decompose/frobenius[standard]/hat_vee"), "decompose.frobenius.hat_vee");
        assert_eq!(class_of("gt[H1<H3]/stages/unitary"), "gt.stages.unitary");
        assert_eq!(class_of("schur[a,b]/orthogonality"), "schur.orthogonality");
    }

    #[test]
    fn three_digits() {
        assert_eq!(sci3(1.23456e-15), "1.23e-15");
        assert_eq!(sci3(0.0), "0.00e0");
    }

    #[test]
    fn summary_takes_the_worst() {
        let checks = vec![Check::new("a[x]/r", 1e-12, 1e-9, "p"), Check::new("a[y]/r", 2e-12, 1e-9, "q"), Check::new("b", 0.0, 1e-9, "-")];
        let s = summarize(&checks);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].class, "a.r");
        assert_eq!(s[0].checks, 2);
        assert_eq!(s[0].at, "a[y]/r @ q");
    }
}
