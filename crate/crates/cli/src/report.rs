use std::fmt::Write;

use serde_json::{json, Value};

/// Outcome of one check over all its instances.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub anchor: String,
    /// Instances actually run; stops at the first failure.
    pub instances: usize,
    pub passed: bool,
    /// `{instance, seed, data}` for the first failing instance.
    pub counterexample: Option<Value>,
    pub wall_ms: Option<f64>,
}

impl CheckReport {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "anchor": self.anchor,
            "instances": self.instances,
            "passed": self.passed,
        });
        if let Some(c) = &self.counterexample {
            v["counterexample"] = c.clone();
        }
        if let Some(ms) = self.wall_ms {
            v["wall_ms"] = json!(ms);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: Value,
    /// Sorted by anchor.
    pub checks: Vec<CheckReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckReport> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn check(&self, anchor: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.anchor == anchor)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "config": self.config,
            "checks": self.checks.iter().map(CheckReport::to_json).collect::<Vec<_>>(),
            "passed": self.passed(),
            "summary": { "total": self.checks.len(), "failed": self.failures().len() },
        })
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("# Verification report\n\n");
        let _ = writeln!(out, "config: `{}`\n", self.config);
        out.push_str("| check | instances | result |\n|---|---|---|\n");
        for c in &self.checks {
            let result = if c.passed { "pass" } else { "FAIL" };
            let _ = write!(out, "| `{}` | {} | {}", c.anchor, c.instances, result);
            if let Some(ms) = c.wall_ms {
                let _ = write!(out, " ({ms:.1} ms)");
            }
            out.push_str(" |\n");
        }
        let failed = self.failures();
        let _ = writeln!(out, "\n{} checks, {} failed", self.checks.len(), failed.len());
        for c in failed {
            let _ = writeln!(out, "\n## Counterexample for `{}`\n", c.anchor);
            let body = c.counterexample.as_ref().map(|v| serde_json::to_string_pretty(v).expect("json")).unwrap_or_default();
            let _ = writeln!(out, "```json\n{body}\n```");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(anchor: &str, passed: bool) -> CheckReport {
        CheckReport {
            anchor: anchor.into(),
            instances: 3,
            passed,
            counterexample: (!passed).then(|| json!({ "instance": 2, "seed": 1, "data": {} })),
            wall_ms: None,
        }
    }

    #[test]
    fn summary_and_lookup() {
        let report = Report { config: json!({}), checks: vec![check("a/x", true), check("b/y", false)] };
        assert!(!report.passed());
        assert_eq!(report.failures().len(), 1);
        let v = report.to_json();
        assert_eq!(v["summary"], json!({ "total": 2, "failed": 1 }));
        assert!(v["checks"][0].get("counterexample").is_none());
        assert_eq!(v["checks"][1]["counterexample"]["instance"], 2);
        assert_eq!(report.check("b/y").map(|c| c.passed), Some(false));
    }

    #[test]
    fn markdown_lists_counterexamples() {
        let report = Report { config: json!({}), checks: vec![check("a/x", true), check("b/y", false)] };
        let md = report.to_markdown();
        assert!(md.contains("| `a/x` | 3 | pass |") && md.contains("| `b/y` | 3 | FAIL |"));
        assert!(md.contains("## Counterexample for `b/y`"));
        assert!(md.contains("2 checks, 1 failed"));
    }
}
