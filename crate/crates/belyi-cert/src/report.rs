//! Machine-readable verification reports: an ordered list of named checks
//! with statuses and witnesses, serialized as JSON with a stable schema.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    /// Exact check that succeeded.
    Pass,
    /// Check that failed; the witness explains how.
    Fail,
    /// Stage disabled by configuration.
    Skipped,
    /// Sampled (non-exhaustive) check that met its quota with no
    /// counterexample.
    Evidence,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "pass"),
            CheckStatus::Fail => write!(f, "FAIL"),
            CheckStatus::Skipped => write!(f, "skipped"),
            CheckStatus::Evidence => write!(f, "evidence"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    /// Stable identifier like `group.order`.
    pub id: String,
    /// Human-readable statement of the claim being checked.
    pub claim: String,
    pub status: CheckStatus,
    /// Computed values backing the verdict.
    pub witness: String,
    pub millis: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "FAIL"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub dataset: String,
    /// Configuration snapshot (stringified key settings).
    pub config: Vec<(String, String)>,
    pub checks: Vec<CheckResult>,
    pub verdict: Verdict,
    /// Statements relied on but not re-derived here, with their sources
    /// named in the text.
    pub external_facts: Vec<String>,
    pub conclusion: String,
}

impl VerificationReport {
    pub fn new(dataset: &str, config: Vec<(String, String)>) -> Self {
        VerificationReport {
            tool: "belyi-cert".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            dataset: dataset.into(),
            config,
            checks: Vec::new(),
            verdict: Verdict::Pass,
            external_facts: Vec::new(),
            conclusion: String::new(),
        }
    }

    pub fn push(&mut self, check: CheckResult) {
        if check.status == CheckStatus::Fail {
            self.verdict = Verdict::Fail;
        }
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Copy with timing fields zeroed, for determinism comparisons.
    pub fn canonicalized(&self) -> VerificationReport {
        let mut out = self.clone();
        for c in &mut out.checks {
            c.millis = 0;
        }
        out
    }

    /// Plain-text rendering, one line per check.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} {} — dataset {}\n",
            self.tool, self.version, self.dataset
        ));
        for c in &self.checks {
            out.push_str(&format!(
                "  [{:8}] {:32} {} ({} ms)\n",
                c.status.to_string(),
                c.id,
                c.witness,
                c.millis
            ));
        }
        for fact in &self.external_facts {
            out.push_str(&format!("  [external] {fact}\n"));
        }
        if !self.conclusion.is_empty() {
            out.push_str(&format!("  conclusion: {}\n", self.conclusion));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

/// Helper to time a check body and build the `CheckResult`.
pub fn run_check<F>(id: &str, claim: &str, body: F) -> CheckResult
where
    F: FnOnce() -> (CheckStatus, String),
{
    let start = Instant::now();
    let (status, witness) = body();
    CheckResult {
        id: id.into(),
        claim: claim.into(),
        status,
        witness,
        millis: start.elapsed().as_millis(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_flips_on_failure() {
        let mut r = VerificationReport::new("toy", vec![]);
        r.push(run_check("a", "a holds", || (CheckStatus::Pass, "ok".into())));
        assert!(r.passed());
        r.push(run_check("b", "b holds", || (CheckStatus::Fail, "bad".into())));
        assert!(!r.passed());
    }

    #[test]
    fn canonicalization_zeroes_timings() {
        let mut r = VerificationReport::new("toy", vec![]);
        r.push(run_check("a", "a", || (CheckStatus::Pass, "ok".into())));
        let c = r.canonicalized();
        assert_eq!(c.checks[0].millis, 0);
    }

    #[test]
    fn json_roundtrip() {
        let mut r = VerificationReport::new("toy", vec![("seed".into(), "7".into())]);
        r.push(run_check("a", "a", || (CheckStatus::Evidence, "5/5".into())));
        let text = r.to_json();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.checks.len(), 1);
        assert_eq!(back.checks[0].status, CheckStatus::Evidence);
    }
}
