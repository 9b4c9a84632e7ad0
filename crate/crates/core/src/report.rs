//! Claim records: one line of text or one JSON object per checked claim.

use std::fmt::{self, Display};

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimRecord {
    pub claim: String,
    pub instance: String,
    pub expected: String,
    pub observed: String,
    pub verdict: Verdict,
}

impl ClaimRecord {
    pub fn new(
        claim: impl Into<String>,
        instance: impl Into<String>,
        expected: impl Display,
        observed: impl Display,
        ok: bool,
    ) -> Self {
        Self {
            claim: claim.into(),
            instance: instance.into(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        }
    }

    /// Passes when `expected == observed`.
    pub fn equal<T: PartialEq + Display>(claim: impl Into<String>, instance: impl Into<String>, expected: T, observed: T) -> Self {
        let ok = expected == observed;
        Self::new(claim, instance, expected, observed, ok)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl Display for ClaimRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}  {} [{}] expected {}, observed {}",
            self.verdict, self.claim, self.instance, self.expected, self.observed
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub records: Vec<ClaimRecord>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: ClaimRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(ClaimRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimRecord> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn to_text(&self) -> String {
        self.records.iter().map(|r| format!("{r}\n")).collect()
    }

    pub fn to_jsonl(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("claim records serialize") + "\n")
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json() {
        let mut report = Report::new();
        report.push(ClaimRecord::equal("rank", "grid k=3", 4, 4));
        report.push(ClaimRecord::new("bound", "x", "<= 2", 3, false));
        assert!(!report.passed());
        assert_eq!(report.failures().count(), 1);
        let text = report.to_text();
        assert!(text.starts_with("PASS  rank [grid k=3] expected 4, observed 4\n"));
        let first = report.to_jsonl().lines().next().unwrap().to_string();
        assert_eq!(
            first,
            r#"{"claim":"rank","instance":"grid k=3","expected":"4","observed":"4","verdict":"PASS"}"#
        );
    }
}
