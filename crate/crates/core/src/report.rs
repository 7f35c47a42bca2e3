//! Pass/fail records produced by the verifiers.

use serde::Serialize;
use serde_json::Value;

/// Outcome of one identity at one size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub identity: String,
    pub h: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// An ordered list of check results.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, identity: &str, h: usize, n: usize) {
        self.record(identity, h, n, None);
    }

    pub fn fail(&mut self, identity: &str, h: usize, n: usize, counterexample: Value) {
        self.record(identity, h, n, Some(counterexample));
    }

    /// Records a pass when `counterexample` is `None`, a failure otherwise.
    pub fn record(&mut self, identity: &str, h: usize, n: usize, counterexample: Option<Value>) {
        let status = if counterexample.is_some() {
            Status::Fail
        } else {
            Status::Pass
        };
        self.checks.push(CheckResult {
            identity: identity.to_string(),
            h,
            n,
            status,
            counterexample,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}
