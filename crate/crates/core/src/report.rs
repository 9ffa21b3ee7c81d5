//! Structured pass/fail records for verification suites.
//!
//! Reports serialize to JSON with cases sorted by id, so two runs with the
//! same parameters produce identical bytes.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

use crate::exact::{format_rational, Rational};
use crate::fock::FockVector;

/// Serialized evidence for a failing (or informative) case.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
}

impl Witness {
    pub fn sides(state: &FockVector, lhs: &FockVector, rhs: &FockVector) -> Self {
        Witness {
            state: Some(state.serialize()),
            lhs: Some(lhs.serialize()),
            rhs: Some(rhs.serialize()),
        }
    }

    pub fn values(lhs: &Rational, rhs: &Rational) -> Self {
        Witness {
            state: None,
            lhs: Some(format_rational(lhs)),
            rhs: Some(format_rational(rhs)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub id: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CaseResult {
    pub fn pass(id: impl Into<String>) -> Self {
        CaseResult { id: id.into(), passed: true, detail: None, witness: None }
    }

    pub fn fail(id: impl Into<String>, detail: impl Into<String>) -> Self {
        CaseResult { id: id.into(), passed: false, detail: Some(detail.into()), witness: None }
    }

    pub fn check(id: impl Into<String>, ok: bool) -> Self {
        CaseResult { id: id.into(), passed: ok, detail: None, witness: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    /// Compares two vectors, attaching a witness on mismatch.
    pub fn compare(id: impl Into<String>, state: &FockVector, lhs: &FockVector, rhs: &FockVector) -> Self {
        if lhs == rhs {
            Self::pass(id)
        } else {
            Self::fail(id, "sides differ").with_witness(Witness::sides(state, lhs, rhs))
        }
    }

    pub fn compare_values(id: impl Into<String>, lhs: &Rational, rhs: &Rational) -> Self {
        if lhs == rhs {
            Self::pass(id).with_detail(format_rational(lhs))
        } else {
            Self::fail(id, "values differ").with_witness(Witness::values(lhs, rhs))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub parameters: BTreeMap<String, Value>,
    pub cases: Vec<CaseResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            parameters: BTreeMap::new(),
            cases: Vec::new(),
            findings: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    pub fn push(&mut self, case: CaseResult) {
        self.cases.push(case);
    }

    pub fn extend(&mut self, cases: impl IntoIterator<Item = CaseResult>) {
        self.cases.extend(cases);
    }

    pub fn note(&mut self, finding: impl Into<String>) {
        self.findings.push(finding.into());
    }

    /// Absorbs the cases of `other`, prefixing their ids.
    pub fn merge(&mut self, prefix: &str, other: VerificationReport) {
        for mut c in other.cases {
            c.id = format!("{prefix}/{}", c.id);
            self.cases.push(c);
        }
        self.findings.extend(other.findings);
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.passed)
    }

    pub fn case(&self, id: &str) -> Option<&CaseResult> {
        self.cases.iter().find(|c| c.id == id)
    }

    pub fn finalize(mut self) -> Self {
        self.cases.sort_by(|a, b| a.id.cmp(&b.id));
        self
    }

    pub fn to_json(&self) -> String {
        let mut sorted = self.clone().finalize();
        sorted.findings.sort();
        serde_json::to_string_pretty(&sorted).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        format!(
            "{}: {} cases, {} failed{}",
            self.suite,
            self.cases.len(),
            failed,
            if failed == 0 { "" } else { " (FAIL)" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn json_is_sorted_and_stable() {
        let mut r = VerificationReport::new("demo").param("k", 1);
        r.push(CaseResult::pass("b"));
        r.push(CaseResult::compare_values("a", &int(1), &int(2)));
        let json = r.to_json();
        assert!(json.find("\"a\"").unwrap() < json.find("\"b\"").unwrap());
        assert_eq!(json, r.to_json());
        assert!(!r.passed());
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.cases.len(), 2);
    }
}
