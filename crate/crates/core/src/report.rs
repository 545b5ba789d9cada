//! Pass/fail records shared by the verification suites, serialized as
//! JSON lines.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: BTreeMap<String, f64>,
    /// Measured error; non-finite values serialize as null and fail.
    pub error: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    /// Passes iff `error <= tol`.
    pub fn new(check: impl Into<String>, params: &[(&str, f64)], error: f64, tol: f64) -> Self {
        VerificationReport {
            check: check.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            error,
            tol,
            pass: error <= tol,
            note: None,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(check: impl Into<String>, params: &[(&str, f64)], reason: impl Into<String>) -> Self {
        VerificationReport {
            pass: false,
            note: Some(reason.into()),
            ..VerificationReport::new(check, params, f64::NAN, 0.0)
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_and_json() {
        let r = VerificationReport::new("x.y", &[("gamma", 1.5)], 1e-12, 1e-10);
        assert!(r.pass);
        let line = r.to_json_line();
        assert!(line.contains("\"check\":\"x.y\"") && line.contains("\"gamma\":1.5"));
        assert!(!line.contains("note"));
        let bad = VerificationReport::new("x.y", &[], f64::NAN, 1.0);
        assert!(!bad.pass);
        assert!(bad.to_json_line().contains("\"error\":null"));
        let f = VerificationReport::failed("z", &[], "domain error");
        assert!(!f.pass && f.to_json_line().contains("domain error"));
    }
}
