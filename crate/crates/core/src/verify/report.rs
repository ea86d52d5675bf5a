//! Structured pass/fail records emitted by the verification suites.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// One verified case: its parameters, the measured residual, and the
/// tolerance it was held to. `pass` if and only if `residual <= tolerance`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseResult {
    pub params: BTreeMap<String, Value>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CaseResult {
    pub fn new(params: &[(&str, Value)], residual: f64, tolerance: f64) -> Self {
        let params: BTreeMap<String, Value> =
            params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        // NaN residuals (e.g. from a failed evaluation) must fail, not pass
        let pass = residual.is_finite() && residual <= tolerance;
        CaseResult { params, residual, tolerance, pass }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

/// Settings echoed into every report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportSettings {
    pub q_list: Vec<f64>,
    pub m_max: u32,
    pub j_max: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub settings: ReportSettings,
    pub cases: Vec<CaseResult>,
    pub summary: Summary,
}

impl VerificationReport {
    /// Assemble a report; cases are sorted by their canonical parameter tuple
    /// so the output is order-stable regardless of evaluation schedule.
    pub fn assemble(
        suite: &str,
        seed: u64,
        settings: ReportSettings,
        mut cases: Vec<CaseResult>,
        wall_time_ms: Option<u64>,
    ) -> Self {
        cases.sort_by(|a, b| {
            let ka = serde_json::to_string(&a.params).unwrap_or_default();
            let kb = serde_json::to_string(&b.params).unwrap_or_default();
            ka.cmp(&kb)
        });
        let passed = cases.iter().filter(|c| c.pass).count();
        let failed = cases.len() - passed;
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            seed,
            settings,
            cases,
            summary: Summary { passed, failed, wall_time_ms },
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// Largest residual-to-tolerance ratio over all cases.
    pub fn worst_margin(&self) -> f64 {
        self.cases
            .iter()
            .map(|c| c.residual / c.tolerance)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pass_iff_residual_within_tolerance() {
        let ok = CaseResult::new(&[("q", json!(0.5))], 1e-12, 1e-10);
        assert!(ok.pass);
        let bad = CaseResult::new(&[("q", json!(0.5))], 1e-9, 1e-10);
        assert!(!bad.pass);
        let nan = CaseResult::new(&[("q", json!(0.5))], f64::NAN, 1e-10);
        assert!(!nan.pass);
    }

    #[test]
    fn assemble_counts_and_sorts() {
        let settings = ReportSettings { q_list: vec![0.5], m_max: 2, j_max: 4 };
        let cases = vec![
            CaseResult::new(&[("id", json!("b"))], 0.0, 1.0),
            CaseResult::new(&[("id", json!("a"))], 2.0, 1.0),
        ];
        let r = VerificationReport::assemble("demo", 7, settings, cases, None);
        assert_eq!(r.summary.passed, 1);
        assert_eq!(r.summary.failed, 1);
        assert!(!r.all_passed());
        assert_eq!(r.cases[0].params["id"], json!("a"));
        let js = serde_json::to_string(&r).unwrap();
        assert!(!js.contains("wall_time_ms"));
    }
}
