use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    ZetaPipeline,
    FunctionalEquation,
    Theorem4Pipeline,
}

/// A determinant evaluation.
///
/// `value` is always the conformally invariant ratio `det' N / l(boundary)`.
/// When the metric is known, `det_prime` and `boundary_length` carry the two
/// factors separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetReport {
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det_prime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_length: Option<f64>,
    pub method: Method,
    pub inputs: BTreeMap<String, f64>,
    pub error_estimate: f64,
    /// Number of explicitly summed correction terms, when a truncated
    /// series was involved.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_tail: Option<usize>,
    /// Alternative evaluation of `value` by an independent route.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<f64>,
}

impl DetReport {
    pub fn new(value: f64, method: Method, error_estimate: f64) -> Self {
        Self {
            value,
            det_prime: None,
            boundary_length: None,
            method,
            inputs: BTreeMap::new(),
            error_estimate,
            n_tail: None,
            cross_check: None,
        }
    }

    pub fn input(mut self, name: &str, v: f64) -> Self {
        self.inputs.insert(name.to_string(), v);
        self
    }

    pub fn with_metric(mut self, det_prime: f64, boundary_length: f64) -> Self {
        self.det_prime = Some(det_prime);
        self.boundary_length = Some(boundary_length);
        self
    }
}
