//! JSON report shapes shared by the solve and pipeline entry points.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::oracle::FiniteStructure;

#[derive(Debug, Clone, Default, Serialize)]
pub struct TimingsMs {
    pub parse: f64,
    pub ground: f64,
    pub translate: f64,
    pub solve: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unpad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub verdict: String,
    /// Domain-size cap that makes the search complete for the fragment.
    pub bound: usize,
    pub agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<FiniteStructure>,
}

/// The stats report emitted by `solve` and `pipeline`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub class: String,
    pub s: usize,
    pub t: usize,
    /// Source-universe size: the sentence's own constants, or 1 when the
    /// automatic constant stands in. Witness constants are not counted.
    pub m: usize,
    pub ground_count: u64,
    pub prop_var_count: usize,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_constants: Option<Vec<String>>,
    pub policy: String,
    pub timings_ms: TimingsMs,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub padded_length: Option<u64>,
    /// Total pipeline time divided by the padded input length; only present
    /// for padded runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms_per_padded_byte: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}
