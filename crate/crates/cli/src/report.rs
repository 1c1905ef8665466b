use serde::Serialize;

use huffbound::{BoundResult, ClosedForm};

#[derive(Debug, Serialize)]
pub struct Witness {
    pub leaf: String,
    pub probability: String,
}

#[derive(Debug, Serialize)]
pub struct BoundReport {
    pub mode: &'static str,
    pub known: Vec<String>,
    pub exact: String,
    pub decimal: String,
    pub code: String,
    pub witness: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_raw: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<usize>,
}

impl BoundReport {
    pub fn new(mode: &'static str, known: Vec<String>, r: &BoundResult, digits: usize) -> Self {
        BoundReport {
            mode,
            known,
            exact: r.value.to_string(),
            decimal: r.value.to_decimal(digits),
            code: r.best_code.to_string(),
            witness: r
                .witness
                .iter()
                .map(|(leaf, p)| Witness { leaf: leaf.to_string(), probability: p.to_string() })
                .collect(),
            psi_size: None,
            psi_raw: None,
            threshold: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Value {
    pub exact: String,
    pub decimal: String,
}

impl Value {
    pub fn new(v: &ClosedForm, digits: usize) -> Self {
        Value { exact: v.to_string(), decimal: v.to_decimal(digits) }
    }
}

#[derive(Debug, Serialize)]
pub struct MapSummary {
    pub rows: usize,
    pub distinct_codes: usize,
    pub out: String,
}

#[derive(Debug, Serialize)]
pub struct ConjectureSummary {
    pub step: String,
    pub points: usize,
    pub mismatches: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Codeword {
    pub word: String,
    pub codeword: String,
}

#[derive(Debug, Serialize)]
pub struct V2vReport {
    pub mode: &'static str,
    #[serde(flatten)]
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub codewords: Vec<Codeword>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct TrajectoryCount {
    pub n: usize,
    pub count: String,
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub known: Vec<String>,
    pub upto: usize,
    pub threshold: usize,
    pub exhaustive: Value,
    pub pruned: Value,
    pub comparison: &'static str,
    pub exhaustive_code: String,
    pub pruned_code: String,
    pub psi: Vec<String>,
    pub trajectory_counts: Vec<TrajectoryCount>,
}
