//! Run reports and their JSON / CSV serializations.

use std::fmt::Write as _;

use qamlab_core::conditions::{Consistency, DensityReport};
use qamlab_core::generators::GeneratorValidation;
use qamlab_core::verdict::ConditionVerdict;
use serde::Serialize;

use crate::scenario::Scenario;

pub const CSV_HEADER: &str = "n,set_size,covering_radius,wall_ms";

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointResult {
    pub fixed: bool,
    /// Generation of the set that was tested.
    pub generation: usize,
    pub set_size: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GustinResult {
    pub point: Vec<f64>,
    pub margin: f64,
    pub subset: Vec<Vec<f64>>,
    pub subset_size: usize,
    /// Some subset of size 2k − 1 also holds the point in its interior.
    pub smaller_subset_suffices: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum CheckResult {
    Density(DensityReport),
    Cond2(ConditionVerdict),
    Cond3(ConditionVerdict),
    Lemma5(ConditionVerdict),
    ConvexImage { verdict: ConditionVerdict, validation: GeneratorValidation },
    FixedPoint(FixedPointResult),
    Gustin(GustinResult),
}

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorEntry {
    pub class: &'static str,
    pub exit_code: i32,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: Tool,
    pub scenario: Scenario,
    pub results: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistency: Option<Consistency>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorEntry>,
}

impl RunReport {
    pub fn new(scenario: Scenario) -> Self {
        RunReport {
            tool: Tool { name: "qamlab", version: env!("CARGO_PKG_VERSION") },
            scenario,
            results: Vec::new(),
            consistency: None,
            notes: Vec::new(),
            error: None,
        }
    }

    pub fn density(&self) -> Option<&DensityReport> {
        self.results.iter().find_map(|r| match r {
            CheckResult::Density(d) => Some(d),
            _ => None,
        })
    }

    pub fn verdict(&self, check: &str) -> Option<&ConditionVerdict> {
        self.results.iter().find_map(|r| match (r, check) {
            (CheckResult::Cond2(v), "cond2") | (CheckResult::Cond3(v), "cond3") | (CheckResult::Lemma5(v), "lemma5") => {
                Some(v)
            }
            (CheckResult::ConvexImage { verdict, .. }, "convex-image") => Some(verdict),
            _ => None,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Per-iteration density table; floats in scientific notation with 16
/// significant digits.
pub fn density_csv(d: &DensityReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &d.rows {
        writeln!(out, "{},{},{:.15e},{:.15e}", r.n, r.set_size, r.covering_radius, r.wall_ms).expect("string write");
    }
    out
}
