//! Checker outcomes shared by the generator validators and the condition
//! checkers.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionKind {
    /// Orbit density in conv(S).
    Density,
    /// f[int conv S] ⊆ int conv f[S].
    InteriorInclusion,
    /// f[conv S] ⊆ conv f[S].
    HullInclusion,
    /// f[C] is convex.
    ConvexImage,
    /// Interior points of conv f[S] are covered by hulls of ≤ 2k image points.
    SubsetCover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    HoldsUpToSampling,
    Fails,
}

/// A violating sample, in source and image coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub point: Vec<f64>,
    /// Second source point, for pairwise checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partner: Option<Vec<f64>>,
    pub image: Vec<f64>,
    /// Size of the violation, in image units unless the note says otherwise.
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictParams {
    /// Violations at or below this size are not reported.
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub sample_count: usize,
    pub samples_tested: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub condition: ConditionKind,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub params: VerdictParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ConditionVerdict {
    pub fn holds(&self) -> bool {
        self.status == Status::HoldsUpToSampling
    }

    pub fn fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub(crate) fn new(
        condition: ConditionKind,
        witness: Option<Witness>,
        params: VerdictParams,
    ) -> Self {
        let status = if witness.is_some() { Status::Fails } else { Status::HoldsUpToSampling };
        ConditionVerdict { condition, status, witness, params, note: None }
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}
