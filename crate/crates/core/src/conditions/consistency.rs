use serde::Serialize;

use super::density::{check_density, DensityReport, DensityVerdict};
use super::inclusion::{check_condition_ii, check_condition_iii, image_set};
use crate::error::Result;
use crate::generators::Generator;
use crate::geometry::{distance_to_hull, PointSet};
use crate::means::{OrbitParams, Weights};
use crate::verdict::ConditionVerdict;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyParams {
    pub iterations: usize,
    pub grid_resolution: f64,
    pub orbit: OrbitParams,
    pub sample_count: usize,
    /// Interior margin for the interior-inclusion check.
    pub margin: f64,
    /// Hull tolerance for the hull-inclusion check.
    pub tolerance: f64,
    pub seed: u64,
    /// S is a finite stand-in for a non-compact set: only the implication
    /// that survives without compactness is enforced.
    pub noncompact_surrogate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Flag {
    TheoremViolation,
    NoncompactSurrogate,
    DensityInconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Relation {
    /// e.g. "density <=> interior-inclusion".
    pub relation: &'static str,
    pub enforced: bool,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Consistency {
    pub flags: Vec<Flag>,
    pub relations: Vec<Relation>,
    pub consistent: bool,
}

impl Consistency {
    pub fn theorem_violation(&self) -> bool {
        self.flags.contains(&Flag::TheoremViolation)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub density: DensityReport,
    pub interior_inclusion: ConditionVerdict,
    pub hull_inclusion: ConditionVerdict,
    pub consistency: Consistency,
}

/// Whether a failed interior-inclusion witness shows f(p) outside
/// conv f[S] by more than `tol` (rather than merely near its boundary).
pub fn interior_failure_is_gross(
    g: &Generator,
    s: &PointSet,
    ii: &ConditionVerdict,
    tol: f64,
) -> Result<bool> {
    match &ii.witness {
        Some(w) if ii.fails() => Ok(distance_to_hull(&w.image, &image_set(g, s)?)? > tol),
        _ => Ok(false),
    }
}

/// Cross-checks the verdicts against the theorem. For finite S density,
/// interior inclusion and hull inclusion must agree. The direction
/// hull inclusion ⇒ interior inclusion holds without compactness and is
/// always enforced; for a non-compact surrogate it is the only one.
/// Since the interior check's probes are a subset of the hull check's,
/// that direction is judged on gross failures: f(p) outside conv f[S].
pub fn assess_consistency(
    density: DensityVerdict,
    ii: &ConditionVerdict,
    iii: &ConditionVerdict,
    ii_gross_failure: bool,
    noncompact_surrogate: bool,
) -> Consistency {
    let mut flags = Vec::new();
    let mut relations = Vec::new();
    let dense = match density {
        DensityVerdict::DenseAtResolution => Some(true),
        DensityVerdict::NotDense => Some(false),
        DensityVerdict::Inconclusive => {
            flags.push(Flag::DensityInconclusive);
            None
        }
    };
    relations.push(Relation {
        relation: "hull-inclusion => interior-inclusion",
        enforced: true,
        satisfied: !(iii.holds() && ii_gross_failure),
    });
    if let Some(d) = dense {
        relations.push(Relation {
            relation: "density <=> interior-inclusion",
            enforced: !noncompact_surrogate,
            satisfied: d == ii.holds(),
        });
        relations.push(Relation {
            relation: "density <=> hull-inclusion",
            enforced: !noncompact_surrogate,
            satisfied: d == iii.holds(),
        });
    }
    relations.push(Relation {
        relation: "interior-inclusion => hull-inclusion",
        enforced: !noncompact_surrogate,
        satisfied: !(ii.holds() && iii.fails()),
    });
    let consistent = relations.iter().all(|r| !r.enforced || r.satisfied);
    if !consistent {
        flags.push(Flag::TheoremViolation);
    }
    if noncompact_surrogate {
        flags.push(Flag::NoncompactSurrogate);
    }
    Consistency { flags, relations, consistent }
}

/// Runs density, interior inclusion and hull inclusion and cross-checks them.
pub fn consistency_report(
    g: &Generator,
    w: &Weights,
    s: &PointSet,
    p: &ConsistencyParams,
) -> Result<ConsistencyReport> {
    let density = check_density(g, w, s, p.iterations, p.grid_resolution, &p.orbit)?;
    let ii = check_condition_ii(g, s, p.sample_count, p.margin, p.seed)?;
    let iii = check_condition_iii(g, s, p.sample_count, p.tolerance, p.seed)?;
    let gross = interior_failure_is_gross(g, s, &ii, p.tolerance)?;
    let consistency = assess_consistency(density.verdict, &ii, &iii, gross, p.noncompact_surrogate);
    Ok(ConsistencyReport { density, interior_inclusion: ii, hull_inclusion: iii, consistency })
}
