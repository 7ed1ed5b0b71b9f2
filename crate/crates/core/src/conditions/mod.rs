//! Sampled checkers for the density / interior-inclusion / hull-inclusion
//! equivalence and the small-subset covering property.

mod consistency;
mod density;
mod inclusion;
mod lemma5;
mod probes;

pub use consistency::{
    assess_consistency, consistency_report, interior_failure_is_gross, Consistency, ConsistencyParams,
    ConsistencyReport, Flag, Relation,
};
pub use density::{check_density, check_density_orbit, classify_density, DensityReport, DensityRow, DensityVerdict};
pub use inclusion::{check_condition_ii, check_condition_iii, SOURCE_INTERIOR_FRACTION};
pub use lemma5::{covering_subset, lemma5_property, MAX_SUBSET_SOURCE};
