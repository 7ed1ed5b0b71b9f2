//! Quasi-arithmetic means, the mean operator and its iterated orbits.

mod orbit;
mod qam;
mod weight_orbit;
mod weights;

pub use orbit::{is_fixed_point, iterate, mean_step, OrbitParams, OrbitState};
pub use qam::qam;
pub use weight_orbit::{simplex_grid, weight_orbit, WeightOrbit, SIMPLEX_GRID_PITCH};
pub use weights::{parse_fraction, SimplexWeights, Weights};
