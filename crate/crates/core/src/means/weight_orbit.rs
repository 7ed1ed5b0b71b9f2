use serde::Serialize;

use super::orbit::{iterate, OrbitParams};
use super::weights::{SimplexWeights, Weights};
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::geometry::{covering_radius, PointSet};

/// Pitch of the reference grid on the simplex, in barycentric coordinates.
pub const SIMPLEX_GRID_PITCH: f64 = 0.02;
const WEIGHT_DELTA: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightOrbit {
    pub h: usize,
    /// Requested depth.
    pub n: usize,
    /// Depth actually reached (smaller once the orbit stops growing).
    pub depth: usize,
    /// Orbit points as rows of length h.
    pub weights: PointSet,
    /// Covering radius of the reference grid by the orbit.
    pub radius: f64,
    pub saturated: bool,
    pub sampled: bool,
}

impl WeightOrbit {
    pub fn simplex_weights(&self) -> Vec<SimplexWeights> {
        self.weights
            .iter()
            .map(|w| SimplexWeights::new(w.to_vec()).expect("orbit stays on the simplex"))
            .collect()
    }
}

/// All points of the simplex in ℝʰ whose coordinates are multiples of
/// 1/`parts`, in lexicographic order.
pub fn simplex_grid(h: usize, parts: usize) -> PointSet {
    fn rec(h: usize, left: usize, parts: usize, prefix: &mut Vec<f64>, out: &mut PointSet) {
        if h == 1 {
            prefix.push(left as f64 / parts as f64);
            out.push_unchecked(prefix);
            prefix.pop();
            return;
        }
        for i in 0..=left {
            prefix.push(i as f64 / parts as f64);
            rec(h - 1, left - i, parts, prefix, out);
            prefix.pop();
        }
    }
    let mut out = PointSet::empty(h);
    rec(h, parts, parts, &mut Vec::with_capacity(h), &mut out);
    out
}

/// Orbit of the unit vectors e₁,…,e_h under γ ↦ Σⱼαⱼγ⁽ʲ⁾ after n rounds,
/// with its covering radius against the pitch-0.02 reference grid.
/// Beyond the tuple budget rounds are subsampled, so the orbit is a
/// subset of the exact one and the radius an upper bound.
pub fn weight_orbit(w: &Weights, h: usize, n: usize, params: &OrbitParams) -> Result<WeightOrbit> {
    if h < 2 {
        return Err(Error::InvalidParameter(format!("simplex needs h >= 2, got {h}")));
    }
    let units = PointSet::from_points(
        h,
        (0..h).map(|i| {
            let mut e = vec![0.0; h];
            e[i] = 1.0;
            e
        }),
        0.0,
    )?;
    let params = OrbitParams { delta: WEIGHT_DELTA, ..*params };
    let states = iterate(&Generator::identity(h), w, &units, n, &params)?;
    let last = states.last().expect("iterate returns the initial state");
    let grid = simplex_grid(h, (1.0 / SIMPLEX_GRID_PITCH).round() as usize);
    let radius = covering_radius(&grid, &last.set)?;
    Ok(WeightOrbit {
        h,
        n,
        depth: last.generation,
        weights: last.set.clone(),
        radius,
        saturated: states.iter().any(|s| s.saturated),
        sampled: states.iter().any(|s| s.sampled),
    })
}
