use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::geometry::{convex_hull, covering_radius, grid_sample, PointSet, DEFAULT_HULL_TOL};
use crate::means::{mean_step, OrbitParams, OrbitState, Weights};

/// Dense once the radius is within this multiple of the resolution.
const DENSE_FACTOR: f64 = 2.0;
/// A stalled radius only signals an obstruction above this multiple of
/// the grid pitch.
const STALL_FACTOR: f64 = 5.0;
const STALL_CHANGE: f64 = 0.01;
const STALL_STEPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityVerdict {
    DenseAtResolution,
    NotDense,
    /// Neither dense nor visibly stalled within the iteration budget.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityRow {
    pub n: usize,
    pub set_size: usize,
    /// Covering radius of the conv(S) grid by orbit points inside conv(S).
    pub covering_radius: f64,
    /// Wall time of the step; excluded from serialized reports so they stay
    /// reproducible.
    #[serde(skip)]
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub rows: Vec<DensityRow>,
    pub verdict: DensityVerdict,
    /// max(grid resolution, δ): the scale density is claimed at.
    pub resolution: f64,
    pub grid_resolution: f64,
    pub delta: f64,
    pub grid_points: usize,
    /// Generation after which the orbit stopped changing at resolution δ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged_at: Option<usize>,
    pub saturated: bool,
    pub sampled: bool,
    pub seed: u64,
}

impl DensityReport {
    pub fn final_radius(&self) -> f64 {
        self.rows.last().map_or(f64::INFINITY, |r| r.covering_radius)
    }

    pub fn is_dense(&self) -> bool {
        self.verdict == DensityVerdict::DenseAtResolution
    }
}

/// Decides the verdict from a radius sequence.
pub fn classify_density(radii: &[f64], grid_resolution: f64, delta: f64, converged: bool) -> DensityVerdict {
    let Some(&last) = radii.last() else { return DensityVerdict::Inconclusive };
    if last <= DENSE_FACTOR * grid_resolution.max(delta) {
        return DensityVerdict::DenseAtResolution;
    }
    if last > STALL_FACTOR * grid_resolution {
        let stalled = radii.len() > STALL_STEPS
            && radii[radii.len() - STALL_STEPS - 1..]
                .windows(2)
                .all(|w| (w[0] - w[1]).abs() < STALL_CHANGE * w[0]);
        if converged || stalled {
            return DensityVerdict::NotDense;
        }
    }
    DensityVerdict::Inconclusive
}

/// Iterates the orbit of S and tracks its covering radius against a grid
/// of conv(S). Only orbit points within conv(S) count as cover, matching
/// density relative to conv(S).
pub fn check_density(
    g: &Generator,
    w: &Weights,
    s: &PointSet,
    n_max: usize,
    grid_resolution: f64,
    params: &OrbitParams,
) -> Result<DensityReport> {
    check_density_orbit(g, w, s, n_max, grid_resolution, params).map(|(r, _)| r)
}

/// [`check_density`], also returning the last orbit state.
pub fn check_density_orbit(
    g: &Generator,
    w: &Weights,
    s: &PointSet,
    n_max: usize,
    grid_resolution: f64,
    params: &OrbitParams,
) -> Result<(DensityReport, OrbitState)> {
    let hull = convex_hull(s)?;
    if !hull.is_full_dimensional() {
        return Err(Error::NotFullDimensional { affine_dim: hull.affine_dim, k: s.dim() });
    }
    let grid = grid_sample(&hull, grid_resolution, false)?;
    let inside_tol = DEFAULT_HULL_TOL.max(1e-12 * hull.scale);
    let radius = |state: &OrbitState| -> Result<f64> {
        let mut cover = PointSet::empty(s.dim());
        for p in state.set.iter() {
            if hull.contains(p, inside_tol)? {
                cover.push_unchecked(p);
            }
        }
        covering_radius(&grid, &cover)
    };

    let start = Instant::now();
    let mut state = OrbitState::initial(g, s, params.delta)?;
    let mut rows = vec![DensityRow {
        n: 0,
        set_size: state.len(),
        covering_radius: radius(&state)?,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    }];
    let mut converged_at = None;
    let mut sampled = false;
    for n in 1..=n_max {
        let t = Instant::now();
        let next = mean_step(g, w, &state, params)?;
        let grew = next.len() > state.len();
        sampled |= next.sampled;
        state = next;
        rows.push(DensityRow {
            n,
            set_size: state.len(),
            covering_radius: radius(&state)?,
            wall_ms: t.elapsed().as_secs_f64() * 1e3,
        });
        if !grew {
            if !state.saturated {
                converged_at = Some(n - 1);
            }
            break;
        }
    }
    let radii: Vec<f64> = rows.iter().map(|r| r.covering_radius).collect();
    let report = DensityReport {
        verdict: classify_density(&radii, grid_resolution, params.delta, converged_at.is_some()),
        rows,
        resolution: grid_resolution.max(params.delta),
        grid_resolution,
        delta: params.delta,
        grid_points: grid.len(),
        converged_at,
        saturated: state.saturated,
        sampled,
        seed: params.seed,
    };
    Ok((report, state))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_radii() {
        let g = Generator::identity(1);
        let w = Weights::new(vec![0.5, 0.5]).unwrap();
        let s = PointSet::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let r = check_density(&g, &w, &s, 5, 1.0 / 64.0, &OrbitParams::with_delta(0.0)).unwrap();
        for row in &r.rows {
            assert_eq!(row.covering_radius, 0.5f64.powi(row.n as i32 + 1));
        }
        assert!(r.is_dense());
    }

    #[test]
    fn classification() {
        assert_eq!(classify_density(&[0.5, 0.01], 0.01, 0.0, false), DensityVerdict::DenseAtResolution);
        assert_eq!(classify_density(&[0.5, 0.3, 0.3, 0.3, 0.3], 0.01, 0.0, false), DensityVerdict::NotDense);
        assert_eq!(classify_density(&[0.5, 0.3], 0.01, 0.0, true), DensityVerdict::NotDense);
        assert_eq!(classify_density(&[0.5, 0.3], 0.01, 0.0, false), DensityVerdict::Inconclusive);
    }

    #[test]
    fn degenerate_set_is_rejected() {
        let g = Generator::identity(2);
        let w = Weights::new(vec![0.5, 0.5]).unwrap();
        let s = PointSet::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert!(matches!(
            check_density(&g, &w, &s, 2, 0.1, &OrbitParams::with_delta(1e-3)),
            Err(Error::NotFullDimensional { .. })
        ));
    }
}
