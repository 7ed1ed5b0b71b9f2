use rayon::prelude::*;
use serde::Serialize;

use super::hull::Hull;
use super::membership::DEFAULT_HULL_TOL;
use super::nearest::KdTree;
use super::PointSet;
use crate::error::{Error, Result};

const MAX_GRID_POINTS: usize = 50_000_000;

/// Axis-aligned grid of pitch `resolution` anchored at the hull's
/// bounding-box min corner, restricted to the hull (or to its margin
/// interior when `interior_only`, margin 10⁻⁶ of the hull scale).
pub fn grid_sample(h: &Hull, resolution: f64, interior_only: bool) -> Result<PointSet> {
    let k = h.dim();
    if !h.is_full_dimensional() {
        return Err(Error::NotFullDimensional { affine_dim: h.affine_dim, k });
    }
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::InvalidParameter(format!("grid resolution must be positive, got {resolution}")));
    }
    let (lo, hi) = h.bounding_box();
    let counts: Vec<usize> =
        lo.iter().zip(&hi).map(|(a, b)| ((b - a) / resolution + 1e-9).floor() as usize + 1).collect();
    let total = counts.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c)).unwrap_or(usize::MAX);
    if total > MAX_GRID_POINTS {
        return Err(Error::BudgetExceeded(format!(
            "grid of pitch {resolution} has {total} candidate points"
        )));
    }
    let margin = 1e-6 * h.scale;
    let kept: Vec<Option<Vec<f64>>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rem = flat;
            let mut p = vec![0.0; k];
            for j in (0..k).rev() {
                let i = rem % counts[j];
                rem /= counts[j];
                p[j] = lo[j] + i as f64 * resolution;
            }
            let inside = if interior_only {
                h.contains_interior(&p, margin, DEFAULT_HULL_TOL)
            } else {
                h.contains(&p, DEFAULT_HULL_TOL)
            };
            inside.map(|ok| ok.then_some(p))
        })
        .collect::<Result<_>>()?;
    let mut out = PointSet::empty(k);
    for p in kept.into_iter().flatten() {
        out.push_unchecked(&p);
    }
    if out.is_empty() {
        return Err(Error::ResolutionTooCoarse { resolution });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverDetail {
    pub radius: f64,
    /// Target attaining the radius (first index on ties).
    pub target: usize,
    /// Its nearest cover point.
    pub nearest: usize,
}

/// Directed Hausdorff distance max_t min_c ‖t − c‖ with the argmax.
pub fn covering_radius_detail(targets: &PointSet, cover: &PointSet) -> Result<CoverDetail> {
    if targets.is_empty() || cover.is_empty() {
        return Err(Error::EmptySet);
    }
    if targets.dim() != cover.dim() {
        return Err(Error::DimensionMismatch { expected: targets.dim(), found: cover.dim() });
    }
    let tree = KdTree::new(cover);
    let (target, (nearest, d2)) = (0..targets.len())
        .into_par_iter()
        .map(|i| (i, tree.nearest(targets.point(i)).expect("nonempty cover")))
        .reduce(
            || (usize::MAX, (usize::MAX, f64::NEG_INFINITY)),
            |a, b| {
                if b.1 .1 > a.1 .1 || (b.1 .1 == a.1 .1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(CoverDetail { radius: d2.sqrt(), target, nearest })
}

pub fn covering_radius(targets: &PointSet, cover: &PointSet) -> Result<f64> {
    covering_radius_detail(targets, cover).map(|d| d.radius)
}

/// Symmetric Hausdorff distance between two finite sets.
pub fn hausdorff_distance(a: &PointSet, b: &PointSet) -> Result<f64> {
    Ok(covering_radius(a, b)?.max(covering_radius(b, a)?))
}

#[cfg(test)]
mod tests {
    use super::super::hull::convex_hull;
    use super::*;

    fn line(values: &[f64]) -> PointSet {
        PointSet::from_points(1, values.iter().map(|v| [*v]), 0.0).unwrap()
    }

    #[test]
    fn interval_grid() {
        let h = convex_hull(&line(&[0.0, 1.0])).unwrap();
        let g = grid_sample(&h, 0.25, false).unwrap();
        assert_eq!(g.flat(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn square_interior_grid() {
        let sq = PointSet::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let h = convex_hull(&sq).unwrap();
        let g = grid_sample(&h, 0.5, true).unwrap();
        assert_eq!(g.to_rows(), vec![vec![0.5, 0.5]]);
        assert_eq!(grid_sample(&h, 0.5, false).unwrap().len(), 9);
    }

    #[test]
    fn degenerate_hull_rejected() {
        let seg = PointSet::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        let h = convex_hull(&seg).unwrap();
        assert!(matches!(grid_sample(&h, 0.1, false), Err(Error::NotFullDimensional { .. })));
    }

    #[test]
    fn coarse_interior_grid_is_an_error() {
        let h = convex_hull(&line(&[0.0, 1.0])).unwrap();
        assert!(matches!(grid_sample(&h, 2.0, true), Err(Error::ResolutionTooCoarse { .. })));
    }

    #[test]
    fn covering_radius_examples() {
        assert_eq!(covering_radius(&line(&[0.0, 0.5, 1.0]), &line(&[0.0, 1.0])).unwrap(), 0.5);
        let a = line(&[0.0, 0.3, 1.0]);
        assert_eq!(covering_radius(&a, &a).unwrap(), 0.0);
        let grid: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0).collect();
        assert_eq!(covering_radius(&line(&grid), &line(&[0.0, 0.5, 1.0])).unwrap(), 0.25);
    }

    #[test]
    fn detail_reports_first_maximizer() {
        let d = covering_radius_detail(&line(&[0.25, 0.75]), &line(&[0.0, 0.5, 1.0])).unwrap();
        assert_eq!(d.radius, 0.25);
        assert_eq!(d.target, 0);
        assert!(hausdorff_distance(&line(&[0.0]), &line(&[0.0, 2.0])).unwrap() == 2.0);
    }
}
