//! Deterministic probe sets for the sampled checkers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{grid_sample, Hull, PointSet};

const MAX_PROBE_GRID: usize = 200_000;

/// Grid pitch giving roughly `count` grid points in the hull's bounding box.
pub(crate) fn grid_pitch(h: &Hull, count: usize) -> f64 {
    let (lo, hi) = h.bounding_box();
    let k = lo.len() as f64;
    let volume: f64 = lo.iter().zip(&hi).map(|(a, b)| (b - a).max(h.scale * 1e-9)).product();
    (volume / count.max(1) as f64).powf(1.0 / k)
}

/// Grid points of conv(S) at a pitch tied to `count`; empty for
/// degenerate hulls or grids that come out too large or too coarse.
pub(crate) fn hull_grid(h: &Hull, count: usize) -> Result<PointSet> {
    if !h.is_full_dimensional() || count == 0 {
        return Ok(PointSet::empty(h.dim()));
    }
    let mut pitch = grid_pitch(h, count);
    loop {
        match grid_sample(h, pitch, false) {
            Ok(g) if g.len() <= MAX_PROBE_GRID => return Ok(g),
            Ok(_) | Err(Error::BudgetExceeded(_)) => pitch *= 1.5,
            Err(Error::ResolutionTooCoarse { .. }) => return Ok(PointSet::empty(h.dim())),
            Err(e) => return Err(e),
        }
    }
}

/// Seeded random convex combinations of the hull vertices with uniform
/// (Dirichlet(1,…,1)) weights.
pub(crate) fn random_combinations(h: &Hull, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = &h.vertices;
    let k = v.dim();
    (0..count)
        .map(|_| {
            let raw: Vec<f64> = (0..v.len()).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            let total: f64 = raw.iter().sum();
            let mut p = vec![0.0; k];
            for (w, q) in raw.iter().zip(v.iter()) {
                for (pi, qi) in p.iter_mut().zip(q) {
                    *pi += w / total * qi;
                }
            }
            p
        })
        .collect()
}

/// Pairwise midpoints of the hull vertices, i < j.
pub(crate) fn vertex_midpoints(h: &Hull) -> Vec<Vec<f64>> {
    let v = &h.vertices;
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            out.push(v.point(i).iter().zip(v.point(j)).map(|(a, b)| 0.5 * (a + b)).collect());
        }
    }
    out
}
