use super::inclusion::image_set;
use super::probes::random_combinations;
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::geometry::{affine_dimension, convex_hull, distance_to_hull, PointSet};
use crate::verdict::{ConditionKind, ConditionVerdict, VerdictParams, Witness};

/// Subset enumeration is exponential in |S|.
pub const MAX_SUBSET_SOURCE: usize = 12;

/// First T ⊆ S (sizes k+1..=2k, lexicographic) whose image f[T] is
/// k-dimensional and has `q` within `margin` of its hull, i.e. q lies in
/// the closure of int conv f[T] up to the margin. Returns the indices of T.
pub fn covering_subset(fs: &PointSet, q: &[f64], margin: f64) -> Result<Option<Vec<usize>>> {
    let k = fs.dim();
    let n = fs.len();
    if n > MAX_SUBSET_SOURCE {
        return Err(Error::BudgetExceeded(format!(
            "subset search over {n} points (at most {MAX_SUBSET_SOURCE})"
        )));
    }
    for size in (k + 1)..=(2 * k).min(n) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let t = fs.select(&combo);
            if affine_dimension(&t) == k && distance_to_hull(q, &t)? <= margin {
                return Ok(Some(combo));
            }
            if !crate::geometry::next_combination(&mut combo, n) {
                break;
            }
        }
    }
    Ok(None)
}

/// Sampled check that every p with f(p) ∈ int conv f[S] is covered by
/// some k-dimensional f[T] with |T| ≤ 2k. Samples are image-side: the
/// centroid of f[S] and positive convex combinations of its vertices,
/// pulled back through f⁻¹ (points outside f[C] are skipped).
pub fn lemma5_property(
    g: &Generator,
    s: &PointSet,
    sample_count: usize,
    margin: f64,
    seed: u64,
) -> Result<ConditionVerdict> {
    if s.len() > MAX_SUBSET_SOURCE {
        return Err(Error::BudgetExceeded(format!(
            "subset search over {} points (at most {MAX_SUBSET_SOURCE})",
            s.len()
        )));
    }
    if !(margin > 0.0) {
        return Err(Error::InvalidParameter(format!("margin must be positive, got {margin}")));
    }
    let fs = image_set(g, s)?;
    let image = convex_hull(&fs)?;
    let params = |tested| VerdictParams {
        tolerance: margin,
        margin: Some(margin),
        sample_count,
        samples_tested: tested,
        seed,
    };
    if !image.is_full_dimensional() {
        return Ok(ConditionVerdict::new(ConditionKind::SubsetCover, None, params(0))
            .with_note("int conv f[S] is empty; nothing to cover"));
    }
    let mut candidates = vec![fs.centroid()];
    candidates.extend(random_combinations(&image, sample_count, seed));
    let mut tested = 0;
    let mut witness = None;
    for q in candidates {
        let Ok(p) = g.invert(&q) else { continue };
        tested += 1;
        if covering_subset(&fs, &q, margin)?.is_none() {
            let best = best_distance(&fs, &q)?;
            witness = Some(Witness {
                point: p.into_inner(),
                partner: None,
                image: q,
                margin: best,
                note: Some("smallest distance to any k-dimensional f[T], |T| <= 2k".into()),
            });
            break;
        }
    }
    Ok(ConditionVerdict::new(ConditionKind::SubsetCover, witness, params(tested)))
}

fn best_distance(fs: &PointSet, q: &[f64]) -> Result<f64> {
    let k = fs.dim();
    let n = fs.len();
    let mut best = f64::INFINITY;
    for size in (k + 1)..=(2 * k).min(n) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let t = fs.select(&combo);
            if affine_dimension(&t) == k {
                best = best.min(distance_to_hull(q, &t)?);
            }
            if !crate::geometry::next_combination(&mut combo, n) {
                break;
            }
        }
    }
    Ok(best)
}
