use super::probes::{hull_grid, random_combinations, vertex_midpoints};
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::geometry::{convex_hull, distance_to_hull, PointSet, DEFAULT_HULL_TOL};
use crate::verdict::{ConditionKind, ConditionVerdict, VerdictParams, Witness};

/// Source points are kept for the interior check only when they clear
/// ∂conv(S) by this fraction of its diagonal.
pub const SOURCE_INTERIOR_FRACTION: f64 = 1e-3;

pub(crate) fn image_set(g: &Generator, s: &PointSet) -> Result<PointSet> {
    let rows = s.iter().map(|p| g.apply(p).map(|q| q.into_inner())).collect::<Result<Vec<_>>>()?;
    PointSet::from_points(s.dim(), rows, 0.0)
}

fn require_full_dimensional(s: &PointSet) -> Result<()> {
    let affine_dim = crate::geometry::affine_dimension(s);
    if affine_dim < s.dim() {
        return Err(Error::NotFullDimensional { affine_dim, k: s.dim() });
    }
    Ok(())
}

/// Probe order shared by both inclusion checks: hull vertices, vertex
/// midpoints, the centroid of S, a grid of conv(S), then random convex
/// combinations. The interior check filters this list, so every point it
/// tests is also tested by the hull check.
fn probes(s: &PointSet, sample_count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let h = convex_hull(s)?;
    let mut out: Vec<Vec<f64>> = h.vertices.to_rows();
    out.extend(vertex_midpoints(&h));
    out.push(s.centroid());
    out.extend(hull_grid(&h, sample_count)?.to_rows());
    out.extend(random_combinations(&h, sample_count, seed));
    Ok(out)
}

/// Sampled check of f[int conv S] ⊆ int conv f[S]: a probe fails when the
/// margin probes around f(p) leave conv f[S]. `margin` is in source units
/// and is rescaled by the ratio of image to source diameters, so a map that
/// shrinks S to a tiny patch is not failed for its size alone. The witness
/// margin is the largest distance from those probes (and f(p)) to conv f[S].
pub fn check_condition_ii(
    g: &Generator,
    s: &PointSet,
    sample_count: usize,
    margin: f64,
    seed: u64,
) -> Result<ConditionVerdict> {
    require_full_dimensional(s)?;
    if !(margin > 0.0) {
        return Err(Error::InvalidParameter(format!("margin must be positive, got {margin}")));
    }
    let source = convex_hull(s)?;
    let fs = image_set(g, s)?;
    let image = convex_hull(&fs)?;
    let filter = SOURCE_INTERIOR_FRACTION * source.scale;
    let image_margin = margin * image.scale / source.scale;
    let mut tested = 0;
    let mut witness = None;
    for p in probes(s, sample_count, seed)? {
        if !source.contains_interior(&p, filter, DEFAULT_HULL_TOL)? {
            continue;
        }
        tested += 1;
        let q = g.apply(&p)?.into_inner();
        if image.contains_interior(&q, image_margin, DEFAULT_HULL_TOL)? {
            continue;
        }
        let violation = probe_violation(&q, &fs, image_margin)?;
        if violation > DEFAULT_HULL_TOL {
            witness = Some(Witness {
                point: p,
                partner: None,
                image: q,
                margin: violation,
                note: Some("margin ball around the image leaves the image hull".into()),
            });
            break;
        }
    }
    let params = VerdictParams {
        tolerance: DEFAULT_HULL_TOL,
        margin: Some(margin),
        sample_count,
        samples_tested: tested,
        seed,
    };
    let verdict = ConditionVerdict::new(ConditionKind::InteriorInclusion, witness, params);
    Ok(if image.is_full_dimensional() {
        verdict.with_note(format!(
            "interior proxy: margin {image_margin:e} in the image, source filter {filter:e}; surrogate size {}",
            s.len()
        ))
    } else {
        verdict.with_note(format!(
            "f[S] has affine dimension {} < {}: its hull has empty interior",
            image.affine_dim,
            s.dim()
        ))
    })
}

/// Largest distance to conv(V) over `q` and its 2k margin probes.
fn probe_violation(q: &[f64], v: &PointSet, margin: f64) -> Result<f64> {
    let mut worst = distance_to_hull(q, v)?;
    let mut probe = q.to_vec();
    for i in 0..q.len() {
        for sgn in [margin, -margin] {
            probe[i] = q[i] + sgn;
            worst = worst.max(distance_to_hull(&probe, v)?);
        }
        probe[i] = q[i];
    }
    Ok(worst)
}

/// Sampled check of f[conv S] ⊆ conv f[S]. The witness margin is the
/// Euclidean distance from f(p) to conv f[S].
pub fn check_condition_iii(
    g: &Generator,
    s: &PointSet,
    sample_count: usize,
    tol: f64,
    seed: u64,
) -> Result<ConditionVerdict> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if s.dim() != g.dim {
        return Err(Error::DimensionMismatch { expected: g.dim, found: s.dim() });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let fs = image_set(g, s)?;
    let image = convex_hull(&fs)?;
    let mut tested = 0;
    let mut witness = None;
    for p in probes(s, sample_count, seed)? {
        tested += 1;
        let q = g.apply(&p)?.into_inner();
        if image.contains(&q, tol)? {
            continue;
        }
        let distance = distance_to_hull(&q, &fs)?;
        if distance > tol {
            witness = Some(Witness {
                point: p,
                partner: None,
                image: q,
                margin: distance,
                note: Some("distance from the image point to the image hull".into()),
            });
            break;
        }
    }
    let params = VerdictParams { tolerance: tol, margin: None, sample_count, samples_tested: tested, seed };
    Ok(ConditionVerdict::new(ConditionKind::HullInclusion, witness, params)
        .with_note(format!("surrogate size {}", s.len())))
}
