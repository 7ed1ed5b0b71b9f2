use nalgebra::{DMatrix, DVector};

use super::hull::affine_dimension;
use super::lp::feasible_combination;
use super::{dot, PointSet};
use crate::error::{Error, Result};

/// Default LP feasibility tolerance.
pub const DEFAULT_HULL_TOL: f64 = 1e-9;

/// `p ∈ conv(V)` up to the phase-one residual `tol`.
pub fn in_hull(p: &[f64], v: &PointSet, tol: f64) -> Result<bool> {
    v.check_dim(p)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    Ok(feasible_combination(p, v.flat(), v.dim(), tol)?.feasible)
}

/// Margin-ball interior proxy: conv(V) is k-dimensional and `p` together
/// with the 2k probes `p ± margin·eᵢ` are all in the hull. The probes span
/// the ℓ¹ ball of radius `margin`, so this is a quantitative stand-in for
/// topological interior and it can misclassify points within `margin` of
/// the boundary.
pub fn in_interior(p: &[f64], v: &PointSet, margin: f64) -> Result<bool> {
    v.check_dim(p)?;
    if !(margin > 0.0) {
        return Err(Error::InvalidParameter(format!("margin must be positive, got {margin}")));
    }
    if affine_dimension(v) < v.dim() {
        return Ok(false);
    }
    if !in_hull(p, v, DEFAULT_HULL_TOL)? {
        return Ok(false);
    }
    let mut q = p.to_vec();
    for i in 0..p.len() {
        for s in [margin, -margin] {
            q[i] = p[i] + s;
            if !in_hull(&q, v, DEFAULT_HULL_TOL)? {
                return Ok(false);
            }
        }
        q[i] = p[i];
    }
    Ok(true)
}

/// Euclidean distance from `p` to conv(V), by Wolfe's nearest-point
/// algorithm on the translated points `vᵢ − p`.
pub fn distance_to_hull(p: &[f64], v: &PointSet) -> Result<f64> {
    v.check_dim(p)?;
    if v.is_empty() {
        return Err(Error::EmptySet);
    }
    let k = v.dim();
    let ys: Vec<Vec<f64>> =
        v.iter().map(|q| q.iter().zip(p).map(|(a, b)| a - b).collect()).collect();
    let max_norm2 = ys.iter().map(|y| dot(y, y)).fold(0.0_f64, f64::max);
    if max_norm2 == 0.0 {
        return Ok(0.0);
    }
    let eps = 1e-13 * max_norm2;

    let j0 = (0..ys.len()).min_by(|&a, &b| dot(&ys[a], &ys[a]).total_cmp(&dot(&ys[b], &ys[b])));
    let mut active = vec![j0.unwrap_or(0)];
    let mut lambda = vec![1.0];
    let combine = |active: &[usize], lambda: &[f64]| {
        let mut x = vec![0.0; k];
        for (&i, &l) in active.iter().zip(lambda) {
            for j in 0..k {
                x[j] += l * ys[i][j];
            }
        }
        x
    };
    let mut x = combine(&active, &lambda);

    for _ in 0..(100 * (ys.len() + k) + 1000) {
        let xx = dot(&x, &x);
        if xx <= eps {
            return Ok(0.0);
        }
        let (j, xy) = ys
            .iter()
            .enumerate()
            .map(|(j, y)| (j, dot(&x, y)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if xx - xy <= eps || active.contains(&j) {
            return Ok(xx.sqrt());
        }
        active.push(j);
        lambda.push(0.0);

        loop {
            let Some(mu) = affine_minimizer(&ys, &active) else {
                return Ok(xx.sqrt());
            };
            if mu.iter().all(|&m| m > 1e-14) {
                lambda = mu;
                break;
            }
            let mut theta = 1.0_f64;
            for (&l, &m) in lambda.iter().zip(&mu) {
                if m <= 1e-14 && l - m > 0.0 {
                    theta = theta.min(l / (l - m));
                }
            }
            for (l, m) in lambda.iter_mut().zip(&mu) {
                *l = (1.0 - theta) * *l + theta * m;
            }
            let mut i = 0;
            let mut removed = false;
            while i < active.len() {
                if lambda[i] <= 1e-14 {
                    active.remove(i);
                    lambda.remove(i);
                    removed = true;
                } else {
                    i += 1;
                }
            }
            if !removed {
                // numerically stuck: drop the smallest weight
                let (imin, _) = lambda
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .expect("nonempty");
                active.remove(imin);
                lambda.remove(imin);
            }
            let s: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= s);
        }
        x = combine(&active, &lambda);
    }
    Err(Error::NumericalFailure("nearest-point iteration did not converge".into()))
}

/// Minimizer of ‖Σμᵢyᵢ‖ over the affine hull of the active points.
fn affine_minimizer(ys: &[Vec<f64>], active: &[usize]) -> Option<Vec<f64>> {
    let s = active.len();
    if s == 1 {
        return Some(vec![1.0]);
    }
    let mut m = DMatrix::zeros(s + 1, s + 1);
    for a in 0..s {
        for b in 0..s {
            m[(a, b)] = dot(&ys[active[a]], &ys[active[b]]);
        }
        m[(a, s)] = 1.0;
        m[(s, a)] = 1.0;
    }
    let mut rhs = DVector::zeros(s + 1);
    rhs[s] = 1.0;
    let sol = m.lu().solve(&rhs)?;
    let mu: Vec<f64> = sol.iter().take(s).copied().collect();
    mu.iter().all(|x| x.is_finite()).then_some(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cross(k: usize, skip: Option<usize>) -> PointSet {
        let mut rows = Vec::new();
        for i in 0..k {
            for s in [1.0, -1.0] {
                let mut e = vec![0.0; k];
                e[i] = s;
                rows.push(e);
            }
        }
        if let Some(s) = skip {
            rows.remove(s);
        }
        PointSet::from_rows(&rows).unwrap()
    }

    #[test]
    fn membership_examples() {
        let unit = PointSet::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        assert!(in_hull(&[0.5], &unit, 1e-9).unwrap());
        let seg = PointSet::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(!in_hull(&[1.5, 4.5], &seg, 1e-9).unwrap());
        assert!(in_hull(&[0.0, 0.0], &cross(2, None), 1e-9).unwrap());
    }

    #[test]
    fn interior_examples() {
        assert!(in_interior(&[0.0, 0.0], &cross(2, None), 1e-6).unwrap());
        // {e1, -e1, e2}
        assert!(!in_interior(&[0.0, 0.0], &cross(2, Some(3)), 1e-6).unwrap());
        let unit = PointSet::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        assert!(!in_interior(&[1.0], &unit, 1e-6).unwrap());
        assert!(in_interior(&[0.5], &unit, 1e-6).unwrap());
    }

    #[test]
    fn parameter_checks() {
        let unit = PointSet::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        assert!(in_hull(&[0.5], &unit, 0.0).is_err());
        assert!(in_interior(&[0.5], &unit, -1.0).is_err());
        assert!(matches!(in_hull(&[0.5, 0.5], &unit, 1e-9), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn distance_to_segment_and_square() {
        let seg = PointSet::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        // nearest point is the endpoint (2, 4)
        let d = distance_to_hull(&[1.5, 4.5], &seg).unwrap();
        assert!((d - 0.5f64.sqrt()).abs() < 1e-12, "{d}");
        let sq = PointSet::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(distance_to_hull(&[0.3, 0.6], &sq).unwrap(), 0.0);
        assert!((distance_to_hull(&[2.0, 0.5], &sq).unwrap() - 1.0).abs() < 1e-12);
        assert!((distance_to_hull(&[2.0, 2.0], &sq).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }
}
