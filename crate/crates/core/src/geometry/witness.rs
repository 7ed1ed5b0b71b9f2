//! Small-subset witnesses for hull and interior membership.

use serde::Serialize;

use super::lp::feasible_combination;
use super::membership::{in_hull, in_interior, DEFAULT_HULL_TOL};
use super::{dist2, PointSet};
use crate::error::{Error, Result};

const ZERO_WEIGHT: f64 = 1e-15;
const MAX_SUBSETS: usize = 1_000_000;
const MARGIN_HALVINGS: u32 = 20;

/// Shrinks the support of a convex combination Σλᵢvᵢ to at most k+1
/// points by repeatedly moving along an affine dependence of the support.
/// Returns (indices into `v`, weights), indices ascending.
pub fn caratheodory_reduce(v: &PointSet, lambda: &[f64]) -> Result<(Vec<usize>, Vec<f64>)> {
    if lambda.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: v.len(), found: lambda.len() });
    }
    let k = v.dim();
    let mut support: Vec<usize> = (0..v.len()).filter(|&i| lambda[i] > ZERO_WEIGHT).collect();
    let mut w: Vec<f64> = support.iter().map(|&i| lambda[i]).collect();
    while support.len() > k + 1 {
        // any k+2 lifted points [vᵢ; 1] are linearly dependent
        let cols = &support[..k + 2];
        let mu = null_vector(v, cols);
        let mut t = f64::INFINITY;
        let mut arg = 0;
        for (j, &m) in mu.iter().enumerate() {
            if m > 0.0 && w[j] / m < t {
                t = w[j] / m;
                arg = j;
            }
        }
        if !t.is_finite() {
            return Err(Error::NumericalFailure("degenerate affine dependence".into()));
        }
        for (j, &m) in mu.iter().enumerate() {
            w[j] -= t * m;
        }
        w[arg] = 0.0;
        let mut i = 0;
        while i < support.len() {
            if w[i] <= ZERO_WEIGHT {
                support.remove(i);
                w.remove(i);
            } else {
                i += 1;
            }
        }
    }
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    Ok((support, w))
}

/// Nonzero μ with Σμⱼ[v_cⱼ; 1] = 0, by Gauss–Jordan elimination with
/// partial pivoting on the (k+1)×(k+2) lifted matrix.
fn null_vector(v: &PointSet, cols: &[usize]) -> Vec<f64> {
    let k = v.dim();
    let rows = k + 1;
    let n = cols.len();
    let mut m = vec![vec![0.0; n]; rows];
    for (j, &c) in cols.iter().enumerate() {
        for i in 0..k {
            m[i][j] = v.point(c)[i];
        }
        m[k][j] = 1.0;
    }
    let scale = m.iter().flatten().fold(0.0_f64, |a, x| a.max(x.abs())).max(1.0);
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == rows {
            break;
        }
        let (best, val) = (r..rows)
            .map(|i| (i, m[i][c].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("rows remain");
        if val <= 1e-12 * scale {
            continue;
        }
        m.swap(r, best);
        let p = m[r][c];
        m[r].iter_mut().for_each(|x| *x /= p);
        for i in 0..rows {
            if i != r && m[i][c] != 0.0 {
                let f = m[i][c];
                for j in 0..n {
                    m[i][j] -= f * m[r][j];
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free = (0..n).find(|c| !pivot_cols.contains(c)).expect("more columns than rows");
    let mut mu = vec![0.0; n];
    mu[free] = 1.0;
    for (row, &pc) in pivot_cols.iter().enumerate() {
        mu[pc] = -m[row][free];
    }
    mu
}

/// Subset U ⊆ V with |U| ≤ k+1 and p ∈ conv(U).
pub fn caratheodory_witness(p: &[f64], v: &PointSet) -> Result<PointSet> {
    v.check_dim(p)?;
    let tol = DEFAULT_HULL_TOL;
    if let Some(i) = (0..v.len()).find(|&i| dist2(v.point(i), p).sqrt() <= tol) {
        return Ok(v.select(&[i]));
    }
    let lp = feasible_combination(p, v.flat(), v.dim(), tol)?;
    if !lp.feasible {
        return Err(Error::Precondition(format!("point {p:?} is not in the hull")));
    }
    let (idx, _) = caratheodory_reduce(v, &lp.lambda)?;
    Ok(v.select(&idx))
}

#[derive(Debug, Clone, Serialize)]
pub struct GustinWitness {
    pub indices: Vec<usize>,
    pub points: PointSet,
    /// Margin at which the interior probe succeeded (≤ the requested one).
    pub margin: f64,
}

/// Subset U ⊆ V with k+1 ≤ |U| ≤ 2k whose hull holds `p` in its margin
/// interior. Sizes are tried in increasing order, subsets of one size in
/// lexicographic index order; if nothing works the margin is halved.
pub fn gustin_witness(p: &[f64], v: &PointSet, margin: f64) -> Result<GustinWitness> {
    v.check_dim(p)?;
    if !in_interior(p, v, margin)? {
        return Err(Error::Precondition(format!(
            "point {p:?} is not interior at margin {margin}"
        )));
    }
    let k = v.dim();
    let n = v.len();
    let max_size = (2 * k).min(n);
    let mut budget = MAX_SUBSETS;
    let mut m = margin;
    for _ in 0..=MARGIN_HALVINGS {
        for size in (k + 1)..=max_size {
            let mut combo: Vec<usize> = (0..size).collect();
            loop {
                if budget == 0 {
                    return Err(Error::BudgetExceeded("gustin subset search".into()));
                }
                budget -= 1;
                let u = v.select(&combo);
                if in_hull(p, &u, DEFAULT_HULL_TOL)? && in_interior(p, &u, m)? {
                    return Ok(GustinWitness { indices: combo, points: u, margin: m });
                }
                if !next_combination(&mut combo, n) {
                    break;
                }
            }
        }
        m *= 0.5;
    }
    Err(Error::ToleranceTooTight { floor: m * 2.0 })
}

/// Advances to the next k-combination of 0..n in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(r: &[&[f64]]) -> PointSet {
        PointSet::from_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn combinations_in_order() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all, vec![[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]);
    }

    #[test]
    fn caratheodory_examples() {
        let sq = rows(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]);
        let u = caratheodory_witness(&[0.5, 0.5], &sq).unwrap();
        assert!(u.len() <= 3);
        assert!(in_hull(&[0.5, 0.5], &u, 1e-9).unwrap());

        let u = caratheodory_witness(&[1.0, 1.0], &sq).unwrap();
        assert_eq!(u.to_rows(), vec![vec![1.0, 1.0]]);

        let line = rows(&[&[0.0], &[0.5], &[1.0]]);
        let u = caratheodory_witness(&[0.3], &line).unwrap();
        assert_eq!(u.to_rows(), vec![vec![0.0], vec![0.5]]);
    }

    #[test]
    fn caratheodory_rejects_outside_point() {
        let line = rows(&[&[0.0], &[1.0]]);
        assert!(matches!(caratheodory_witness(&[2.0], &line), Err(Error::Precondition(_))));
    }

    #[test]
    fn reduce_uniform_combination_of_hexagon() {
        let hex: Vec<Vec<f64>> = (0..6)
            .map(|i| {
                let t = i as f64 * std::f64::consts::PI / 3.0;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let v = PointSet::from_rows(&hex).unwrap();
        let lambda = vec![1.0 / 6.0; 6];
        let (idx, w) = caratheodory_reduce(&v, &lambda).unwrap();
        assert!(idx.len() <= 3);
        let mut p = [0.0; 2];
        for (&i, &wi) in idx.iter().zip(&w) {
            p[0] += wi * v.point(i)[0];
            p[1] += wi * v.point(i)[1];
        }
        assert!(p[0].abs() < 1e-12 && p[1].abs() < 1e-12);
    }

    #[test]
    fn gustin_examples() {
        let cross = rows(&[&[1.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0], &[0.0, -1.0]]);
        let w = gustin_witness(&[0.0, 0.0], &cross, 1e-6).unwrap();
        assert_eq!(w.points.len(), 4);

        let tri = rows(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let c = [1.0 / 3.0, 1.0 / 3.0];
        assert_eq!(gustin_witness(&c, &tri, 1e-6).unwrap().points.len(), 3);

        let seg = rows(&[&[0.0], &[1.0]]);
        assert_eq!(gustin_witness(&[0.5], &seg, 1e-6).unwrap().indices, vec![0, 1]);
    }

    #[test]
    fn gustin_requires_interior_point() {
        let seg = rows(&[&[0.0], &[1.0]]);
        assert!(matches!(gustin_witness(&[1.0], &seg, 1e-6), Err(Error::Precondition(_))));
    }
}
