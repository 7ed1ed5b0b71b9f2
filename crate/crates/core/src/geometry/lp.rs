//! Phase-one simplex for barycentric feasibility:
//! find λ ≥ 0 with Σλᵢvᵢ = p and Σλᵢ = 1.
//!
//! Dense tableau with Bland's rule. The coordinate rows are translated to
//! `p` and scaled by the largest offset so pivot thresholds are relative.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-12;
const COST_EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct LpOutcome {
    pub feasible: bool,
    /// ‖Σλᵢvᵢ − p‖₂ + scale·|Σλᵢ − 1| in the input's units.
    pub residual: f64,
    /// Basic solution, one entry per point of `V`; at most k+1 nonzeros.
    pub lambda: Vec<f64>,
}

/// Solves the phase-one problem for `p` against the points of `v`
/// (flat, `dim` coordinates each).
pub fn feasible_combination(p: &[f64], v: &[f64], dim: usize, tol: f64) -> Result<LpOutcome> {
    let n = v.len() / dim;
    if n == 0 {
        return Err(Error::EmptySet);
    }
    let rows = dim + 1;
    let scale = v
        .chunks_exact(dim)
        .flat_map(|q| q.iter().zip(p).map(|(a, b)| (a - b).abs()))
        .fold(0.0_f64, f64::max);
    if scale == 0.0 {
        // every point coincides with p
        let mut lambda = vec![0.0; n];
        lambda[0] = 1.0;
        return Ok(LpOutcome { feasible: true, residual: 0.0, lambda });
    }

    let cols = n + rows + 1;
    let rhs = cols - 1;
    let mut t = vec![0.0; rows * cols];
    for (i, q) in v.chunks_exact(dim).enumerate() {
        for j in 0..dim {
            t[j * cols + i] = (q[j] - p[j]) / scale;
        }
        t[dim * cols + i] = 1.0;
    }
    for r in 0..rows {
        t[r * cols + n + r] = 1.0;
    }
    t[dim * cols + rhs] = 1.0;
    let mut basis: Vec<usize> = (n..n + rows).collect();

    // reduced costs of the phase-one objective Σ artificials
    let mut cost = vec![0.0; cols];
    for r in 0..rows {
        for j in 0..n {
            cost[j] -= t[r * cols + j];
        }
        cost[rhs] -= t[r * cols + rhs];
    }

    let max_iter = 10_000 + 50 * (n + rows);
    let mut iter = 0;
    loop {
        let Some(enter) = (0..n).find(|&j| cost[j] < -COST_EPS) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..rows {
            let a = t[r * cols + enter];
            if a > PIVOT_EPS {
                let ratio = t[r * cols + rhs] / a;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best - 1e-15 || (ratio <= best + 1e-15 && basis[r] < basis[l])
                    }
                };
                if better {
                    best = ratio;
                    leave = Some(r);
                }
            }
        }
        let Some(leave) = leave else {
            return Err(Error::NumericalFailure("phase-one LP reported unbounded".into()));
        };
        pivot(&mut t, &mut cost, cols, rows, leave, enter);
        basis[leave] = enter;
        iter += 1;
        if iter > max_iter {
            return Err(Error::NumericalFailure(format!(
                "membership LP did not converge in {max_iter} pivots"
            )));
        }
    }

    let mut lambda = vec![0.0; n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            lambda[b] = t[r * cols + rhs].max(0.0);
        }
    }
    let mut combo = vec![0.0; dim];
    let mut total = 0.0;
    for (l, q) in lambda.iter().zip(v.chunks_exact(dim)) {
        if *l != 0.0 {
            for j in 0..dim {
                combo[j] += l * (q[j] - p[j]);
            }
            total += l;
        }
    }
    let residual = combo.iter().map(|x| x * x).sum::<f64>().sqrt() + scale * (total - 1.0).abs();
    if !residual.is_finite() {
        return Err(Error::NumericalFailure("non-finite LP residual".into()));
    }
    Ok(LpOutcome { feasible: residual <= tol, residual, lambda })
}

fn pivot(t: &mut [f64], cost: &mut [f64], cols: usize, rows: usize, pr: usize, pc: usize) {
    let inv = 1.0 / t[pr * cols + pc];
    for j in 0..cols {
        t[pr * cols + j] *= inv;
    }
    t[pr * cols + pc] = 1.0;
    let (before, rest) = t.split_at_mut(pr * cols);
    let (prow, after) = rest.split_at_mut(cols);
    for row in before.chunks_exact_mut(cols).chain(after.chunks_exact_mut(cols)) {
        let f = row[pc];
        if f != 0.0 {
            for (x, y) in row.iter_mut().zip(prow.iter()) {
                *x -= f * y;
            }
            row[pc] = 0.0;
        }
    }
    let f = cost[pc];
    if f != 0.0 {
        for (x, y) in cost.iter_mut().zip(prow.iter()) {
            *x -= f * y;
        }
        cost[pc] = 0.0;
    }
    debug_assert!(rows > 0);
}
