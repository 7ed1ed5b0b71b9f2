use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Inputs closer than this to ∂C are snapped back inside rather than
/// rejected.
pub const CLAMP_SLACK: f64 = 1e-12;

/// Open convex domain C ⊆ ℝᵏ.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Domain {
    FullSpace { dim: usize },
    /// Per-coordinate open intervals; bounds may be infinite.
    OpenBox { lo: Vec<f64>, hi: Vec<f64> },
    OpenBall { center: Vec<f64>, radius: f64 },
    PositiveOrthant { dim: usize },
}

impl Domain {
    pub fn open_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidParameter("box bounds must have equal, nonzero length".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b) || a.is_nan() || b.is_nan()) {
            return Err(Error::InvalidParameter("box needs lo < hi in every coordinate".into()));
        }
        Ok(Domain::OpenBox { lo, hi })
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::FullSpace { dim } | Domain::PositiveOrthant { dim } => *dim,
            Domain::OpenBox { lo, .. } => lo.len(),
            Domain::OpenBall { center, .. } => center.len(),
        }
    }

    /// Strict (open) membership.
    pub fn contains(&self, p: &[f64]) -> bool {
        if p.len() != self.dim() || p.iter().any(|x| !x.is_finite()) {
            return false;
        }
        match self {
            Domain::FullSpace { .. } => true,
            Domain::PositiveOrthant { .. } => p.iter().all(|&x| x > 0.0),
            Domain::OpenBox { lo, hi } => {
                p.iter().zip(lo.iter().zip(hi)).all(|(&x, (&a, &b))| a < x && x < b)
            }
            Domain::OpenBall { center, radius } => distance(p, center) < *radius,
        }
    }

    /// How far `p` lies outside the closure of C (0 inside or on ∂C).
    pub fn violation(&self, p: &[f64]) -> f64 {
        if p.iter().any(|x| !x.is_finite()) {
            return f64::INFINITY;
        }
        match self {
            Domain::FullSpace { .. } => 0.0,
            Domain::PositiveOrthant { .. } => p.iter().fold(0.0_f64, |m, &x| m.max(-x)),
            Domain::OpenBox { lo, hi } => p
                .iter()
                .zip(lo.iter().zip(hi))
                .fold(0.0_f64, |m, (&x, (&a, &b))| m.max(a - x).max(x - b)),
            Domain::OpenBall { center, radius } => (distance(p, center) - radius).max(0.0),
        }
    }

    /// Moves a point that sits on or within `CLAMP_SLACK` outside ∂C to
    /// distance `CLAMP_SLACK` inside. `None` for larger violations.
    pub fn clamp_inside(&self, p: &[f64]) -> Option<Vec<f64>> {
        if self.contains(p) {
            return Some(p.to_vec());
        }
        if self.violation(p) > CLAMP_SLACK {
            return None;
        }
        let mut q = p.to_vec();
        match self {
            Domain::FullSpace { .. } => {}
            Domain::PositiveOrthant { .. } => {
                q.iter_mut().filter(|x| **x <= 0.0).for_each(|x| *x = CLAMP_SLACK);
            }
            Domain::OpenBox { lo, hi } => {
                for (x, (&a, &b)) in q.iter_mut().zip(lo.iter().zip(hi)) {
                    if *x <= a {
                        *x = a + CLAMP_SLACK;
                    } else if *x >= b {
                        *x = b - CLAMP_SLACK;
                    }
                }
            }
            Domain::OpenBall { center, radius } => {
                let d = distance(p, center);
                let s = (radius - CLAMP_SLACK) / d;
                for (x, c) in q.iter_mut().zip(center) {
                    *x = c + (*x - c) * s;
                }
            }
        }
        self.contains(&q).then_some(q)
    }

    /// Bounded box used for validation sampling: [−10, 10]ᵏ ∩ C, or
    /// [10⁻³, 10] per coordinate on the positive orthant.
    pub fn sampling_core(&self) -> (Vec<f64>, Vec<f64>) {
        let k = self.dim();
        match self {
            Domain::FullSpace { .. } => (vec![-10.0; k], vec![10.0; k]),
            Domain::PositiveOrthant { .. } => (vec![1e-3; k], vec![10.0; k]),
            Domain::OpenBox { lo, hi } => (
                lo.iter().map(|a| a.max(-10.0)).collect(),
                hi.iter().map(|b| b.min(10.0)).collect(),
            ),
            Domain::OpenBall { center, radius } => (
                center.iter().map(|c| (c - radius).max(-10.0)).collect(),
                center.iter().map(|c| (c + radius).min(10.0)).collect(),
            ),
        }
    }

    /// Uniform draw from the sampling core (rejection for balls).
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let (lo, hi) = self.sampling_core();
        loop {
            let p: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| a + (b - a) * rng.random::<f64>()).collect();
            if self.contains(&p) {
                return p;
            }
        }
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_membership() {
        let b = Domain::open_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!(b.contains(&[0.5, 0.5]));
        assert!(!b.contains(&[0.0, 0.5]));
        assert!(!b.contains(&[0.5, f64::NAN]));
        let o = Domain::PositiveOrthant { dim: 2 };
        assert!(!o.contains(&[1.0, 0.0]));
        let ball = Domain::OpenBall { center: vec![0.0, 0.0], radius: 1.0 };
        assert!(!ball.contains(&[1.0, 0.0]));
        assert!(ball.contains(&[0.7, 0.7]));
    }

    #[test]
    fn clamping_only_within_slack() {
        let b = Domain::open_box(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(b.clamp_inside(&[-1e-13]), Some(vec![1e-12]));
        assert_eq!(b.clamp_inside(&[1.0]), Some(vec![1.0 - 1e-12]));
        assert_eq!(b.clamp_inside(&[1.1]), None);
        assert!((b.violation(&[1.1]) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rejects_empty_interval() {
        assert!(Domain::open_box(vec![1.0], vec![1.0]).is_err());
    }
}
