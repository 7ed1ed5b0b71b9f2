use serde::Serialize;

use crate::error::{Error, Result};

/// Bisection stops once the bracket is narrower than this.
const BISECTION_WIDTH: f64 = 1e-12;

/// Strictly monotone piecewise-linear map through (x, y) knots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
    increasing: bool,
}

impl MonotoneTable {
    pub fn new(knots: &[[f64; 2]]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidParameter("a table needs at least two knots".into()));
        }
        if knots.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("table knots must be finite".into()));
        }
        let xs: Vec<f64> = knots.iter().map(|k| k[0]).collect();
        let ys: Vec<f64> = knots.iter().map(|k| k[1]).collect();
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("table x values must be strictly increasing".into()));
        }
        let increasing = ys[1] > ys[0];
        let monotone = ys.windows(2).all(|w| if increasing { w[0] < w[1] } else { w[0] > w[1] });
        if !monotone {
            return Err(Error::InvalidParameter("table y values must be strictly monotone".into()));
        }
        Ok(MonotoneTable { xs, ys, increasing })
    }

    /// Open interval of x values the table covers.
    pub fn support(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().expect("two knots"))
    }

    pub fn forward(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if !(x >= self.xs[0] && x <= self.xs[n - 1]) {
            return f64::NAN;
        }
        let i = self.xs.partition_point(|&k| k <= x).clamp(1, n - 1);
        let (x0, x1, y0, y1) = (self.xs[i - 1], self.xs[i], self.ys[i - 1], self.ys[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Monotone bisection; NaN when `y` lies outside the table's range.
    pub fn inverse(&self, y: f64) -> f64 {
        let (mut lo, mut hi) = self.support();
        let (ylo, yhi) = (self.ys[0], *self.ys.last().expect("two knots"));
        let inside = if self.increasing { ylo <= y && y <= yhi } else { yhi <= y && y <= ylo };
        if !inside {
            return f64::NAN;
        }
        while hi - lo > BISECTION_WIDTH {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (self.forward(mid) < y) == self.increasing {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}
