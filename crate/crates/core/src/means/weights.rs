use serde::Serialize;

use crate::error::{Error, Result};

const SUM_TOL: f64 = 1e-12;

/// Parses a decimal or a `p/q` fraction.
pub fn parse_fraction(s: &str) -> Result<f64> {
    let bad = || Error::InvalidWeights(format!("cannot parse `{s}` as a number or fraction"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            p / q
        }
        None => s.trim().parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn check_sum(values: &[f64]) -> Result<()> {
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(Error::InvalidWeights(format!("weights must sum to 1 (sum is {sum})")));
    }
    Ok(())
}

/// Positive mean weights α₁,…,α_m, m ≥ 2, summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidWeights(format!("need at least 2 weights, got {}", values.len())));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidWeights(format!("weights must be positive, got {v}")));
        }
        check_sum(&values)?;
        Ok(Weights(values))
    }

    /// m equal weights 1/m.
    pub fn uniform(m: usize) -> Result<Self> {
        Weights::new(vec![1.0 / m as f64; m])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn alpha_max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }
}

/// A point of the standard simplex: h ≥ 2 nonnegative weights summing to 1.
/// Zero entries are allowed and drop the corresponding point.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidWeights(format!("need at least 2 weights, got {}", values.len())));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidWeights(format!("weights must be nonnegative, got {v}")));
        }
        check_sum(&values)?;
        Ok(SimplexWeights(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl From<Weights> for SimplexWeights {
    fn from(w: Weights) -> Self {
        SimplexWeights(w.0)
    }
}
