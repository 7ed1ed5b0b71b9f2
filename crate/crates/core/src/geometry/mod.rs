//! Points, finite point sets and the convex-geometry toolkit built on them:
//! hulls, LP membership, interior probing, Carathéodory and Gustin witnesses,
//! grid sampling and covering radii.

mod hull;
mod lp;
mod membership;
mod nearest;
mod sampling;
mod witness;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hull::{affine_dimension, convex_hull, Facet, Hull, RANK_TOLERANCE};
pub use lp::{feasible_combination, LpOutcome};
pub use membership::{distance_to_hull, in_hull, in_interior, DEFAULT_HULL_TOL};
pub use nearest::KdTree;
pub use sampling::{
    covering_radius, covering_radius_detail, grid_sample, hausdorff_distance, CoverDetail,
};
pub(crate) use witness::next_combination;
pub use witness::{caratheodory_reduce, caratheodory_witness, gustin_witness, GustinWitness};

/// A point of ℝᵏ with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("point must have dimension >= 1".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite(coords));
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Vec<f64> {
        p.0
    }
}

/// Grid cell of a point at snap resolution `delta`.
///
/// With `delta == 0` the key is the exact bit pattern, so only identical
/// points collide.
pub fn cell_key(p: &[f64], delta: f64) -> Vec<i64> {
    if delta > 0.0 {
        p.iter().map(|x| (x / delta).round() as i64).collect()
    } else {
        p.iter().map(|x| (x + 0.0).to_bits() as i64).collect()
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A finite set of points in ℝᵏ, stored flat.
///
/// Points are unique per snap cell: no two stored points share a
/// [`cell_key`] at the resolution the set was built with.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn empty(dim: usize) -> Self {
        PointSet { dim, coords: Vec::new() }
    }

    /// Builds a set from points, keeping the first point seen in each cell.
    pub fn from_points<I, P>(dim: usize, points: I, delta: f64) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[f64]>,
    {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        let mut set = PointSet::empty(dim);
        let mut seen = HashMap::new();
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite(p.to_vec()));
            }
            if seen.insert(cell_key(p, delta), ()).is_none() {
                set.coords.extend_from_slice(p);
            }
        }
        Ok(set)
    }

    /// Convenience constructor from nested vectors with exact deduplication.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map(Vec::len).ok_or(Error::EmptySet)?;
        PointSet::from_points(dim, rows, 0.0)
    }

    pub(crate) fn from_flat_unchecked(dim: usize, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len() % dim, 0);
        PointSet { dim, coords }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn flat(&self) -> &[f64] {
        &self.coords
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    pub(crate) fn push_unchecked(&mut self, p: &[f64]) {
        self.coords.extend_from_slice(p);
    }

    /// Subset by index, in the given index order.
    pub fn select(&self, idx: &[usize]) -> PointSet {
        let mut out = PointSet::empty(self.dim);
        for &i in idx {
            out.push_unchecked(self.point(i));
        }
        out
    }

    /// Sorts points lexicographically (canonical order).
    pub fn sort_lex(&mut self) {
        let mut rows: Vec<&[f64]> = self.iter().collect();
        rows.sort_by(|a, b| lex_cmp(a, b));
        self.coords = rows.concat();
    }

    /// Bounding box as (min corner, max corner).
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.iter() {
            for (j, &x) in p.iter().enumerate() {
                lo[j] = lo[j].min(x);
                hi[j] = hi[j].max(x);
            }
        }
        (lo, hi)
    }

    /// Euclidean length of the bounding-box diagonal.
    pub fn diagonal(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let (lo, hi) = self.bounding_box();
        dist2(&lo, &hi).sqrt()
    }

    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for p in self.iter() {
            for (cj, x) in c.iter_mut().zip(p) {
                *cj += x;
            }
        }
        let n = self.len().max(1) as f64;
        c.iter_mut().for_each(|x| *x /= n);
        c
    }

    pub fn check_dim(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: p.len() });
        }
        Ok(())
    }
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}
