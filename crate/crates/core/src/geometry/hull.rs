use std::collections::HashSet;

use nalgebra::DMatrix;
use serde::Serialize;

use super::lp::feasible_combination;
use super::{dist2, dot, lex_cmp, PointSet};
use crate::error::{Error, Result};

/// Relative singular-value threshold for affine rank.
pub const RANK_TOLERANCE: f64 = 1e-8;

/// Half-space `normal · x <= offset` with a unit normal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Facet {
    fn signed_distance(&self, p: &[f64]) -> f64 {
        dot(&self.normal, p) - self.offset
    }
}

/// V-representation of conv(V), with facets when they are cheap to get
/// (full-dimensional and k ≤ 3).
#[derive(Debug, Clone)]
pub struct Hull {
    /// Extreme points. Counter-clockwise for k = 2, lexicographic otherwise.
    pub vertices: PointSet,
    pub affine_dim: usize,
    pub facets: Option<Vec<Facet>>,
    /// Bounding-box diagonal of the input, used to scale tolerances.
    pub scale: f64,
}

impl Hull {
    pub fn dim(&self) -> usize {
        self.vertices.dim()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim()
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        self.vertices.bounding_box()
    }

    /// Membership in conv(V) within `tol`.
    pub fn contains(&self, p: &[f64], tol: f64) -> Result<bool> {
        self.vertices.check_dim(p)?;
        if let Some(facets) = &self.facets {
            return Ok(facets.iter().all(|f| f.signed_distance(p) <= tol));
        }
        Ok(feasible_combination(p, self.vertices.flat(), self.dim(), tol)?.feasible)
    }

    /// Interior probe: `p` and `p ± margin·eᵢ` all lie in the hull.
    pub fn contains_interior(&self, p: &[f64], margin: f64, tol: f64) -> Result<bool> {
        self.vertices.check_dim(p)?;
        if !self.is_full_dimensional() {
            return Ok(false);
        }
        if let Some(facets) = &self.facets {
            return Ok(facets.iter().all(|f| {
                let reach = f.normal.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
                f.signed_distance(p) + margin * reach <= tol
            }));
        }
        if !self.contains(p, tol)? {
            return Ok(false);
        }
        let mut q = p.to_vec();
        for i in 0..p.len() {
            for s in [margin, -margin] {
                q[i] = p[i] + s;
                if !self.contains(&q, tol)? {
                    return Ok(false);
                }
            }
            q[i] = p[i];
        }
        Ok(true)
    }
}

/// Rank of the centered point matrix, singular values below
/// `RANK_TOLERANCE × σ_max` dropped.
pub fn affine_dimension(v: &PointSet) -> usize {
    let n = v.len();
    let k = v.dim();
    if n <= 1 {
        return 0;
    }
    let c = v.centroid();
    let m = DMatrix::from_fn(n, k, |i, j| v.point(i)[j] - c[j]);
    let sv = m.singular_values();
    let max = sv.iter().fold(0.0_f64, |a, &b| a.max(b));
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOLERANCE * max).count()
}

pub fn convex_hull(v: &PointSet) -> Result<Hull> {
    if v.is_empty() {
        return Err(Error::EmptySet);
    }
    let k = v.dim();
    let mut pts = PointSet::from_points(k, v.iter(), 0.0)?;
    pts.sort_lex();
    let scale = pts.diagonal();
    let affine_dim = affine_dimension(&pts);

    if pts.len() == 1 || affine_dim == 0 {
        let vertices = pts.select(&[0]);
        return Ok(Hull { vertices, affine_dim: 0, facets: None, scale });
    }

    let hull = match k {
        1 => {
            let lo = pts.point(0)[0];
            let hi = pts.point(pts.len() - 1)[0];
            let vertices = PointSet::from_flat_unchecked(1, vec![lo, hi]);
            let facets = vec![
                Facet { normal: vec![-1.0], offset: -lo },
                Facet { normal: vec![1.0], offset: hi },
            ];
            Hull { vertices, affine_dim, facets: Some(facets), scale }
        }
        2 => {
            let order = monotone_chain(&pts, scale);
            let vertices = pts.select(&order);
            let facets = (affine_dim == 2).then(|| polygon_facets(&vertices));
            Hull { vertices, affine_dim, facets, scale }
        }
        3 if affine_dim == 3 => match incremental_hull_3d(&pts, scale) {
            Some((idx, facets)) => {
                Hull { vertices: pts.select(&idx), affine_dim, facets: Some(facets), scale }
            }
            None => lp_hull(&pts, affine_dim, scale)?,
        },
        _ => lp_hull(&pts, affine_dim, scale)?,
    };
    Ok(hull)
}

fn cross2(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain on lexicographically sorted points. Collinear
/// points are dropped; returns indices in counter-clockwise order.
fn monotone_chain(pts: &PointSet, scale: f64) -> Vec<usize> {
    let n = pts.len();
    let eps = 1e-12 * scale * scale;
    let mut stack: Vec<usize> = Vec::with_capacity(2 * n);
    for i in 0..n {
        while stack.len() >= 2
            && cross2(pts.point(stack[stack.len() - 2]), pts.point(stack[stack.len() - 1]), pts.point(i))
                <= eps
        {
            stack.pop();
        }
        stack.push(i);
    }
    let lower = stack.len() + 1;
    for i in (0..n.saturating_sub(1)).rev() {
        while stack.len() >= lower
            && cross2(pts.point(stack[stack.len() - 2]), pts.point(stack[stack.len() - 1]), pts.point(i))
                <= eps
        {
            stack.pop();
        }
        stack.push(i);
    }
    stack.pop();
    stack
}

fn polygon_facets(ccw: &PointSet) -> Vec<Facet> {
    let n = ccw.len();
    (0..n)
        .map(|i| {
            let a = ccw.point(i);
            let b = ccw.point((i + 1) % n);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let len = dx.hypot(dy);
            let normal = vec![dy / len, -dx / len];
            let offset = dot(&normal, a);
            Facet { normal, offset }
        })
        .collect()
}

struct Face {
    v: [usize; 3],
    normal: [f64; 3],
    offset: f64,
    alive: bool,
}

fn sub3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm3(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn make_face(pts: &PointSet, v: [usize; 3], inside: &[f64; 3]) -> Option<Face> {
    let a = pts.point(v[0]);
    let n = cross3(sub3(pts.point(v[1]), a), sub3(pts.point(v[2]), a));
    let len = norm3(n);
    if len == 0.0 {
        return None;
    }
    let mut normal = [n[0] / len, n[1] / len, n[2] / len];
    let mut v = v;
    let mut offset = dot(&normal, a);
    if dot(&normal, inside) > offset {
        normal = [-normal[0], -normal[1], -normal[2]];
        offset = -offset;
        v.swap(1, 2);
    }
    Some(Face { v, normal, offset, alive: true })
}

/// Incremental 3-D hull. `None` when no non-degenerate starting tetrahedron
/// exists at the working tolerance.
fn incremental_hull_3d(pts: &PointSet, scale: f64) -> Option<(Vec<usize>, Vec<Facet>)> {
    let n = pts.len();
    let eps = 1e-10 * scale;
    let i0 = 0;
    let i1 = (0..n).max_by(|&a, &b| {
        dist2(pts.point(a), pts.point(i0)).total_cmp(&dist2(pts.point(b), pts.point(i0)))
    })?;
    let line = sub3(pts.point(i1), pts.point(i0));
    let i2 = (0..n).max_by(|&a, &b| {
        let da = norm3(cross3(line, sub3(pts.point(a), pts.point(i0))));
        let db = norm3(cross3(line, sub3(pts.point(b), pts.point(i0))));
        da.total_cmp(&db)
    })?;
    let plane = cross3(line, sub3(pts.point(i2), pts.point(i0)));
    let plen = norm3(plane);
    if plen <= eps * norm3(line) {
        return None;
    }
    let i3 = (0..n).max_by(|&a, &b| {
        let da = dot(&plane, &sub3(pts.point(a), pts.point(i0))).abs();
        let db = dot(&plane, &sub3(pts.point(b), pts.point(i0))).abs();
        da.total_cmp(&db)
    })?;
    if dot(&plane, &sub3(pts.point(i3), pts.point(i0))).abs() / plen <= eps {
        return None;
    }

    let seed = [i0, i1, i2, i3];
    let mut inside = [0.0; 3];
    for &i in &seed {
        for j in 0..3 {
            inside[j] += pts.point(i)[j] / 4.0;
        }
    }
    let mut faces: Vec<Face> = Vec::new();
    for tri in [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]] {
        faces.push(make_face(pts, tri, &inside)?);
    }

    for p in 0..n {
        if seed.contains(&p) {
            continue;
        }
        let q = pts.point(p);
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && dot(&f.normal, q) - f.offset > eps)
            .map(|(i, _)| i)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut edges = HashSet::new();
        for &fi in &visible {
            let v = faces[fi].v;
            for e in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
                edges.insert(e);
            }
        }
        let mut horizon: Vec<(usize, usize)> =
            edges.iter().copied().filter(|&(a, b)| !edges.contains(&(b, a))).collect();
        horizon.sort_unstable();
        for &fi in &visible {
            faces[fi].alive = false;
        }
        for (a, b) in horizon {
            if let Some(f) = make_face(pts, [a, b, p], &inside) {
                faces.push(f);
            }
        }
    }

    let mut idx: Vec<usize> = faces.iter().filter(|f| f.alive).flat_map(|f| f.v).collect();
    idx.sort_unstable();
    idx.dedup();
    let mut facets: Vec<Facet> = Vec::new();
    for f in faces.iter().filter(|f| f.alive) {
        let dup = facets.iter().any(|g| {
            dist2(&g.normal, &f.normal) < 1e-18 && (g.offset - f.offset).abs() <= eps
        });
        if !dup {
            facets.push(Facet { normal: f.normal.to_vec(), offset: f.offset });
        }
    }
    Some((idx, facets))
}

/// Extreme points by LP: a point is a vertex iff it is not in the hull of
/// the others.
fn lp_hull(pts: &PointSet, affine_dim: usize, scale: f64) -> Result<Hull> {
    let n = pts.len();
    let k = pts.dim();
    let tol = 1e-12 * scale.max(1.0);
    let mut keep = Vec::new();
    let mut others = Vec::with_capacity((n - 1) * k);
    for i in 0..n {
        others.clear();
        for j in (0..n).filter(|&j| j != i) {
            others.extend_from_slice(pts.point(j));
        }
        if !feasible_combination(pts.point(i), &others, k, tol)?.feasible {
            keep.push(i);
        }
    }
    keep.sort_by(|&a, &b| lex_cmp(pts.point(a), pts.point(b)));
    Ok(Hull { vertices: pts.select(&keep), affine_dim, facets: None, scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: &[&[f64]]) -> PointSet {
        PointSet::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn interval_drops_midpoint() {
        let h = convex_hull(&set(&[&[0.0], &[0.5], &[1.0]])).unwrap();
        assert_eq!(h.vertices.to_rows(), vec![vec![0.0], vec![1.0]]);
        assert_eq!(h.affine_dim, 1);
    }

    #[test]
    fn square_drops_center() {
        let h = convex_hull(&set(&[
            &[0.0, 0.0],
            &[1.0, 0.0],
            &[1.0, 1.0],
            &[0.0, 1.0],
            &[0.5, 0.5],
        ]))
        .unwrap();
        assert_eq!(h.vertices.len(), 4);
        assert_eq!(h.affine_dim, 2);
        let facets = h.facets.as_ref().unwrap();
        assert_eq!(facets.len(), 4);
        for v in h.vertices.iter() {
            assert!(facets.iter().all(|f| f.signed_distance(v) <= 1e-12));
        }
        assert!(h.contains(&[0.5, 0.5], 1e-9).unwrap());
        assert!(!h.contains(&[1.01, 0.5], 1e-9).unwrap());
    }

    #[test]
    fn segment_in_plane_is_one_dimensional() {
        let h = convex_hull(&set(&[&[1.0, 1.0], &[2.0, 2.0]])).unwrap();
        assert_eq!(h.affine_dim, 1);
        assert!(h.facets.is_none());
        assert!(h.contains(&[1.5, 1.5], 1e-9).unwrap());
        assert!(!h.contains_interior(&[1.5, 1.5], 1e-6, 1e-9).unwrap());
    }

    #[test]
    fn collinear_points_in_square_edge() {
        let h = convex_hull(&set(&[
            &[0.0, 0.0],
            &[0.5, 0.0],
            &[1.0, 0.0],
            &[1.0, 1.0],
            &[0.0, 1.0],
        ]))
        .unwrap();
        assert_eq!(h.vertices.len(), 4);
    }

    #[test]
    fn cube_hull_3d() {
        let mut rows = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    rows.push(vec![x, y, z]);
                }
            }
        }
        rows.push(vec![0.5, 0.5, 0.5]);
        rows.push(vec![0.5, 0.5, 1.0]);
        let h = convex_hull(&PointSet::from_rows(&rows).unwrap()).unwrap();
        assert_eq!(h.vertices.len(), 8);
        let facets = h.facets.as_ref().unwrap();
        assert_eq!(facets.len(), 6);
        assert!(h.contains_interior(&[0.5, 0.5, 0.5], 0.1, 1e-9).unwrap());
        assert!(!h.contains_interior(&[0.5, 0.5, 0.95], 0.1, 1e-9).unwrap());
    }

    #[test]
    fn octahedron_hull_3d() {
        let mut rows = Vec::new();
        for i in 0..3 {
            for s in [1.0, -1.0] {
                let mut e = vec![0.0; 3];
                e[i] = s;
                rows.push(e);
            }
        }
        let h = convex_hull(&PointSet::from_rows(&rows).unwrap()).unwrap();
        assert_eq!(h.vertices.len(), 6);
        assert_eq!(h.facets.as_ref().unwrap().len(), 8);
    }

    #[test]
    fn four_dimensional_hull_uses_lp() {
        let mut rows = vec![vec![0.0; 4]];
        for i in 0..4 {
            let mut e = vec![0.0; 4];
            e[i] = 1.0;
            rows.push(e);
        }
        rows.push(vec![0.1, 0.1, 0.1, 0.1]);
        let h = convex_hull(&PointSet::from_rows(&rows).unwrap()).unwrap();
        assert_eq!(h.affine_dim, 4);
        assert!(h.facets.is_none());
        assert_eq!(h.vertices.len(), 5);
        assert!(h.contains_interior(&[0.2, 0.2, 0.2, 0.2], 0.01, 1e-9).unwrap());
    }

    #[test]
    fn affine_dimension_of_planar_points_in_3d() {
        let s = set(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0], &[1.0, 1.0, 1.0]]);
        assert_eq!(affine_dimension(&s), 2);
        let h = convex_hull(&s).unwrap();
        assert_eq!(h.vertices.len(), 4);
        assert!(h.facets.is_none());
    }
}
