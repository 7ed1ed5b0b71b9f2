use super::{dist2, PointSet};

const LEAF: usize = 8;

/// Static k-d tree over a point set, implicit layout: the median of every
/// index range is the node, its split axis stored alongside.
pub struct KdTree<'a> {
    set: &'a PointSet,
    order: Vec<usize>,
    axis: Vec<u8>,
}

impl<'a> KdTree<'a> {
    pub fn new(set: &'a PointSet) -> Self {
        let mut order: Vec<usize> = (0..set.len()).collect();
        let mut axis = vec![0u8; set.len()];
        build(set, &mut order, &mut axis);
        KdTree { set, order, axis }
    }

    /// Index and squared distance of the nearest point. Equal distances
    /// resolve to the lower index.
    pub fn nearest(&self, q: &[f64]) -> Option<(usize, f64)> {
        if self.order.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, f64::INFINITY);
        self.search(q, 0, self.order.len(), &mut best);
        Some(best)
    }

    fn search(&self, q: &[f64], lo: usize, hi: usize, best: &mut (usize, f64)) {
        if hi - lo <= LEAF {
            for &i in &self.order[lo..hi] {
                consider(best, i, dist2(q, self.set.point(i)));
            }
            return;
        }
        let mid = (lo + hi) / 2;
        let node = self.order[mid];
        let ax = self.axis[mid] as usize;
        let p = self.set.point(node);
        consider(best, node, dist2(q, p));
        let diff = q[ax] - p[ax];
        let (near, far) = if diff < 0.0 { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.search(q, near.0, near.1, best);
        if diff * diff <= best.1 {
            self.search(q, far.0, far.1, best);
        }
    }
}

fn consider(best: &mut (usize, f64), i: usize, d: f64) {
    if d < best.1 || (d == best.1 && i < best.0) {
        *best = (i, d);
    }
}

fn build(set: &PointSet, order: &mut [usize], axis: &mut [u8]) {
    let n = order.len();
    if n <= LEAF {
        return;
    }
    let k = set.dim();
    let mut ax = 0;
    let mut spread = f64::NEG_INFINITY;
    for j in 0..k {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &i in order.iter() {
            let x = set.point(i)[j];
            lo = lo.min(x);
            hi = hi.max(x);
        }
        if hi - lo > spread {
            spread = hi - lo;
            ax = j;
        }
    }
    let mid = n / 2;
    order.select_nth_unstable_by(mid, |&a, &b| {
        set.point(a)[ax].total_cmp(&set.point(b)[ax]).then(a.cmp(&b))
    });
    axis[mid] = ax as u8;
    let (left, right) = order.split_at_mut(mid);
    let (laxis, raxis) = axis.split_at_mut(mid);
    build(set, left, laxis);
    build(set, &mut right[1..], &mut raxis[1..]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 1..=4 {
            let rows: Vec<Vec<f64>> =
                (0..500).map(|_| (0..k).map(|_| rng.random::<f64>()).collect()).collect();
            let set = PointSet::from_rows(&rows).unwrap();
            let tree = KdTree::new(&set);
            for _ in 0..200 {
                let q: Vec<f64> = (0..k).map(|_| rng.random::<f64>() * 1.4 - 0.2).collect();
                let (_, d) = tree.nearest(&q).unwrap();
                let brute = set.iter().map(|p| dist2(&q, p)).fold(f64::INFINITY, f64::min);
                assert_eq!(d, brute);
            }
        }
    }
}
