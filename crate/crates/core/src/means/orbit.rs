use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::qam::{combine, Scratch};
use super::weights::Weights;
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::geometry::{cell_key, lex_cmp, KdTree, PointSet};

const CHUNK: usize = 65_536;

/// Knobs for the mean operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitParams {
    /// Snap resolution: points sharing a δ-cell are merged (δ = 0 merges
    /// only identical points).
    pub delta: f64,
    /// Cardinality cap; reaching it marks the state saturated.
    pub max_points: usize,
    /// Above this many ordered tuples per step, tuples are sampled.
    pub tuple_budget: usize,
    pub seed: u64,
}

impl OrbitParams {
    pub const DEFAULT_MAX_POINTS: usize = 250_000;
    pub const DEFAULT_TUPLE_BUDGET: usize = 2_000_000;
    pub const DEFAULT_SEED: u64 = 42;

    pub fn with_delta(delta: f64) -> Self {
        OrbitParams {
            delta,
            max_points: Self::DEFAULT_MAX_POINTS,
            tuple_budget: Self::DEFAULT_TUPLE_BUDGET,
            seed: Self::DEFAULT_SEED,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("delta must be finite and >= 0, got {}", self.delta)));
        }
        if self.max_points == 0 || self.tuple_budget == 0 {
            return Err(Error::InvalidParameter("max_points and tuple_budget must be positive".into()));
        }
        Ok(())
    }
}

/// One iterate 𝓜ⁿ(S), snapped and sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitState {
    pub generation: usize,
    pub set: PointSet,
    /// Generation in which each point first appeared.
    pub born: Vec<usize>,
    pub delta: f64,
    /// The cardinality cap stopped growth in this step.
    pub saturated: bool,
    /// Tuples were subsampled in this step.
    pub sampled: bool,
    pub tuples_evaluated: usize,
}

impl OrbitState {
    /// Generation-0 state: `s0` re-snapped at `delta`, checked against C.
    pub fn initial(g: &Generator, s0: &PointSet, delta: f64) -> Result<Self> {
        if s0.is_empty() {
            return Err(Error::EmptySet);
        }
        if s0.dim() != g.dim {
            return Err(Error::DimensionMismatch { expected: g.dim, found: s0.dim() });
        }
        if let Some(p) = s0.iter().find(|p| !g.domain.contains(p)) {
            return Err(Error::OutsideDomain { generator: g.name.clone(), point: p.to_vec() });
        }
        let set = PointSet::from_points(s0.dim(), s0.iter(), delta)?;
        let n = set.len();
        Ok(canonical(set, vec![0; n], 0, delta, false, false, 0))
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

fn canonical(
    set: PointSet,
    born: Vec<usize>,
    generation: usize,
    delta: f64,
    saturated: bool,
    sampled: bool,
    tuples_evaluated: usize,
) -> OrbitState {
    let mut order: Vec<usize> = (0..set.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(set.point(a), set.point(b)));
    let born = order.iter().map(|&i| born[i]).collect();
    OrbitState {
        generation,
        set: set.select(&order),
        born,
        delta,
        saturated,
        sampled,
        tuples_evaluated,
    }
}

/// Decodes tuple number `t` (first entry most significant) into indices.
fn decode(mut t: u128, n: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = (t % n as u128) as usize;
        t /= n as u128;
    }
}

/// Point indices grouped by birth generation (empty groups dropped).
fn strata(born: &[usize]) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &b) in born.iter().enumerate() {
        if groups.len() <= b {
            groups.resize_with(b + 1, Vec::new);
        }
        groups[b].push(i);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

/// All means of ordered m-tuples drawn from the state's set, in tuple
/// order, locally deduplicated at `delta` (first occurrence kept). Above
/// the tuple budget each tuple entry is drawn by picking a birth generation
/// uniformly, then a point of that generation uniformly: early points
/// (vertices, faces, coarse means) would otherwise almost never be drawn
/// together once later generations dominate the set.
fn evaluate_means(
    g: &Generator,
    w: &Weights,
    state: &OrbitState,
    generation: usize,
    params: &OrbitParams,
) -> Result<(Vec<f64>, bool, usize)> {
    let set = &state.set;
    let n = set.len();
    let m = w.len();
    let k = set.dim();
    let total = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    let sampled = total > params.tuple_budget as u128;
    let count = if sampled { params.tuple_budget } else { total as usize };
    let chunks = count.div_ceil(CHUNK);
    let strata = strata(&state.born);
    let results: Vec<Result<Vec<f64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(count);
            let mut rng = sampled.then(|| {
                let mut r = ChaCha8Rng::seed_from_u64(params.seed);
                r.set_stream(((generation as u64) << 32) | c as u64);
                r
            });
            let mut idx = vec![0usize; m];
            let mut scratch = Scratch::new(k);
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            for t in start..end {
                match rng.as_mut() {
                    Some(r) => idx.iter_mut().for_each(|i| {
                        let stratum = &strata[r.random_range(0..strata.len())];
                        *i = stratum[r.random_range(0..stratum.len())];
                    }),
                    None => decode(t as u128, n, &mut idx),
                }
                combine(g, w.values(), idx.iter().map(|&i| set.point(i)), &mut scratch).map_err(|e| {
                    Error::Tuple {
                        tuple: idx.iter().map(|&i| set.point(i).to_vec()).collect(),
                        source: Box::new(e),
                    }
                })?;
                if seen.insert(cell_key(&scratch.out, params.delta)) {
                    out.extend_from_slice(&scratch.out);
                }
            }
            Ok(out)
        })
        .collect();
    let mut flat = Vec::new();
    for r in results {
        flat.extend(r?);
    }
    Ok((flat, sampled, count))
}

/// 𝓜(S) ∪ S at resolution δ. Existing points keep their cells; new cells
/// are filled in tuple order until `max_points`.
pub fn mean_step(g: &Generator, w: &Weights, s: &OrbitState, params: &OrbitParams) -> Result<OrbitState> {
    params.validate()?;
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let k = s.set.dim();
    let generation = s.generation + 1;
    let (means, sampled, count) = evaluate_means(g, w, s, generation, params)?;
    let mut seen: HashSet<Vec<i64>> = s.set.iter().map(|p| cell_key(p, params.delta)).collect();
    let mut set = s.set.clone();
    let mut born = s.born.clone();
    let mut saturated = s.saturated;
    for p in means.chunks_exact(k) {
        let key = cell_key(p, params.delta);
        if seen.contains(&key) {
            continue;
        }
        if set.len() >= params.max_points {
            saturated = true;
            break;
        }
        seen.insert(key);
        set.push_unchecked(p);
        born.push(generation);
    }
    Ok(canonical(set, born, generation, params.delta, saturated, sampled, count))
}

/// States for n = 0..=n_max, stopping early once a step adds nothing at
/// resolution δ.
pub fn iterate(
    g: &Generator,
    w: &Weights,
    s0: &PointSet,
    n_max: usize,
    params: &OrbitParams,
) -> Result<Vec<OrbitState>> {
    params.validate()?;
    let mut states = vec![OrbitState::initial(g, s0, params.delta)?];
    for _ in 0..n_max {
        let next = mean_step(g, w, states.last().expect("nonempty"), params)?;
        let grew = next.len() > states.last().expect("nonempty").len();
        states.push(next);
        if !grew {
            break;
        }
    }
    Ok(states)
}

/// Whether one application of the mean operator to `s` yields no point
/// farther than δ from `s`.
pub fn is_fixed_point(g: &Generator, w: &Weights, s: &PointSet, delta: f64) -> Result<bool> {
    let params = OrbitParams::with_delta(0.0);
    let state = OrbitState::initial(g, s, 0.0)?;
    let (means, _, _) = evaluate_means(g, w, &state, 1, &params)?;
    let tree = KdTree::new(&state.set);
    let limit = delta * delta;
    Ok(means
        .chunks_exact(s.dim())
        .all(|p| tree.nearest(p).is_some_and(|(_, d2)| d2 <= limit * (1.0 + 1e-12))))
}
