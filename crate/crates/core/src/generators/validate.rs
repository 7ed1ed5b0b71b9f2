use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Generator, ROUND_TRIP_TOL};
use crate::verdict::{ConditionKind, ConditionVerdict, VerdictParams, Witness};

/// Image-midpoint misses at or below this size are treated as rounding.
const IMAGE_TOL: f64 = 1e-8;
/// Structured probe levels per coordinate, as fractions of the core box.
const LEVELS: [f64; 5] = [1e-4, 0.1, 0.5, 0.9, 1.0 - 1e-4];
const MAX_STRUCTURED: usize = 625;
const INJECTIVITY_SEPARATION: f64 = 1e-4;
const INJECTIVITY_TOL: f64 = 1e-10;

/// How far q = (f(a)+f(b))/2 is from f[C], measured through the inverse:
/// the raw preimage's distance outside C, or its round-trip error.
fn image_miss(g: &Generator, q: &[f64]) -> f64 {
    let mut x = vec![0.0; g.dim];
    g.inverse_into(q, &mut x);
    if x.iter().any(|v| !v.is_finite()) {
        return f64::INFINITY;
    }
    g.domain.violation(&x).max(g.round_trip_error(&x, q))
}

fn structured_points(g: &Generator) -> Vec<Vec<f64>> {
    let k = g.dim;
    let count = LEVELS.len().checked_pow(k as u32).unwrap_or(usize::MAX);
    if count > MAX_STRUCTURED {
        return Vec::new();
    }
    let (lo, hi) = g.domain.sampling_core();
    (0..count)
        .map(|flat| {
            let mut rem = flat;
            let mut p = vec![0.0; k];
            for j in (0..k).rev() {
                let t = LEVELS[rem % LEVELS.len()];
                rem /= LEVELS.len();
                p[j] = lo[j] + t * (hi[j] - lo[j]);
            }
            p
        })
        .filter(|p| g.domain.contains(p))
        .collect()
}

/// Sampled test of whether f[C] is convex: image midpoints of pairs drawn
/// from a bounded core of C must have a preimage in C. Structured pairs
/// come first, then `sample_count` seeded random pairs.
pub fn check_convex_image(g: &Generator, sample_count: usize, seed: u64) -> ConditionVerdict {
    let k = g.dim;
    let mut tested = 0;
    let mut fa = vec![0.0; k];
    let mut fb = vec![0.0; k];
    let mut probe = |a: &[f64], b: &[f64], tested: &mut usize| -> Option<Witness> {
        *tested += 1;
        g.forward_into(a, &mut fa);
        g.forward_into(b, &mut fb);
        let q: Vec<f64> = fa.iter().zip(&fb).map(|(x, y)| 0.5 * (x + y)).collect();
        let miss = image_miss(g, &q);
        (miss > IMAGE_TOL).then(|| Witness {
            point: a.to_vec(),
            partner: Some(b.to_vec()),
            image: q,
            margin: miss,
            note: Some("image midpoint has no preimage in the domain".into()),
        })
    };

    let mut witness = None;
    let grid = structured_points(g);
    'outer: for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            if let Some(w) = probe(&grid[i], &grid[j], &mut tested) {
                witness = Some(w);
                break 'outer;
            }
        }
    }
    if witness.is_none() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..sample_count {
            let a = g.domain.sample(&mut rng);
            let b = g.domain.sample(&mut rng);
            if let Some(w) = probe(&a, &b, &mut tested) {
                witness = Some(w);
                break;
            }
        }
    }
    let params = VerdictParams {
        tolerance: IMAGE_TOL,
        margin: None,
        sample_count,
        samples_tested: tested,
        seed,
    };
    let (lo, hi) = g.domain.sampling_core();
    ConditionVerdict::new(ConditionKind::ConvexImage, witness, params)
        .with_note(format!("pairs drawn from the core box {lo:?}..{hi:?}"))
}

/// Outcome of the sampled round-trip and injectivity checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorValidation {
    pub samples: usize,
    pub max_round_trip_error: f64,
    /// First sample whose round trip exceeded the tolerance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub round_trip_failure: Option<Vec<f64>>,
    /// First well-separated pair with coincident images.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub injectivity_failure: Option<(Vec<f64>, Vec<f64>)>,
    pub seed: u64,
}

impl GeneratorValidation {
    pub fn passed(&self) -> bool {
        self.round_trip_failure.is_none() && self.injectivity_failure.is_none()
    }
}

/// Round trip f⁻¹(f(x)) ≈ x, relative to max(1, |xᵢ|), and pairwise
/// injectivity on consecutive samples.
pub fn validate(g: &Generator, sample_count: usize, seed: u64) -> GeneratorValidation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = g.dim;
    let mut y = vec![0.0; k];
    let mut back = vec![0.0; k];
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut out = GeneratorValidation {
        samples: sample_count,
        max_round_trip_error: 0.0,
        round_trip_failure: None,
        injectivity_failure: None,
        seed,
    };
    for _ in 0..sample_count {
        let x = g.domain.sample(&mut rng);
        g.forward_into(&x, &mut y);
        g.inverse_into(&y, &mut back);
        let err = x
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
            .fold(0.0_f64, |m, e| if e.is_nan() { f64::INFINITY } else { m.max(e) });
        out.max_round_trip_error = out.max_round_trip_error.max(err);
        if err > ROUND_TRIP_TOL && out.round_trip_failure.is_none() {
            out.round_trip_failure = Some(x.clone());
        }
        if let Some((px, py)) = &prev {
            let sep = px.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let img = py.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if sep >= INJECTIVITY_SEPARATION && img <= INJECTIVITY_TOL && out.injectivity_failure.is_none() {
                out.injectivity_failure = Some((px.clone(), x.clone()));
            }
        }
        // perturbed neighbours probe injectivity at short range too
        let jitter: Vec<f64> = x.iter().map(|v| v + 1e-3 * (rng.random::<f64>() - 0.5)).collect();
        prev = Some(if g.domain.contains(&jitter) {
            let mut fj = vec![0.0; k];
            g.forward_into(&jitter, &mut fj);
            (jitter, fj)
        } else {
            (x, y.clone())
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_image_examples() {
        assert!(check_convex_image(&Generator::identity(2), 200, 1).holds());
        assert!(check_convex_image(&Generator::coordinatewise_log(2), 200, 1).holds());
        let v = check_convex_image(&Generator::parabola_shear(), 200, 1);
        assert!(v.fails());
        let w = v.witness.unwrap();
        // independent oracle: second preimage coordinate v − u² must leave (0,1)
        let (u, q) = (w.image[0], w.image[1]);
        assert!(q - u * u >= 1.0 || q - u * u <= 0.0);
        assert!(w.margin > 1e-8);
    }

    #[test]
    fn builtins_round_trip() {
        for g in [
            Generator::identity(3),
            Generator::coordinatewise_power(-1.5, 2).unwrap(),
            Generator::coordinatewise_log(2),
            Generator::coordinatewise_exp(2),
            Generator::parabola_shear(),
            Generator::parabola_radial(),
            Generator::square_to_ball(),
        ] {
            let v = validate(&g, 500, 7);
            assert!(v.passed(), "{}: {v:?}", g.name);
        }
    }
}
