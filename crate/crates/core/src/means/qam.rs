use super::weights::SimplexWeights;
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::geometry::Point;

/// Reusable buffers for mean evaluation.
pub(crate) struct Scratch {
    fx: Vec<f64>,
    acc: Vec<f64>,
    pub(crate) out: Vec<f64>,
}

impl Scratch {
    pub(crate) fn new(k: usize) -> Self {
        Scratch { fx: vec![0.0; k], acc: vec![0.0; k], out: vec![0.0; k] }
    }
}

/// f⁻¹(Σγᵢf(xᵢ)) into `s.out`. The single arithmetic path shared by
/// [`qam`] and the mean operator, so both agree bitwise. Results within
/// the clamp slack of ∂C are pulled inside; anything farther out means
/// the image sum left f[C].
pub(crate) fn combine<'a, I>(g: &Generator, gamma: &[f64], points: I, s: &mut Scratch) -> Result<()>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    s.acc.iter_mut().for_each(|a| *a = 0.0);
    for (&w, x) in gamma.iter().zip(points) {
        g.forward_into(x, &mut s.fx);
        for (a, y) in s.acc.iter_mut().zip(&s.fx) {
            *a += w * y;
        }
    }
    if s.acc.iter().any(|a| !a.is_finite()) {
        return Err(Error::NumericalFailure(format!("image sum {:?} is not finite", s.acc)));
    }
    g.inverse_into(&s.acc, &mut s.out);
    if g.domain.contains(&s.out) {
        return Ok(());
    }
    match g.domain.clamp_inside(&s.out) {
        Some(q) => {
            s.out.copy_from_slice(&q);
            Ok(())
        }
        None => Err(Error::OutsideImage { generator: g.name.clone(), point: s.acc.clone() }),
    }
}

/// Weighted quasi-arithmetic mean f⁻¹(Σγᵢf(xᵢ)) of points in the domain.
pub fn qam(g: &Generator, gamma: &SimplexWeights, points: &[Point]) -> Result<Point> {
    if points.len() != gamma.len() {
        return Err(Error::DimensionMismatch { expected: gamma.len(), found: points.len() });
    }
    for p in points {
        if p.dim() != g.dim {
            return Err(Error::DimensionMismatch { expected: g.dim, found: p.dim() });
        }
        if !g.domain.contains(p) {
            return Err(Error::OutsideDomain { generator: g.name.clone(), point: p.to_vec() });
        }
    }
    let mut s = Scratch::new(g.dim);
    combine(g, gamma.values(), points.iter().map(|p| p.coords()), &mut s)?;
    Point::new(s.out)
}
