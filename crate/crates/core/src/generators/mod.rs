//! Generators: continuous injections f: C → ℝᵏ on an open convex domain,
//! each with an inverse, plus sampled validators.

mod domain;
mod table;
mod validate;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

pub use domain::{Domain, CLAMP_SLACK};
pub use table::MonotoneTable;
pub use validate::{check_convex_image, validate, GeneratorValidation};

/// Round-trip tolerance for f⁻¹(f(x)) = x, relative to coordinate size.
pub const ROUND_TRIP_TOL: f64 = 1e-8;

/// One-dimensional map applied to every coordinate.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "map", rename_all = "kebab-case")]
pub enum ScalarMap {
    Power { p: f64 },
    Log,
    Exp,
    Table(MonotoneTable),
}

impl ScalarMap {
    #[inline]
    fn forward(&self, x: f64) -> f64 {
        match self {
            ScalarMap::Power { p } => x.powf(*p),
            ScalarMap::Log => x.ln(),
            ScalarMap::Exp => x.exp(),
            ScalarMap::Table(t) => t.forward(x),
        }
    }

    #[inline]
    fn inverse(&self, y: f64) -> f64 {
        match self {
            ScalarMap::Power { p } => {
                if y > 0.0 {
                    y.powf(1.0 / p)
                } else {
                    f64::NAN
                }
            }
            ScalarMap::Log => y.exp(),
            ScalarMap::Exp => {
                if y > 0.0 {
                    y.ln()
                } else {
                    f64::NAN
                }
            }
            ScalarMap::Table(t) => t.inverse(y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Kind {
    Identity,
    Coordinatewise(ScalarMap),
    /// (x, y) ↦ (x, x² + y) on (0,1)².
    ParabolaShear,
    /// (x, y) ↦ (x, x² + y²) on (0,∞)².
    ParabolaRadial,
    /// Maps sup-norm circles of radius r onto Euclidean circles of radius r.
    SquareToBall,
}

/// An injective continuous map with its domain and closed-form (or
/// bisection) inverse. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Generator {
    pub name: String,
    pub dim: usize,
    pub kind: Kind,
    pub domain: Domain,
    /// Whether f[C] is known to be convex. Metadata only: see
    /// [`check_convex_image`] for the sampled test.
    pub claims_convex_image: bool,
}

/// Generator selection as it appears in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    /// Exponent for `coordinatewise_power`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// (x, y) knots for `coordinatewise_table`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knots: Option<Vec<[f64; 2]>>,
}

impl Generator {
    pub fn identity(k: usize) -> Self {
        Generator {
            name: "identity".into(),
            dim: k,
            kind: Kind::Identity,
            domain: Domain::FullSpace { dim: k },
            claims_convex_image: true,
        }
    }

    pub fn coordinatewise_power(p: f64, k: usize) -> Result<Self> {
        if p == 0.0 || !p.is_finite() {
            return Err(Error::InvalidParameter(format!("power exponent must be finite and nonzero, got {p}")));
        }
        Ok(Generator {
            name: "coordinatewise_power".into(),
            dim: k,
            kind: Kind::Coordinatewise(ScalarMap::Power { p }),
            domain: Domain::PositiveOrthant { dim: k },
            claims_convex_image: true,
        })
    }

    pub fn coordinatewise_log(k: usize) -> Self {
        Generator {
            name: "coordinatewise_log".into(),
            dim: k,
            kind: Kind::Coordinatewise(ScalarMap::Log),
            domain: Domain::PositiveOrthant { dim: k },
            claims_convex_image: true,
        }
    }

    pub fn coordinatewise_exp(k: usize) -> Self {
        Generator {
            name: "coordinatewise_exp".into(),
            dim: k,
            kind: Kind::Coordinatewise(ScalarMap::Exp),
            domain: Domain::FullSpace { dim: k },
            claims_convex_image: true,
        }
    }

    /// Coordinatewise piecewise-linear map through the given knots,
    /// inverted by bisection.
    pub fn coordinatewise_table(table: MonotoneTable, k: usize) -> Result<Self> {
        let (lo, hi) = table.support();
        Ok(Generator {
            name: "coordinatewise_table".into(),
            dim: k,
            domain: Domain::open_box(vec![lo; k], vec![hi; k])?,
            kind: Kind::Coordinatewise(ScalarMap::Table(table)),
            claims_convex_image: true,
        })
    }

    pub fn parabola_shear() -> Self {
        Generator {
            name: "parabola_shear".into(),
            dim: 2,
            kind: Kind::ParabolaShear,
            domain: Domain::OpenBox { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0] },
            claims_convex_image: false,
        }
    }

    pub fn parabola_radial() -> Self {
        Generator {
            name: "parabola_radial".into(),
            dim: 2,
            kind: Kind::ParabolaRadial,
            domain: Domain::PositiveOrthant { dim: 2 },
            claims_convex_image: true,
        }
    }

    pub fn square_to_ball() -> Self {
        Generator {
            name: "square_to_ball".into(),
            dim: 2,
            kind: Kind::SquareToBall,
            domain: Domain::FullSpace { dim: 2 },
            claims_convex_image: true,
        }
    }

    pub fn from_spec(spec: &GeneratorSpec, k: usize) -> Result<Self> {
        let planar = |g: Generator| {
            if k == 2 {
                Ok(g)
            } else {
                Err(Error::DimensionMismatch { expected: 2, found: k })
            }
        };
        match spec.name.as_str() {
            "identity" => Ok(Generator::identity(k)),
            "coordinatewise_power" => {
                let p = spec.p.ok_or_else(|| {
                    Error::InvalidParameter("coordinatewise_power needs parameter `p`".into())
                })?;
                Generator::coordinatewise_power(p, k)
            }
            "coordinatewise_log" => Ok(Generator::coordinatewise_log(k)),
            "coordinatewise_exp" => Ok(Generator::coordinatewise_exp(k)),
            "coordinatewise_table" => {
                let knots = spec.knots.as_ref().ok_or_else(|| {
                    Error::InvalidParameter("coordinatewise_table needs `knots`".into())
                })?;
                Generator::coordinatewise_table(MonotoneTable::new(knots)?, k)
            }
            "parabola_shear" => planar(Generator::parabola_shear()),
            "parabola_radial" => planar(Generator::parabola_radial()),
            "square_to_ball" => planar(Generator::square_to_ball()),
            other => Err(Error::InvalidParameter(format!("unknown generator `{other}`"))),
        }
    }

    /// f(x) without domain checks.
    #[inline]
    pub fn forward_into(&self, x: &[f64], out: &mut [f64]) {
        match &self.kind {
            Kind::Identity => out.copy_from_slice(x),
            Kind::Coordinatewise(m) => {
                for (o, &xi) in out.iter_mut().zip(x) {
                    *o = m.forward(xi);
                }
            }
            Kind::ParabolaShear => {
                out[0] = x[0];
                out[1] = x[0] * x[0] + x[1];
            }
            Kind::ParabolaRadial => {
                out[0] = x[0];
                out[1] = x[0] * x[0] + x[1] * x[1];
            }
            Kind::SquareToBall => {
                if x[0] == 0.0 && x[1] == 0.0 {
                    out[0] = 0.0;
                    out[1] = 0.0;
                } else {
                    let m = x[0].abs().max(x[1].abs());
                    let theta = x[1].atan2(x[0]);
                    out[0] = m * theta.cos();
                    out[1] = m * theta.sin();
                }
            }
        }
    }

    /// Closed-form (or bisection) inverse without image checks; may return
    /// NaN or points outside C when `y ∉ f[C]`.
    #[inline]
    pub fn inverse_into(&self, y: &[f64], out: &mut [f64]) {
        match &self.kind {
            Kind::Identity => out.copy_from_slice(y),
            Kind::Coordinatewise(m) => {
                for (o, &yi) in out.iter_mut().zip(y) {
                    *o = m.inverse(yi);
                }
            }
            Kind::ParabolaShear => {
                out[0] = y[0];
                out[1] = y[1] - y[0] * y[0];
            }
            Kind::ParabolaRadial => {
                out[0] = y[0];
                let r = y[1] - y[0] * y[0];
                out[1] = if r >= 0.0 { r.sqrt() } else { f64::NAN };
            }
            Kind::SquareToBall => {
                let r = y[0].hypot(y[1]);
                if r == 0.0 {
                    out[0] = 0.0;
                    out[1] = 0.0;
                } else {
                    let theta = y[1].atan2(y[0]);
                    let (s, c) = theta.sin_cos();
                    let m = c.abs().max(s.abs());
                    out[0] = r * c / m;
                    out[1] = r * s / m;
                }
            }
        }
    }

    fn check_dim(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: p.len() });
        }
        Ok(())
    }

    /// f(p), requiring p ∈ C.
    pub fn apply(&self, p: &[f64]) -> Result<Point> {
        self.check_dim(p)?;
        if !self.domain.contains(p) {
            return Err(Error::OutsideDomain { generator: self.name.clone(), point: p.to_vec() });
        }
        let mut out = vec![0.0; self.dim];
        self.forward_into(p, &mut out);
        if out.iter().any(|x| !x.is_finite()) {
            return Err(Error::NumericalFailure(format!("f({p:?}) is not finite")));
        }
        Point::new(out)
    }

    /// f⁻¹(q), requiring q ∈ f[C]: the preimage must lie in C and map back
    /// to q within [`ROUND_TRIP_TOL`].
    pub fn invert(&self, q: &[f64]) -> Result<Point> {
        self.check_dim(q)?;
        let mut x = vec![0.0; self.dim];
        self.inverse_into(q, &mut x);
        if !self.domain.contains(&x) {
            return Err(Error::OutsideImage { generator: self.name.clone(), point: q.to_vec() });
        }
        if self.round_trip_error(&x, q) > ROUND_TRIP_TOL {
            return Err(Error::OutsideImage { generator: self.name.clone(), point: q.to_vec() });
        }
        Point::new(x)
    }

    /// max |f(x)ᵢ − qᵢ| / max(1, |qᵢ|).
    pub fn round_trip_error(&self, x: &[f64], q: &[f64]) -> f64 {
        let mut back = vec![0.0; self.dim];
        self.forward_into(x, &mut back);
        back.iter()
            .zip(q)
            .map(|(b, y)| (b - y).abs() / y.abs().max(1.0))
            .fold(0.0_f64, |m, e| if e.is_nan() { f64::INFINITY } else { m.max(e) })
    }

    /// Whether f(x)ᵢ depends on xᵢ alone.
    pub fn is_coordinatewise(&self) -> bool {
        matches!(self.kind, Kind::Identity | Kind::Coordinatewise(_))
    }
}
