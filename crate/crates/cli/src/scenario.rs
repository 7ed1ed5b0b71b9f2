//! Scenario files: parsing, validation and default resolution.

use std::collections::HashSet;

use qamlab_core::generators::{Generator, GeneratorSpec};
use qamlab_core::geometry::PointSet;
use qamlab_core::means::{parse_fraction, OrbitParams, Weights};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Exclusion comparisons allow this relative slack so grid points that
/// sit exactly on the exclusion circle are removed despite rounding.
const EXCLUSION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Density,
    Cond2,
    Cond3,
    Lemma5,
    ConvexImage,
    FixedPoint,
    Gustin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightValue {
    Number(f64),
    Fraction(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Region {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Exclusion {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetSpec {
    Points {
        points: Vec<Vec<f64>>,
    },
    /// The 2ᵏ corners of [lo, hi]ᵏ.
    BoxCorners {
        lo: f64,
        hi: f64,
    },
    /// Grid points of pitch `pitch`, or `count` seeded uniform draws, in
    /// the region, minus the exclusion balls.
    SampledRegion {
        region: Region,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pitch: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        count: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        exclude: Vec<Exclusion>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub iterations: Option<usize>,
    pub delta: Option<f64>,
    pub max_points: Option<usize>,
    pub tuple_budget: Option<usize>,
    pub grid_resolution: Option<f64>,
    pub margin: Option<f64>,
    pub tolerance: Option<f64>,
    pub sample_count: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub json: Option<String>,
    pub csv: Option<String>,
    pub svg: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    #[serde(default)]
    description: Option<String>,
    dimension: usize,
    generator: GeneratorSpec,
    weights: Vec<WeightValue>,
    set: SetSpec,
    #[serde(default)]
    noncompact_surrogate: bool,
    #[serde(default)]
    run: RunSpec,
    checks: Vec<Check>,
    #[serde(default)]
    outputs: Outputs,
}

/// Run parameters with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunParams {
    pub iterations: usize,
    pub delta: f64,
    pub max_points: usize,
    pub tuple_budget: usize,
    pub grid_resolution: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub sample_count: usize,
    pub seed: u64,
}

impl RunParams {
    pub fn orbit(&self) -> OrbitParams {
        OrbitParams {
            delta: self.delta,
            max_points: self.max_points,
            tuple_budget: self.tuple_budget,
            seed: self.seed,
        }
    }
}

/// A validated scenario.
#[derive(Debug, Clone, Serialize)]
pub struct Scenario {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub dimension: usize,
    #[serde(rename = "generator")]
    pub generator_spec: GeneratorSpec,
    #[serde(skip)]
    pub generator: Generator,
    pub weights: Weights,
    #[serde(rename = "set")]
    pub set_spec: SetSpec,
    #[serde(skip)]
    pub set: PointSet,
    pub set_size: usize,
    pub noncompact_surrogate: bool,
    pub run: RunParams,
    pub checks: Vec<Check>,
    pub outputs: Outputs,
}

impl Scenario {
    pub fn json_name(&self) -> String {
        self.outputs.json.clone().unwrap_or_else(|| format!("{}.json", self.name))
    }

    pub fn csv_name(&self) -> String {
        self.outputs.csv.clone().unwrap_or_else(|| format!("{}.csv", self.name))
    }

    pub fn svg_name(&self) -> String {
        self.outputs.svg.clone().unwrap_or_else(|| format!("{}.svg", self.name))
    }
}

fn semantic(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

fn positive(field: &str, v: Option<f64>, default: f64) -> Result<f64, CliError> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(semantic(field, format!("must be positive, got {x}"))),
        Some(x) => Ok(x),
        None => Ok(default),
    }
}

fn weights(values: &[WeightValue]) -> Result<Weights, CliError> {
    let raw = values
        .iter()
        .map(|v| match v {
            WeightValue::Number(x) => Ok(*x),
            WeightValue::Fraction(s) => parse_fraction(s),
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| semantic("weights", e))?;
    Weights::new(raw).map_err(|e| semantic("weights", e))
}

fn check_len(field: &str, v: &[f64], k: usize) -> Result<(), CliError> {
    if v.len() != k {
        return Err(semantic(field, format!("expected {k} coordinates, got {}", v.len())));
    }
    Ok(())
}

fn build_set(spec: &SetSpec, k: usize) -> Result<PointSet, CliError> {
    let rows: Vec<Vec<f64>> = match spec {
        SetSpec::Points { points } => {
            for (i, p) in points.iter().enumerate() {
                check_len(&format!("set.points[{i}]"), p, k)?;
            }
            points.clone()
        }
        SetSpec::BoxCorners { lo, hi } => {
            if !(lo < hi) {
                return Err(semantic("set", format!("box needs lo < hi, got [{lo}, {hi}]")));
            }
            if k > 20 {
                return Err(semantic("set", "box corners limited to dimension 20"));
            }
            (0..1usize << k)
                .map(|mask| (0..k).map(|j| if mask >> (k - 1 - j) & 1 == 1 { *hi } else { *lo }).collect())
                .collect()
        }
        SetSpec::SampledRegion { region, pitch, count, seed, exclude } => {
            for (i, e) in exclude.iter().enumerate() {
                check_len(&format!("set.exclude[{i}].center"), &e.center, k)?;
            }
            let (lo, hi) = match region {
                Region::Box { lo, hi } => {
                    check_len("set.region.lo", lo, k)?;
                    check_len("set.region.hi", hi, k)?;
                    if lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
                        return Err(semantic("set.region", "box needs lo < hi in every coordinate"));
                    }
                    (lo.clone(), hi.clone())
                }
                Region::Ball { center, radius } => {
                    check_len("set.region.center", center, k)?;
                    if !(*radius > 0.0) {
                        return Err(semantic("set.region.radius", "must be positive"));
                    }
                    (center.iter().map(|c| c - radius).collect(), center.iter().map(|c| c + radius).collect())
                }
            };
            let in_region = |p: &[f64]| match region {
                Region::Box { .. } => true,
                Region::Ball { center, radius } => dist(p, center) <= radius * (1.0 + EXCLUSION_SLACK),
            };
            let kept = |p: &[f64]| {
                in_region(p) && exclude.iter().all(|e| dist(p, &e.center) > e.radius * (1.0 + EXCLUSION_SLACK))
            };
            match (pitch, count) {
                (Some(pitch), None) => {
                    let pitch = positive("set.pitch", Some(*pitch), 0.0)?;
                    let counts: Vec<usize> =
                        lo.iter().zip(&hi).map(|(a, b)| ((b - a) / pitch + 1e-9).floor() as usize + 1).collect();
                    let total = counts.iter().try_fold(1usize, |a, &c| a.checked_mul(c)).unwrap_or(usize::MAX);
                    if total > 5_000_000 {
                        return Err(semantic("set.pitch", format!("grid would have {total} points")));
                    }
                    (0..total)
                        .map(|flat| {
                            let mut rem = flat;
                            let mut p = vec![0.0; k];
                            for j in (0..k).rev() {
                                p[j] = lo[j] + (rem % counts[j]) as f64 * pitch;
                                rem /= counts[j];
                            }
                            p
                        })
                        .filter(|p| kept(p))
                        .collect()
                }
                (None, Some(count)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(42));
                    let mut out = Vec::with_capacity(*count);
                    let mut attempts = 0usize;
                    while out.len() < *count {
                        attempts += 1;
                        if attempts > 1000 * count + 1000 {
                            return Err(semantic("set", "region too small after exclusions"));
                        }
                        let p: Vec<f64> =
                            lo.iter().zip(&hi).map(|(a, b)| a + (b - a) * rng.random::<f64>()).collect();
                        if kept(&p) {
                            out.push(p);
                        }
                    }
                    out
                }
                _ => return Err(semantic("set", "sampled-region needs exactly one of `pitch` or `count`")),
            }
        }
    };
    if rows.is_empty() {
        return Err(semantic("set", "set is empty"));
    }
    PointSet::from_points(k, &rows, 0.0).map_err(|e| semantic("set", e))
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Parses and validates a TOML scenario, filling defaults that scale with
/// the bounding-box diagonal of S.
pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    if file.name.is_empty() || !file.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
        return Err(semantic("name", "use letters, digits, '-' or '_'"));
    }
    let k = file.dimension;
    if k == 0 {
        return Err(semantic("dimension", "must be at least 1"));
    }
    let generator = Generator::from_spec(&file.generator, k).map_err(|e| semantic("generator", e))?;
    let weights = weights(&file.weights)?;
    let set = build_set(&file.set, k)?;
    if let Some(p) = set.iter().find(|p| !generator.domain.contains(p)) {
        return Err(semantic("set", format!("point {p:?} is outside the domain of `{}`", generator.name)));
    }
    if file.checks.is_empty() {
        return Err(semantic("checks", "request at least one check"));
    }
    let mut seen = HashSet::new();
    if let Some(dup) = file.checks.iter().find(|c| !seen.insert(**c)) {
        return Err(semantic("checks", format!("{dup:?} listed twice")));
    }
    let diag = set.diagonal();
    let scale = if diag > 0.0 { diag } else { 1.0 };
    let r = &file.run;
    let delta = match r.delta {
        Some(d) if !(d >= 0.0 && d.is_finite()) => return Err(semantic("run.delta", "must be >= 0")),
        Some(d) => d,
        None => 1e-3 * scale,
    };
    let count = |field: &str, v: Option<usize>, default: usize| match v {
        Some(0) => Err(semantic(field, "must be positive")),
        Some(x) => Ok(x),
        None => Ok(default),
    };
    let run = RunParams {
        iterations: r.iterations.unwrap_or(8),
        delta,
        max_points: count("run.max_points", r.max_points, OrbitParams::DEFAULT_MAX_POINTS)?,
        tuple_budget: count("run.tuple_budget", r.tuple_budget, OrbitParams::DEFAULT_TUPLE_BUDGET)?,
        grid_resolution: positive("run.grid_resolution", r.grid_resolution, 0.02 * scale)?,
        margin: positive("run.margin", r.margin, 1e-6 * scale)?,
        tolerance: positive("run.tolerance", r.tolerance, 1e-9)?,
        sample_count: count("run.sample_count", r.sample_count, 2000)?,
        seed: r.seed.unwrap_or(OrbitParams::DEFAULT_SEED),
    };
    Ok(Scenario {
        name: file.name,
        description: file.description,
        dimension: k,
        generator_spec: file.generator,
        generator,
        weights,
        set_spec: file.set,
        set_size: set.len(),
        set,
        noncompact_surrogate: file.noncompact_surrogate,
        run,
        checks: file.checks,
        outputs: file.outputs,
    })
}
