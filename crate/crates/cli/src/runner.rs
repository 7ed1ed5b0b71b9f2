//! Executes a scenario's checks in order and assembles the report.

use std::fs;
use std::path::{Path, PathBuf};

use qamlab_core::conditions::{
    assess_consistency, check_condition_ii, check_condition_iii, check_density_orbit, interior_failure_is_gross,
    lemma5_property,
};
use qamlab_core::generators::{check_convex_image, validate};
use qamlab_core::geometry::{convex_hull, gustin_witness, in_interior};
use qamlab_core::means::{is_fixed_point, iterate, OrbitState};

use crate::error::CliError;
use crate::report::{density_csv, CheckResult, ErrorEntry, FixedPointResult, GustinResult, RunReport};
use crate::scenario::{Check, Scenario};
use crate::svg::{points_csv, render_orbit_svg};

/// Subset enumeration for the sharpness side of the subset check.
const MAX_GUSTIN_SOURCE: usize = 16;

/// Everything a run produces, before anything touches the filesystem.
#[derive(Debug)]
pub struct Run {
    pub report: RunReport,
    pub csv: Option<String>,
    pub svg: Option<String>,
    pub points_csv: Option<String>,
    pub error: Option<CliError>,
}

impl Run {
    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(0, CliError::exit_code)
    }
}

fn run_check(s: &Scenario, check: Check, orbit: &mut Option<OrbitState>) -> Result<CheckResult, CliError> {
    let (g, w, set, r) = (&s.generator, &s.weights, &s.set, &s.run);
    Ok(match check {
        Check::Density => {
            let (report, last) = check_density_orbit(g, w, set, r.iterations, r.grid_resolution, &r.orbit())?;
            *orbit = Some(last);
            CheckResult::Density(report)
        }
        Check::Cond2 => CheckResult::Cond2(check_condition_ii(g, set, r.sample_count, r.margin, r.seed)?),
        Check::Cond3 => CheckResult::Cond3(check_condition_iii(g, set, r.sample_count, r.tolerance, r.seed)?),
        Check::Lemma5 => CheckResult::Lemma5(lemma5_property(g, set, r.sample_count, r.margin, r.seed)?),
        Check::ConvexImage => CheckResult::ConvexImage {
            verdict: check_convex_image(g, r.sample_count, r.seed),
            validation: validate(g, r.sample_count, r.seed),
        },
        Check::FixedPoint => {
            if orbit.is_none() {
                *orbit = iterate(g, w, set, r.iterations, &r.orbit())?.pop();
            }
            let state = orbit.as_ref().expect("orbit computed");
            CheckResult::FixedPoint(FixedPointResult {
                fixed: is_fixed_point(g, w, &state.set, r.delta)?,
                generation: state.generation,
                set_size: state.len(),
                delta: r.delta,
            })
        }
        Check::Gustin => CheckResult::Gustin(gustin_check(s)?),
    })
}

/// Gustin witness for the centroid of S, plus whether any subset of size
/// 2k − 1 would already do.
fn gustin_check(s: &Scenario) -> Result<GustinResult, CliError> {
    let set = &s.set;
    if set.len() > MAX_GUSTIN_SOURCE {
        return Err(CliError::Config(format!(
            "checks: gustin enumerates subsets; |S| = {} exceeds {MAX_GUSTIN_SOURCE}",
            set.len()
        )));
    }
    let p = set.centroid();
    let witness = gustin_witness(&p, set, s.run.margin)?;
    let k = set.dim();
    let size = 2 * k - 1;
    let mut smaller = false;
    if size <= set.len() {
        let mut combo: Vec<usize> = (0..size).collect();
        'search: loop {
            if in_interior(&p, &set.select(&combo), s.run.margin)? {
                smaller = true;
                break;
            }
            let n = set.len();
            let mut i = size;
            while i > 0 {
                i -= 1;
                if combo[i] < n - size + i {
                    combo[i] += 1;
                    for j in i + 1..size {
                        combo[j] = combo[j - 1] + 1;
                    }
                    continue 'search;
                }
            }
            break;
        }
    }
    Ok(GustinResult {
        point: p,
        margin: witness.margin,
        subset_size: witness.points.len(),
        subset: witness.points.to_rows(),
        smaller_subset_suffices: smaller,
    })
}

/// Runs the scenario. Stops at the first failing check and keeps what was
/// computed so far, with the error recorded in the report.
pub fn run_scenario(s: &Scenario) -> Run {
    let mut report = RunReport::new(s.clone());
    let mut orbit = None;
    let mut error = None;
    for &check in &s.checks {
        match run_check(s, check, &mut orbit) {
            Ok(r) => report.results.push(r),
            Err(e) => {
                report.error = Some(ErrorEntry { class: e.class_name(), exit_code: e.exit_code(), message: e.to_string() });
                error = Some(e);
                break;
            }
        }
    }

    if let (Some(d), Some(ii), Some(iii)) = (report.density(), report.verdict("cond2"), report.verdict("cond3")) {
        match interior_failure_is_gross(&s.generator, &s.set, ii, s.run.tolerance) {
            Ok(gross) => {
                report.consistency = Some(assess_consistency(d.verdict, ii, iii, gross, s.noncompact_surrogate));
            }
            Err(e) => report.notes.push(format!("consistency not assessed: {e}")),
        }
    }
    if s.checks.iter().any(|c| matches!(c, Check::Cond2 | Check::Lemma5 | Check::Gustin)) {
        report.notes.push(format!(
            "interior is tested by probing p ± margin·e_i with margin {:e}; points within the margin of a boundary can be misclassified",
            s.run.margin
        ));
    }
    if s.noncompact_surrogate {
        report.notes.push(format!(
            "non-compact surrogate: S is a finite sample of {} points; only hull-inclusion => interior-inclusion is enforced",
            s.set_size
        ));
    }

    let csv = report.density().map(density_csv);
    let mut svg = None;
    let mut points = None;
    match &orbit {
        Some(state) if s.dimension == 2 => match convex_hull(&s.set) {
            Ok(hull) => {
                let witnesses: Vec<(String, Vec<f64>)> = ["cond2", "cond3"]
                    .iter()
                    .filter_map(|c| report.verdict(c).and_then(|v| v.witness.as_ref()).map(|w| (c.to_string(), w.point.clone())))
                    .collect();
                svg = render_orbit_svg(state, &hull, &witnesses);
            }
            Err(e) => report.notes.push(format!("plot skipped: {e}")),
        },
        Some(state) => {
            report.notes.push(format!(
                "unsupported-dimension: plots need k = 2 (k = {}); orbit points exported as CSV",
                s.dimension
            ));
            points = Some(points_csv(state));
        }
        None => {}
    }
    Run { report, csv, svg, points_csv: points, error }
}

fn write(path: PathBuf, body: &str) -> Result<PathBuf, CliError> {
    fs::write(&path, body).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(path)
}

/// Writes the JSON report and whichever of CSV / SVG / point dump exist.
pub fn write_outputs(s: &Scenario, run: &Run, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io { path: out_dir.display().to_string(), source })?;
    let mut written = vec![write(out_dir.join(s.json_name()), &run.report.to_json())?];
    if let Some(csv) = &run.csv {
        written.push(write(out_dir.join(s.csv_name()), csv)?);
    }
    if let Some(svg) = &run.svg {
        written.push(write(out_dir.join(s.svg_name()), svg)?);
    }
    if let Some(points) = &run.points_csv {
        let name = s.svg_name();
        let stem = name.strip_suffix(".svg").unwrap_or(&name);
        written.push(write(out_dir.join(format!("{stem}.points.csv")), points)?);
    }
    Ok(written)
}
