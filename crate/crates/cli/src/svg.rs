//! Planar orbit plots.

use std::fmt::Write as _;

use qamlab_core::geometry::Hull;
use qamlab_core::means::OrbitState;

const WIDTH: f64 = 640.0;
const MAX_POINTS: usize = 20_000;
const PADDING: f64 = 0.05;

/// Renders conv(S) and the orbit (colored by birth generation) with the
/// witnesses marked. `None` unless the plane is two-dimensional.
pub fn render_orbit_svg(state: &OrbitState, hull: &Hull, witnesses: &[(String, Vec<f64>)]) -> Option<String> {
    if hull.dim() != 2 || state.set.dim() != 2 {
        return None;
    }
    let (lo, hi) = hull.bounding_box();
    let span = |j: usize| (hi[j] - lo[j]).max(1e-12 * (1.0 + hi[j].abs()));
    let (w, h) = (span(0) * (1.0 + 2.0 * PADDING), span(1) * (1.0 + 2.0 * PADDING));
    let (x0, y0) = (lo[0] - PADDING * span(0), lo[1] - PADDING * span(1));
    let scale = WIDTH / w;
    let height = (h * scale).clamp(80.0, 4.0 * WIDTH);
    let sy = height / h;
    let px = |p: &[f64]| ((p[0] - x0) * scale, height - (p[1] - y0) * sy);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}">"#
    )
    .ok()?;
    writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).ok()?;

    let outline: Vec<String> = hull
        .vertices
        .iter()
        .map(|v| {
            let (x, y) = px(v);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let tag = if hull.is_full_dimensional() { "polygon" } else { "polyline" };
    writeln!(out, r##"<{tag} points="{}" fill="none" stroke="#333333" stroke-width="1.5"/>"##, outline.join(" ")).ok()?;

    let last_gen = state.born.iter().copied().max().unwrap_or(0).max(1);
    let stride = state.set.len().div_ceil(MAX_POINTS).max(1);
    for (i, p) in state.set.iter().enumerate().step_by(stride) {
        let (x, y) = px(p);
        let hue = 240.0 - 240.0 * state.born[i] as f64 / last_gen as f64;
        writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.2" fill="hsl({hue:.0},70%,45%)"/>"#).ok()?;
    }
    for (label, p) in witnesses {
        let (x, y) = px(p);
        writeln!(
            out,
            r##"<g><circle cx="{x:.2}" cy="{y:.2}" r="6" fill="none" stroke="#d00000" stroke-width="2"/><text x="{:.2}" y="{:.2}" font-size="12" fill="#d00000">{label}</text></g>"##,
            x + 8.0,
            y - 8.0
        )
        .ok()?;
    }
    writeln!(out, "</svg>").ok()?;
    Some(out)
}

/// CSV dump of orbit points with their birth generation, for any k.
pub fn points_csv(state: &OrbitState) -> String {
    let k = state.set.dim();
    let mut out: Vec<String> = (1..=k).map(|j| format!("x{j}")).collect();
    out.push("born".into());
    let mut s = out.join(",");
    s.push('\n');
    for (p, b) in state.set.iter().zip(&state.born) {
        for x in p {
            write!(s, "{x:.15e},").expect("string write");
        }
        writeln!(s, "{b}").expect("string write");
    }
    s
}
