use std::path::Path;
use std::process::Command;
use std::time::Instant;

use qamlab::gallery::{self, GALLERY};
use qamlab::report::CSV_HEADER;
use qamlab::{parse_scenario, run_scenario, write_outputs};

const BIN: &str = env!("CARGO_BIN_EXE_qamlab");

const BOX: &str = r#"
name = "box"
dimension = 2
weights = [0.5, 0.5]
checks = ["density"]
[generator]
name = "coordinatewise_log"
[set]
kind = "box-corners"
lo = 1.0
hi = 2.0
[run]
iterations = 3
"#;

fn qamlab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn scenario_file(dir: &Path, body: &str) -> String {
    let path = dir.join("s.toml");
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn check_accepts_valid_and_rejects_invalid_documents() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = qamlab(&["check", &scenario_file(dir.path(), BOX)]);
    assert_eq!(code, 0);
    assert!(out.contains("box: ok (4 points"), "{out}");

    let (code, _, err) = qamlab(&["check", &scenario_file(dir.path(), &BOX.replace("[0.5, 0.5]", "[0.5, 0.6]"))]);
    assert_eq!(code, 1);
    assert!(err.contains("weights must sum to 1"), "{err}");

    let (code, _, err) = qamlab(&["check", &scenario_file(dir.path(), "name = [")]);
    assert_eq!(code, 1);
    assert!(err.contains("config-error"), "{err}");

    let (code, _, _) = qamlab(&["check", "/nonexistent/scenario.toml"]);
    assert_eq!(code, 1);
}

#[test]
fn domain_violation_exits_3_with_partial_report() {
    // the mean of these two points has an image with no preimage in the
    // open unit square
    let text = r#"
name = "escape"
dimension = 2
weights = [0.5, 0.5]
checks = ["cond3", "density"]
[generator]
name = "parabola_shear"
[set]
kind = "points"
points = [[0.01, 0.99], [0.99, 0.99], [0.5, 0.5]]
"#;
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let (code, _, err) =
        qamlab(&["run", &scenario_file(dir.path(), text), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code, 3, "{err}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("escape.json")).unwrap()).unwrap();
    assert_eq!(report["error"]["exit_code"], 3);
    assert_eq!(report["error"]["class"], "domain-violation");
    assert_eq!(report["results"].as_array().unwrap().len(), 1, "cond3 result kept");
}

#[test]
fn numerical_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let text = BOX.replace("iterations = 3", "grid_resolution = 1e-5");
    let out = dir.path().join("out");
    let (code, _, err) = qamlab(&["run", &scenario_file(dir.path(), &text), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("numerical-failure"), "{err}");
    assert!(out.join("box.json").exists());
}

#[test]
fn overrides_and_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let file = scenario_file(dir.path(), BOX);
    let (code, _, _) = qamlab(&["run", &file, "--iterations", "4", "--seed", "7", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code, 0);

    let csv = std::fs::read_to_string(out.join("box.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    for (i, row) in rows.iter().enumerate() {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f.len(), 4);
        assert_eq!(f[0].parse::<usize>().unwrap(), i);
        f[1].parse::<usize>().unwrap();
        for v in &f[2..] {
            v.parse::<f64>().unwrap();
            let mantissa = v.split('e').next().unwrap();
            let digits = mantissa.chars().filter(char::is_ascii_digit).count();
            assert!(digits >= 12, "{v}");
        }
    }

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("box.json")).unwrap()).unwrap();
    assert_eq!(report["scenario"]["run"]["seed"], 7);
    assert_eq!(report["scenario"]["run"]["iterations"], 4);
    assert!(out.join("box.svg").exists());
}

#[test]
fn gallery_listing_and_printing() {
    let (code, out, _) = qamlab(&["gallery"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), GALLERY.len());
    let (code, out, _) = qamlab(&["gallery", "--print", "remark2-square-ball"]);
    assert_eq!(code, 0);
    assert_eq!(out, gallery::find("remark2-square-ball").unwrap().text);
    let (code, _, _) = qamlab(&["gallery", "--print", "nope"]);
    assert_eq!(code, 1);
}

#[test]
fn gallery_scenarios_parse_and_match_their_names() {
    assert_eq!(GALLERY.len(), 7);
    for e in GALLERY {
        let s = parse_scenario(e.text).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        assert_eq!(s.name, e.name);
    }
    let r2 = parse_scenario(gallery::find("remark2-square-ball.toml").unwrap().text).unwrap();
    assert_eq!(r2.generator.name, "square_to_ball");
    assert!(r2.noncompact_surrogate);
    assert!(r2.set.iter().all(|p| (p[0] - 1.0).hypot(p[1]) > 0.05));
}

#[test]
fn every_gallery_scenario_completes_quickly_and_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    for e in GALLERY {
        let s = parse_scenario(e.text).unwrap();
        let t = Instant::now();
        let run = run_scenario(&s);
        let secs = t.elapsed().as_secs_f64();
        assert!(run.error.is_none(), "{}: {:?}", e.name, run.error);
        assert!(secs < 60.0, "{} took {secs:.1} s", e.name);
        assert_eq!(run.report.results.len(), s.checks.len(), "{}", e.name);
        let again = run_scenario(&s);
        assert_eq!(run.report.to_json(), again.report.to_json(), "{}", e.name);
        write_outputs(&s, &run, dir.path()).unwrap();
    }
    let svg = std::fs::read_to_string(dir.path().join("remark2-square-ball.svg")).unwrap();
    assert!(svg.contains("<polygon") && svg.contains("cond3"));
    assert!(dir.path().join("theorem1-dyadic.points.csv").exists());
}

#[test]
fn verdicts_of_reference_scenarios() {
    let run = |name: &str| run_scenario(&parse_scenario(gallery::find(name).unwrap().text).unwrap()).report;

    let dyadic = run("theorem1-dyadic");
    let d = dyadic.density().unwrap();
    for row in &d.rows {
        assert_eq!(row.covering_radius, 0.5f64.powi(row.n as i32 + 1));
    }

    let tri = run("parabola-radial-triangle");
    assert!(tri.verdict("cond2").unwrap().fails());
    assert!(!tri.density().unwrap().is_dense());
    assert!(!tri.consistency.as_ref().unwrap().theorem_violation());

    let bx = run("corollary1-geometric-box");
    assert!(bx.density().unwrap().is_dense());
    for c in ["cond2", "cond3", "convex-image"] {
        assert!(bx.verdict(c).unwrap().holds(), "{c}");
    }
}
