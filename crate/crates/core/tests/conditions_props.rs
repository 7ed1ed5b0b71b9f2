use proptest::prelude::*;
use qamlab_core::conditions::*;
use qamlab_core::generators::Generator;
use qamlab_core::geometry::{affine_dimension, PointSet};
use qamlab_core::means::{OrbitParams, Weights};

fn half() -> Weights {
    Weights::new(vec![0.5, 0.5]).unwrap()
}

fn rows(r: &[[f64; 2]]) -> PointSet {
    PointSet::from_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn positive_set() -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::collection::vec(0.5..3.0f64, 2), 3..7)
        .prop_map(|r| PointSet::from_rows(&r).unwrap())
        .prop_filter("2-dimensional", |s| {
            affine_dimension(s) == 2
                && qamlab_core::geometry::convex_hull(s).is_ok_and(|h| {
                    let (lo, hi) = h.bounding_box();
                    (hi[0] - lo[0]) > 0.3 && (hi[1] - lo[1]) > 0.3
                })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hull_inclusion_never_hides_a_gross_interior_failure(s in positive_set(), gi in 0usize..4) {
        let g = [
            Generator::identity(2),
            Generator::coordinatewise_log(2),
            Generator::coordinatewise_power(2.0, 2).unwrap(),
            Generator::parabola_radial(),
        ][gi].clone();
        let iii = check_condition_iii(&g, &s, 200, 1e-9, 5).unwrap();
        let ii = check_condition_ii(&g, &s, 200, 1e-6 * s.diagonal(), 5).unwrap();
        if iii.holds() {
            prop_assert!(!interior_failure_is_gross(&g, &s, &ii, 1e-9).unwrap(), "{}: {ii:?}", g.name);
        }
    }

    #[test]
    fn failures_carry_margins(s in positive_set()) {
        let g = Generator::parabola_radial();
        for v in [check_condition_iii(&g, &s, 100, 1e-9, 1).unwrap(), check_condition_ii(&g, &s, 100, 1e-6, 1).unwrap()] {
            if v.fails() {
                let w = v.witness.as_ref().unwrap();
                prop_assert!(w.margin > v.params.tolerance);
            }
        }
    }
}

#[test]
fn identity_orbits_are_dense_and_radii_nonincreasing() {
    let sets = [
        rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
        rows(&[[0.0, 0.0], [2.0, 0.5], [1.0, 2.0], [-0.5, 1.0]]),
        rows(&[[1.0, 1.0], [2.0, 1.0], [1.5, 2.0]]),
    ];
    for s in sets {
        let grid = 0.02 * s.diagonal();
        let r = check_density(&Generator::identity(2), &half(), &s, 8, grid, &OrbitParams::with_delta(1e-3 * s.diagonal()))
            .unwrap();
        assert!(r.is_dense(), "{r:?}");
        for pair in r.rows.windows(2) {
            assert!(pair[1].covering_radius <= pair[0].covering_radius);
        }
    }
}

#[test]
fn dyadic_density_radii() {
    let s = PointSet::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
    let r = check_density(&Generator::identity(1), &half(), &s, 6, 1.0 / 64.0, &OrbitParams::with_delta(0.0)).unwrap();
    // exact while the orbit {j/2ⁿ} is coarser than the grid; {j/64} covers it
    for row in &r.rows[..6] {
        assert_eq!(row.covering_radius, 0.5f64.powi(row.n as i32 + 1));
    }
    assert_eq!(r.rows[6].covering_radius, 0.0);
    assert_eq!(r.verdict, DensityVerdict::DenseAtResolution);
}

#[test]
fn log_box_interior_inclusion_holds_and_matches_grid_oracle() {
    let s = rows(&[[1.0, 1.0], [2.0, 1.0], [1.0, 2.0], [2.0, 2.0]]);
    let g = Generator::coordinatewise_log(2);
    let v = check_condition_ii(&g, &s, 1000, 1e-6 * s.diagonal(), 42).unwrap();
    assert!(v.holds());
    // oracle: log image hull is the box [0, ln 2]²; every interior grid point
    // of pitch 0.01 maps strictly inside it
    let l2 = 2f64.ln();
    for i in 1..100 {
        for j in 1..100 {
            let (x, y) = (1.0 + i as f64 * 0.01, 1.0 + j as f64 * 0.01);
            let (u, w) = (x.ln(), y.ln());
            assert!(u > 0.0 && u < l2 && w > 0.0 && w < l2);
        }
    }
}

#[test]
fn triangle_interior_inclusion_fails_with_valid_witness() {
    let s = rows(&[[1.0, 1.0], [2.0, 1.0], [1.5, 2.0]]);
    let v = check_condition_ii(&Generator::parabola_radial(), &s, 1000, 1e-6, 42).unwrap();
    let w = v.witness.unwrap();
    // oracle: image triangle (1,2),(2,5),(1.5,6.25); a violating p maps on or
    // below the lower edge y = 3x − 1 (or outside the others)
    let (x, y) = (w.image[0], w.image[1]);
    let below_lower = y <= 3.0 * x - 1.0 + 1e-6;
    assert!(below_lower, "{w:?}");
    // and the reference point (1.5, 1.01) is a violation too
    let (u, v) = (1.5, 1.5f64.powi(2) + 1.01f64.powi(2));
    assert!((v - 3.2701).abs() < 1e-12 && v < 3.0 * u - 1.0);
}

#[test]
fn square_to_ball_surrogate_fails_hull_inclusion_at_the_gap() {
    let mut pts = vec![];
    for i in 0..=40 {
        for j in 0..=40 {
            let (x, y) = (-1.0 + 0.05 * i as f64, -1.0 + 0.05 * j as f64);
            if (x - 1.0f64).hypot(y) > 0.05 + 1e-12 {
                pts.push(vec![x, y]);
            }
        }
    }
    let s = PointSet::from_rows(&pts).unwrap();
    let v = check_condition_iii(&Generator::square_to_ball(), &s, 500, 1e-9, 42).unwrap();
    let w = v.witness.unwrap();
    assert_eq!(w.point, vec![1.0, 0.0]);
    // oracle: the nearest image points sit at angle ±atan(0.1) on the unit
    // circle; their chord passes x = cos(atan 0.1)
    let chord = 0.1f64.atan().cos();
    assert!((w.margin - (1.0 - chord)).abs() < 1e-9);
}

#[test]
fn consistency_examples() {
    let p = |s: &PointSet, grid: f64| ConsistencyParams {
        iterations: 8,
        grid_resolution: grid,
        orbit: OrbitParams::with_delta(1e-3 * s.diagonal()),
        sample_count: 500,
        margin: 1e-6 * s.diagonal(),
        tolerance: 1e-9,
        seed: 42,
        noncompact_surrogate: false,
    };
    let tri = rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
    let r = consistency_report(&Generator::identity(2), &half(), &tri, &p(&tri, 0.02)).unwrap();
    assert!(r.consistency.consistent && r.density.is_dense() && r.interior_inclusion.holds() && r.hull_inclusion.holds());

    let bx = rows(&[[1.0, 1.0], [2.0, 1.0], [1.0, 2.0], [2.0, 2.0]]);
    let r = consistency_report(&Generator::coordinatewise_log(2), &half(), &bx, &p(&bx, 0.02)).unwrap();
    assert!(r.consistency.consistent && r.density.is_dense(), "{:?}", r.consistency);

    let t = rows(&[[1.0, 1.0], [2.0, 1.0], [1.5, 2.0]]);
    let r = consistency_report(&Generator::parabola_radial(), &half(), &t, &p(&t, 0.01)).unwrap();
    assert_eq!(r.density.verdict, DensityVerdict::NotDense);
    assert!(r.interior_inclusion.fails() && r.hull_inclusion.fails());
    assert!(!r.consistency.theorem_violation());
}

#[test]
fn contradictions_are_flagged() {
    let s = rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
    let g = Generator::identity(2);
    let holds = check_condition_iii(&g, &s, 10, 1e-9, 1).unwrap();
    let ii = check_condition_ii(&g, &s, 10, 1e-6, 1).unwrap();
    let c = assess_consistency(DensityVerdict::NotDense, &ii, &holds, false, false);
    assert!(c.theorem_violation());
    let c = assess_consistency(DensityVerdict::NotDense, &ii, &holds, false, true);
    assert!(!c.theorem_violation() && c.flags.contains(&Flag::NoncompactSurrogate));
    // the compactness-free direction is enforced even for surrogates
    let c = assess_consistency(DensityVerdict::DenseAtResolution, &ii, &holds, true, true);
    assert!(c.theorem_violation());
}

#[test]
fn verdicts_are_reproducible() {
    let s = rows(&[[1.0, 1.0], [2.0, 1.0], [1.5, 2.0]]);
    let g = Generator::parabola_radial();
    assert_eq!(check_condition_ii(&g, &s, 300, 1e-6, 7).unwrap(), check_condition_ii(&g, &s, 300, 1e-6, 7).unwrap());
    assert_eq!(check_condition_iii(&g, &s, 300, 1e-9, 7).unwrap(), check_condition_iii(&g, &s, 300, 1e-9, 7).unwrap());
    assert_eq!(lemma5_property(&g, &s, 50, 1e-6, 7).unwrap(), lemma5_property(&g, &s, 50, 1e-6, 7).unwrap());
}

#[test]
fn subset_cover_examples() {
    let cross = PointSet::from_rows(&[vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]]).unwrap();
    assert!(lemma5_property(&Generator::identity(2), &cross, 200, 1e-6, 3).unwrap().holds());
    let bx = rows(&[[1.0, 1.0], [2.0, 1.0], [1.0, 2.0], [2.0, 2.0]]);
    assert!(lemma5_property(&Generator::coordinatewise_log(2), &bx, 200, 1e-6, 3).unwrap().holds());
}
