#![allow(dead_code)]

use proptest::prelude::*;
use qamlab_core::generators::Generator;

pub fn builtins(k: usize) -> Vec<Generator> {
    let mut out = vec![
        Generator::identity(k),
        Generator::coordinatewise_power(2.0, k).unwrap(),
        Generator::coordinatewise_power(-0.5, k).unwrap(),
        Generator::coordinatewise_log(k),
        Generator::coordinatewise_exp(k),
    ];
    if k == 2 {
        out.extend([Generator::parabola_shear(), Generator::parabola_radial(), Generator::square_to_ball()]);
    }
    out
}

/// (generator, point in its sampling core)
pub fn generator_and_point() -> impl Strategy<Value = (Generator, Vec<f64>)> {
    (1usize..=3)
        .prop_flat_map(|k| (0..builtins(k).len(), prop::collection::vec(0.0..1.0f64, k), Just(k)))
        .prop_map(|(i, t, k)| {
            let g = builtins(k).swap_remove(i);
            let (lo, hi) = g.domain.sampling_core();
            // stay strictly inside open domains
            let p = t.iter().zip(lo.iter().zip(&hi)).map(|(t, (a, b))| a + (b - a) * (0.001 + 0.998 * t)).collect();
            (g, p)
        })
}
