// SPDX-License-Identifier: Apache-2.0

//! Statistics against reference values from an independent implementation,
//! plus distribution-free properties.

use aef::rng::stream;
use aef::stats::{
    changed_beyond, fisher_interval, lower_median, median, pearson, pearson_ci, relative_change, shapiro_wilk,
};
use proptest::prelude::*;
use rand_distr::{Distribution, StandardNormal};

const SW_CASES: &[(&[f64], f64, f64)] = &[
    (&[148.0, 154.0, 158.0, 160.0, 161.0, 162.0, 166.0, 170.0, 182.0, 195.0, 236.0], 0.788814694863, 0.006703814062),
    (&[2.1, 3.4, 1.9, 5.6, 4.4], 0.932084939195, 0.610655902260),
    (&[1.0, 2.0, 4.0, 8.0], 0.920202678881, 0.538083777776),
    (&[0.1, -0.4, 1.2, 0.8, -1.5, 0.3, 2.2], 0.995042941767, 0.999076542750),
    (&[6.2, 5.1, 7.8, 4.4, 6.9, 5.5, 6.0, 8.8, 5.9, 6.4, 7.1, 3.9], 0.988535849357, 0.999359217292),
    (
        &[
            -1.4238, 1.2637, -0.8707, -0.2592, -0.0753, -0.7409, -1.3678, 0.6489, 0.3611, -1.9529, 2.3474, 0.9685,
            -0.7594, 0.9022, -0.467, -0.0607, 0.7888, -1.2567, 0.5759, 1.399, 1.3223, -0.2997, 0.9029, -1.6216,
            -0.1582, 0.4495, -1.3436, -0.0817, 1.7247, 2.6182, 0.7774, 0.8286, -0.959, -1.2094, -1.4123, 0.5415,
            0.7519, -0.6588, -1.2287, 0.2576,
        ],
        0.969542191329,
        0.348060439335,
    ),
    (
        &[
            0.434, 2.3997, 1.0875, 3.26, 0.5799, 0.502, 0.5083, 0.4023, 0.0094, 0.7866, 0.1173, 0.0654, 1.0381, 0.0543,
            0.9124, 1.0399, 0.4583, 1.1949, 4.1253, 2.1342, 0.386, 0.0865, 1.3487, 0.7546, 1.2005, 0.1506, 1.3544,
            0.5555, 0.1593, 0.1692,
        ],
        0.791314259513,
        0.000045720332,
    ),
];

#[test]
fn shapiro_wilk_reference_values() {
    for (i, &(x, w, p)) in SW_CASES.iter().enumerate() {
        let got = shapiro_wilk(x).unwrap();
        assert!((got.w - w).abs() < 1e-3, "case {i}: W {} vs {w}", got.w);
        assert!((got.p_value - p).abs() < 1e-3, "case {i}: p {} vs {p}", got.p_value);
    }
}

#[test]
fn pearson_reference_values() {
    let x = [1.2, 2.3, 2.9, 4.1, 5.0, 6.2, 7.1, 7.9, 9.3, 10.0];
    let y = [2.0, 1.1, 3.5, 3.9, 6.1, 5.2, 8.8, 7.7, 9.9, 9.1];
    let c = pearson_ci(&x, &y, 0.95).unwrap();
    assert!((c.r - 0.948882786402).abs() < 1e-10);
    assert!((c.ci_low - 0.793068665182).abs() < 1e-9);
    assert!((c.ci_high - 0.988148254053).abs() < 1e-9);
    let rev: Vec<f64> = y.iter().rev().copied().collect();
    let c = pearson_ci(&x, &rev, 0.90).unwrap();
    assert!((c.r + 0.949839924504).abs() < 1e-10);
    assert!((c.ci_low + 0.985270755208).abs() < 1e-9);
    assert!((c.ci_high + 0.836212535924).abs() < 1e-9);
}

#[test]
fn shapiro_wilk_is_calibrated_under_normality() {
    let mut rng = stream(5, "sw-calibration", &[]);
    let trials = 2000;
    let rejected = (0..trials)
        .filter(|_| {
            let x: Vec<f64> = (0..30).map(|_| StandardNormal.sample(&mut rng)).collect();
            shapiro_wilk(&x).unwrap().p_value < 0.05
        })
        .count();
    let rate = rejected as f64 / trials as f64;
    assert!((0.03..=0.07).contains(&rate), "rejection rate {rate}");
}

#[test]
fn fisher_interval_covers_true_correlation() {
    let rho: f64 = 0.6;
    let mut rng = stream(6, "fisher-coverage", &[]);
    let trials = 2000;
    let covered = (0..trials)
        .filter(|_| {
            let (x, y): (Vec<f64>, Vec<f64>) = (0..25)
                .map(|_| {
                    let a: f64 = StandardNormal.sample(&mut rng);
                    let b: f64 = StandardNormal.sample(&mut rng);
                    (a, rho * a + (1.0 - rho * rho).sqrt() * b)
                })
                .unzip();
            let c = pearson_ci(&x, &y, 0.95).unwrap();
            c.ci_low <= rho && rho <= c.ci_high
        })
        .count();
    let rate = covered as f64 / trials as f64;
    assert!((0.93..=0.97).contains(&rate), "coverage {rate}");
}

#[test]
fn relative_change_falls_back_to_absolute() {
    assert_eq!(relative_change(0.0, 0.3), 0.3);
    assert!((relative_change(2.0, 2.1) - 0.05).abs() < 1e-12);
    assert!(changed_beyond(2.0, 2.03, 0.01));
    assert!(!changed_beyond(2.0, 2.01, 0.01));
    assert!(!changed_beyond(0.0, 0.0, 0.01));
}

fn sample(min: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (min..40usize).prop_flat_map(|n| {
        (proptest::collection::vec(-100.0..100.0f64, n), proptest::collection::vec(-100.0..100.0f64, n))
    })
}

proptest! {
    #[test]
    fn pearson_ci_is_affine_invariant((x, y) in sample(4), a in 0.1..10.0f64, b in -50.0..50.0f64) {
        let Ok(c) = pearson_ci(&x, &y, 0.95) else { return Ok(()) };
        let x2: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let y2: Vec<f64> = y.iter().map(|v| a * v - b).collect();
        for c2 in [pearson_ci(&x2, &y, 0.95).unwrap(), pearson_ci(&x, &y2, 0.95).unwrap()] {
            prop_assert!((c2.r - c.r).abs() < 1e-12);
            prop_assert!((c2.ci_low - c.ci_low).abs() < 1e-12);
            prop_assert!((c2.ci_high - c.ci_high).abs() < 1e-12);
        }
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        prop_assert!((pearson(&neg, &y).unwrap() + c.r).abs() < 1e-12);
        prop_assert!((pearson(&y, &x).unwrap() - c.r).abs() < 1e-12);
        prop_assert!((-1.0..=1.0).contains(&c.r));
    }

    #[test]
    fn fisher_interval_is_symmetric_in_z(r in -0.999..0.999f64, n in 4usize..500, level in 0.5..0.999f64) {
        let c = fisher_interval(r, n, level).unwrap();
        let z = r.atanh();
        prop_assert!(((c.ci_high.atanh() - z) - (z - c.ci_low.atanh())).abs() < 1e-9);
        prop_assert!(c.ci_low <= r && r <= c.ci_high);
        let wider = fisher_interval(r, n, (level + 1.0) / 2.0).unwrap();
        prop_assert!(wider.half_width() >= c.half_width());
    }

    #[test]
    fn median_is_permutation_invariant(mut x in proptest::collection::vec(-1e6..1e6f64, 1..60), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let m = median(&x).unwrap();
        x.shuffle(&mut stream(seed, "shuffle", &[]));
        prop_assert_eq!(median(&x).unwrap(), m);
        let below = x.iter().filter(|&&v| v < m).count();
        let above = x.iter().filter(|&&v| v > m).count();
        prop_assert!(below <= x.len() / 2 && above <= x.len() / 2);
    }

    #[test]
    fn lower_median_is_an_element(x in proptest::collection::vec(0u32..1000, 1..60)) {
        let m = lower_median(&x).unwrap();
        prop_assert!(x.contains(&m));
        let not_above = x.iter().filter(|&&v| v <= m).count();
        prop_assert!(not_above >= x.len().div_ceil(2));
        let below = x.iter().filter(|&&v| v < m).count();
        prop_assert!(below < x.len().div_ceil(2));
    }
}
