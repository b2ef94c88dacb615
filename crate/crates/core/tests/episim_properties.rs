// SPDX-License-Identifier: Apache-2.0

//! Simulator invariants and oracles for the ensemble and Reed-Frost layers.

mod common;

use std::collections::HashMap;

use aef::episim::{
    build_world, reed_frost_fixed_point, reed_frost_simulate, run_ensemble, simulate, DiseaseModel, RegionTable,
    SimulationConfig, World, DEFAULT_MAJOR_THRESHOLD,
};
use aef::rng::stream;
use aef::stats::{sample_std, spearman};
use aef::synthetic::{scaled_populations, synthetic_network, SyntheticParams, DESK_PEOPLE_PER_SEAT};
use common::{connected_graph, graph};
use proptest::prelude::*;

fn small_world(n: usize, edges: &[(usize, usize, f64)], scale: f64, pops: &[u64], rho: f64) -> World {
    let scaled: Vec<_> = edges.iter().map(|&(a, b, w)| (a, b, w * scale)).collect();
    let g = graph(n, &scaled);
    let p: HashMap<String, u64> = (0..n).map(|i| (g.iata(i).to_string(), pops[i])).collect();
    build_world(&g, &p, &RegionTable::bundled(), rho).unwrap()
}

fn desk_world(nodes: usize) -> World {
    let g = synthetic_network(&SyntheticParams { nodes, ..SyntheticParams::desk() }, &mut stream(1, "graph", &[])).unwrap();
    build_world(&g, &scaled_populations(&g, DESK_PEOPLE_PER_SEAT), &RegionTable::bundled(), 0.7).unwrap()
}

fn disease() -> impl Strategy<Value = DiseaseModel> {
    (0.0..3.0f64, 0.1..2.0f64, 0.1..2.0f64, 0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64, any::<bool>()).prop_map(
        |(beta, epsilon, mu, p_asym, r_beta, p_travel_sym, simple)| {
            if simple {
                DiseaseModel { beta, epsilon, mu, ..DiseaseModel::simple_seir(beta) }
            } else {
                DiseaseModel { beta, epsilon, mu, p_asym, r_beta, p_travel_sym }
            }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn population_is_conserved(
        (n, edges) in connected_graph(6),
        scale in prop_oneof![Just(1.0), Just(100.0), Just(10_000.0)],
        pops in proptest::collection::vec(10u64..20_000, 6),
        rho in 0.0..=1.0f64,
        d in disease(),
        seed in any::<u64>(),
    ) {
        let world = small_world(n, &edges, scale, &pops, rho).seed_outbreak(0, &d).unwrap();
        let total = world.total_population();
        let mut w = world.clone();
        let mut rng = stream(seed, "conservation", &[]);
        for _ in 0..60 {
            w.step_day(&d, &mut rng);
            prop_assert_eq!(w.total_population(), total);
            let sum: u64 = (0..n).map(|k| w.compartments(k).total()).sum();
            prop_assert_eq!(sum, total);
            if d.is_simple_seir() {
                for k in 0..n {
                    let c = w.compartments(k);
                    prop_assert_eq!((c.i_asym, c.i_sym_nt), (0, 0));
                }
            }
        }
    }
}

#[test]
fn grounded_world_keeps_infection_at_the_seed() {
    let (n, edges) = (4, vec![(0, 1, 300.0), (1, 2, 300.0), (2, 3, 300.0), (0, 3, 300.0)]);
    let d = DiseaseModel::full(1.5);
    let world = small_world(n, &edges, 1.0, &[50_000; 4], 0.0).seed_outbreak(2, &d).unwrap();
    let mut w = world.clone();
    let mut rng = stream(3, "grounded", &[]);
    for _ in 0..120 {
        w.step_day(&d, &mut rng);
        for k in [0, 1, 3] {
            assert_eq!(w.compartments(k), world.compartments(k));
        }
    }
    assert!(w.compartments(2).r > 0);
}

#[test]
fn subcritical_outbreaks_die_out() {
    let d = DiseaseModel::simple_seir(0.5 * DiseaseModel::RECOVERY_RATE);
    assert!((d.r0() - 0.5).abs() < 1e-12);
    let world = small_world(2, &[(0, 1, 1.0)], 1.0, &[100_000, 100_000], 0.0).seed_outbreak(0, &d).unwrap();
    let config = SimulationConfig { record_series: false, ..Default::default() };
    let runs = 1000;
    let extinct = (0..runs)
        .filter(|&r| {
            let mut w = world.clone();
            let mut rng = stream(4, "subcritical", &[r]);
            (0..365).any(|_| {
                w.step_day(&d, &mut rng);
                (0..w.airport_count()).all(|k| w.compartments(k).infectious() == 0)
            })
        })
        .count();
    assert!(extinct as f64 >= 0.99 * runs as f64, "{extinct} of {runs} died out");
    let o = simulate(&world, &d, &config, &mut stream(4, "subcritical", &[0]));
    assert!(o.days < 365 && o.pandemic_day.is_none());
}

#[test]
fn pandemic_day_ordering_is_threshold_insensitive() {
    let world = desk_world(200);
    let d = DiseaseModel::full(DiseaseModel::PANDEMIC_BETA);
    let config = SimulationConfig::default();
    let seeds = [0usize, 5, 17, 40, 77, 110, 150, 199];
    let mut low = Vec::new();
    let mut high = Vec::new();
    for &s in &seeds {
        let seeded = world.seed_outbreak(s, &d).unwrap();
        let (mut l, mut h) = (Vec::new(), Vec::new());
        for run in 0..20 {
            let o = simulate(&seeded, &d, &config, &mut stream(8, "threshold", &[s as u64, run]));
            l.push(o.pandemic_day_at(0.1, 3).unwrap_or(u32::MAX));
            h.push(o.pandemic_day_at(100.0, 3).unwrap_or(u32::MAX));
        }
        low.push(lower_median_by_count(&l));
        high.push(lower_median_by_count(&h));
    }
    let to_f = |v: &[u32]| v.iter().map(|&d| f64::from(d)).collect::<Vec<_>>();
    let rho = spearman(&to_f(&low), &to_f(&high)).unwrap();
    assert!(rho >= 0.6, "rank agreement {rho}: {low:?} vs {high:?}");
    assert!(low.iter().zip(&high).all(|(l, h)| l <= h));
}

/// The lower median by counting: the smallest value with at least half of
/// the sample at or below it.
fn lower_median_by_count(x: &[u32]) -> u32 {
    let need = x.len().div_ceil(2);
    *x.iter().filter(|&&m| x.iter().filter(|&&v| v <= m).count() >= need).min().unwrap()
}

#[test]
fn ensemble_medians_and_determinism() {
    let world = desk_world(120);
    let d = DiseaseModel::full(DiseaseModel::PANDEMIC_BETA);
    let config = SimulationConfig::default();
    let e = run_ensemble(&world, &d, 7, 20, &config, 99).unwrap();
    assert_eq!(e.runs.len(), 20);
    assert!(e.runs.iter().enumerate().all(|(i, r)| r.run == i));
    let days: Vec<u32> = e.runs.iter().map(|r| r.pandemic_day.unwrap_or(u32::MAX)).collect();
    let want = lower_median_by_count(&days);
    assert_eq!(e.median_pandemic_day, (want != u32::MAX).then_some(want));
    let peaks: Vec<u32> = e.runs.iter().map(|r| r.peak_day).collect();
    assert_eq!(e.median_peak_day, lower_median_by_count(&peaks));
    assert_eq!(run_ensemble(&world, &d, 7, 20, &config, 99).unwrap(), e);
    assert_ne!(run_ensemble(&world, &d, 7, 20, &config, 100).unwrap().runs, e.runs);
    for r in &e.runs {
        assert!(r.pandemic_day.is_none_or(|p| p <= 365) && r.peak_day <= 365);
    }
}

#[test]
fn negligible_transmission_never_becomes_pandemic() {
    let world = desk_world(60);
    let d = DiseaseModel::simple_seir(1e-6);
    let e = run_ensemble(&world, &d, 3, 1, &SimulationConfig::default(), 1).unwrap();
    assert_eq!(e.median_pandemic_day, None);
}

#[test]
fn reed_frost_dots_scatter_binomially() {
    let r0 = 2.0;
    // Independent bisection on the same equation.
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid - (-r0 * (1.0 - mid)).exp() < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((reed_frost_fixed_point(r0) - lo).abs() < 1e-10);
    let p = 1.0 - lo;
    let dots: Vec<f64> = (0..100)
        .map(|i| reed_frost_simulate(r0, 1000, 100, DEFAULT_MAJOR_THRESHOLD, &mut stream(12, "dots", &[i])))
        .collect();
    let expected = (p * (1.0 - p) / 100.0).sqrt();
    let sd = sample_std(&dots);
    assert!((sd / expected - 1.0).abs() < 0.25, "dot sd {sd} vs {expected}");
    assert_eq!(reed_frost_simulate(0.0, 1000, 50, DEFAULT_MAJOR_THRESHOLD, &mut stream(1, "zero", &[])), 0.0);
}
