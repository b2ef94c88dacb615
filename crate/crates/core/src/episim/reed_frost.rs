// SPDX-License-Identifier: Apache-2.0

//! Reed-Frost chain binomial and its branching-process approximation.

use rand::Rng;

use super::binomial;

/// Attack fraction at or above which an outbreak counts as major.
pub const DEFAULT_MAJOR_THRESHOLD: f64 = 0.10;

/// Smallest root of `x = exp(-r0 (1 - x))` in `[0, 1]`: the probability
/// that a single introduction dies out. Equals 1 when `r0 <= 1`.
pub fn reed_frost_fixed_point(r0: f64) -> f64 {
    assert!(r0 > 0.0, "r0 must be positive");
    if r0 <= 1.0 {
        return 1.0;
    }
    // f(x) = x - exp(-r0 (1 - x)) is concave with f(0) < 0 and f(1) = 0; it
    // peaks at 1 - ln(r0) / r0 where it is positive, so the lower root lies
    // below the peak.
    let f = |x: f64| x - (-r0 * (1.0 - x)).exp();
    let (mut lo, mut hi) = (0.0f64, 1.0 - r0.ln() / r0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Final number ever infected in one Reed-Frost epidemic started by a
/// single infective in a population of `population`.
pub fn reed_frost_final_size<R: Rng + ?Sized>(r0: f64, population: u64, rng: &mut R) -> u64 {
    assert!(population >= 1, "population must be positive");
    let p = r0 / population as f64;
    // ln(1 - p), or -inf when every contact infects.
    let log_escape = if p >= 1.0 { f64::NEG_INFINITY } else { (-p).ln_1p() };
    let (mut susceptible, mut infective, mut total) = (population - 1, 1u64, 1u64);
    while infective > 0 && susceptible > 0 {
        let q = -(infective as f64 * log_escape).exp_m1();
        infective = binomial(rng, susceptible, q);
        susceptible -= infective;
        total += infective;
    }
    total
}

/// Fraction of `trials` independent outbreaks whose attack fraction reaches
/// `major_threshold`.
pub fn reed_frost_simulate<R: Rng + ?Sized>(
    r0: f64,
    population: u64,
    trials: usize,
    major_threshold: f64,
    rng: &mut R,
) -> f64 {
    assert!(trials >= 1, "at least one trial");
    let major = (0..trials)
        .filter(|_| reed_frost_final_size(r0, population, rng) as f64 >= major_threshold * population as f64)
        .count();
    major as f64 / trials as f64
}
