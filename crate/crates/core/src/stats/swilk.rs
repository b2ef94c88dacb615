// SPDX-License-Identifier: Apache-2.0

//! Shapiro-Wilk W test using Royston's approximation (algorithm AS R94) for
//! the coefficients and the p-value.

use serde::{Deserialize, Serialize};
use statrs::distribution::ContinuousCDF;

use super::{standard_normal, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapiroWilk {
    pub w: f64,
    pub p_value: f64,
}

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// Half-sample of Royston's coefficients, `a[0]` pairs the extremes.
fn coefficients(n: usize) -> Vec<f64> {
    let half = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let normal = standard_normal();
    let an25 = n as f64 + 0.25;
    let m: Vec<f64> = (1..=half).map(|i| normal.inverse_cdf((i as f64 - 0.375) / an25)).collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / (n as f64).sqrt();
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;

    let mut a = vec![0.0; half];
    a[0] = a1;
    let (first_free, fac) = if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        a[1] = a2;
        let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2)).sqrt();
        (2, fac)
    } else {
        let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (1, fac)
    };
    for i in first_free..half {
        a[i] = -m[i] / fac;
    }
    a
}

/// Shapiro-Wilk W and its p-value for `3 <= n <= 5000` observations.
pub fn shapiro_wilk(x: &[f64]) -> Result<ShapiroWilk, StatsError> {
    let n = x.len();
    if n < 3 {
        return Err(StatsError::TooFewSamples { n, min: 3 });
    }
    if n > 5000 {
        return Err(StatsError::TooManySamples { n, max: 5000 });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let range = sorted[n - 1] - sorted[0];
    if range <= 1e-19 * sorted[n - 1].abs().max(1.0) {
        return Err(StatsError::ZeroVariance);
    }

    let a = coefficients(n);
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let ss: f64 = sorted.iter().map(|v| ((v - mean) / range).powi(2)).sum();
    let num: f64 = a.iter().enumerate().map(|(i, ai)| ai * (sorted[n - 1 - i] - sorted[i]) / range).sum();
    let w = (num * num / ss).min(1.0);

    let p_value = if n == 3 {
        // Exact distribution for three observations.
        let pi6 = 6.0 / std::f64::consts::PI;
        let stqr = std::f64::consts::FRAC_PI_3;
        (pi6 * (w.sqrt().asin() - stqr)).max(0.0)
    } else {
        let an = n as f64;
        let mut w1 = (1.0 - w).ln();
        let (m, s) = if n <= 11 {
            let gamma = poly(&G, an);
            if w1 >= gamma {
                return Ok(ShapiroWilk { w, p_value: 1e-99 });
            }
            w1 = -(gamma - w1).ln();
            (poly(&C3, an), poly(&C4, an).exp())
        } else {
            let xx = an.ln();
            (poly(&C5, xx), poly(&C6, xx).exp())
        };
        1.0 - standard_normal().cdf((w1 - m) / s)
    };
    Ok(ShapiroWilk { w, p_value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(shapiro_wilk(&[1.0, 2.0]), Err(StatsError::TooFewSamples { n: 2, min: 3 }));
        assert_eq!(shapiro_wilk(&vec![0.0; 5001]), Err(StatsError::TooManySamples { n: 5001, max: 5000 }));
        assert_eq!(shapiro_wilk(&[2.0; 10]), Err(StatsError::ZeroVariance));
    }

    #[test]
    fn three_points_exact() {
        // Equally spaced triple attains W = 1.
        let r = shapiro_wilk(&[1.0, 2.0, 3.0]).unwrap();
        assert!((r.w - 1.0).abs() < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coefficients_are_unit_norm() {
        for n in [4usize, 5, 6, 11, 12, 20, 50, 100, 1000] {
            let a = coefficients(n);
            let norm: f64 = 2.0 * a.iter().map(|v| v * v).sum::<f64>();
            assert!((norm - 1.0).abs() < 1e-9, "n={n}: {norm}");
        }
    }
}
