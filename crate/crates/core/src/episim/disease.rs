// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::SimError;

/// Rates (per day) and class probabilities of the SEIR model.
///
/// Infections leave the latent class into one of three infectious classes:
/// asymptomatic, symptomatic and still travelling, or symptomatic and
/// grounded. With `p_asym = 0` and `p_travel_sym = 1` only the travelling
/// symptomatic class is ever populated, which is plain SEIR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiseaseModel {
    pub beta: f64,
    pub epsilon: f64,
    pub mu: f64,
    pub p_asym: f64,
    pub r_beta: f64,
    pub p_travel_sym: f64,
}

impl DiseaseModel {
    pub const LATENCY_RATE: f64 = 1.0 / 1.1;
    pub const RECOVERY_RATE: f64 = 1.0 / 2.5;
    /// Transmission rate of the full-model time-to-pandemic study.
    pub const PANDEMIC_BETA: f64 = 0.8383;

    /// Plain SEIR with the standard latency and recovery rates.
    pub fn simple_seir(beta: f64) -> Self {
        DiseaseModel {
            beta,
            epsilon: Self::LATENCY_RATE,
            mu: Self::RECOVERY_RATE,
            p_asym: 0.0,
            r_beta: 0.5,
            p_travel_sym: 1.0,
        }
    }

    /// Three infectious classes with influenza-like defaults.
    pub fn full(beta: f64) -> Self {
        DiseaseModel { p_asym: 0.33, r_beta: 0.5, p_travel_sym: 0.5, ..Self::simple_seir(beta) }
    }

    pub fn r0(&self) -> f64 {
        self.beta / self.mu
    }

    pub fn is_simple_seir(&self) -> bool {
        self.p_asym == 0.0 && self.p_travel_sym == 1.0
    }

    /// Probabilities of entering (asymptomatic, symptomatic travelling,
    /// symptomatic grounded).
    pub fn class_split(&self) -> [f64; 3] {
        let sym = 1.0 - self.p_asym;
        [self.p_asym, sym * self.p_travel_sym, sym * (1.0 - self.p_travel_sym)]
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for (name, value) in [("beta", self.beta), ("epsilon", self.epsilon), ("mu", self.mu)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(SimError::BadParameter { name, value });
            }
        }
        for (name, value) in [("p_asym", self.p_asym), ("r_beta", self.r_beta), ("p_travel_sym", self.p_travel_sym)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SimError::BadParameter { name, value });
            }
        }
        Ok(())
    }
}
