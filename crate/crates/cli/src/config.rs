// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use aef::episim::{
    DiseaseModel, PandemicCriterion, PandemicRule, SimulationConfig, DEFAULT_MAX_DAYS, DEFAULT_RHO, DEFAULT_RUNS,
};
use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

/// Seed used when neither the flag nor the config file sets one.
pub const DEFAULT_RNG_SEED: u64 = 0;

/// The JSON configuration document. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub beta: Option<f64>,
    pub epsilon: Option<f64>,
    pub mu: Option<f64>,
    pub p_asym: Option<f64>,
    pub r_beta: Option<f64>,
    pub p_travel_sym: Option<f64>,
    pub rho: Option<f64>,
    pub threshold_per_100k: Option<f64>,
    pub criterion: Option<PandemicCriterion>,
    pub runs: Option<usize>,
    pub max_days: Option<u32>,
    pub rng_seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Disease and simulation overrides shared by the simulation commands.
#[derive(Args, Debug, Clone, Default)]
pub struct DiseaseFlags {
    /// Transmission rate per day.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Rate of leaving the latent class per day.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Recovery rate per day.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Probability that an infection is asymptomatic.
    #[arg(long)]
    pub p_asym: Option<f64>,
    /// Relative infectiousness of asymptomatic cases.
    #[arg(long)]
    pub r_beta: Option<f64>,
    /// Probability that a symptomatic case keeps travelling.
    #[arg(long)]
    pub p_travel_sym: Option<f64>,
    /// Share of seat capacity occupied by travellers.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Prevalence threshold per 100,000 inhabitants.
    #[arg(long)]
    pub threshold_per_100k: Option<f64>,
    /// Pandemic criterion, `regions:N` or `cities:N`.
    #[arg(long, value_parser = parse_criterion)]
    pub criterion: Option<PandemicCriterion>,
    /// Simulations per ensemble.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Simulation horizon in days.
    #[arg(long)]
    pub max_days: Option<u32>,
}

pub fn parse_criterion(s: &str) -> Result<PandemicCriterion, String> {
    let (kind, count) = s.split_once(':').ok_or_else(|| format!("expected `regions:N` or `cities:N`, got {s:?}"))?;
    let n: usize = count.trim().parse().map_err(|_| format!("invalid count {count:?}"))?;
    match kind.trim() {
        "regions" => Ok(PandemicCriterion::Regions(n)),
        "cities" => Ok(PandemicCriterion::Cities(n)),
        other => Err(format!("unknown criterion {other:?}, expected `regions` or `cities`")),
    }
}

/// Fully resolved settings, serialised in the same shape as [`FileConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Effective {
    pub beta: f64,
    pub epsilon: f64,
    pub mu: f64,
    pub p_asym: f64,
    pub r_beta: f64,
    pub p_travel_sym: f64,
    pub rho: f64,
    pub threshold_per_100k: f64,
    pub criterion: PandemicCriterion,
    pub runs: usize,
    pub max_days: u32,
    pub rng_seed: u64,
}

impl Effective {
    /// Layer `file` and then `flags` over `base`.
    pub fn resolve(base: DiseaseModel, file: &FileConfig, flags: &DiseaseFlags, rng_seed: Option<u64>) -> Result<Self> {
        let pick = |flag: Option<f64>, file: Option<f64>, default: f64| flag.or(file).unwrap_or(default);
        let rule = PandemicRule::default();
        let e = Effective {
            beta: pick(flags.beta, file.beta, base.beta),
            epsilon: pick(flags.epsilon, file.epsilon, base.epsilon),
            mu: pick(flags.mu, file.mu, base.mu),
            p_asym: pick(flags.p_asym, file.p_asym, base.p_asym),
            r_beta: pick(flags.r_beta, file.r_beta, base.r_beta),
            p_travel_sym: pick(flags.p_travel_sym, file.p_travel_sym, base.p_travel_sym),
            rho: pick(flags.rho, file.rho, DEFAULT_RHO),
            threshold_per_100k: pick(flags.threshold_per_100k, file.threshold_per_100k, rule.threshold_per_100k),
            criterion: flags.criterion.or(file.criterion).unwrap_or(rule.criterion),
            runs: flags.runs.or(file.runs).unwrap_or(DEFAULT_RUNS),
            max_days: flags.max_days.or(file.max_days).unwrap_or(DEFAULT_MAX_DAYS),
            rng_seed: resolve_seed(file, rng_seed),
        };
        e.disease().validate()?;
        if e.runs == 0 {
            bail!("runs must be at least 1");
        }
        if e.max_days == 0 {
            bail!("max_days must be at least 1");
        }
        if !(e.threshold_per_100k > 0.0 && e.threshold_per_100k.is_finite()) {
            bail!("threshold_per_100k must be positive, got {}", e.threshold_per_100k);
        }
        Ok(e)
    }

    pub fn disease(&self) -> DiseaseModel {
        DiseaseModel {
            beta: self.beta,
            epsilon: self.epsilon,
            mu: self.mu,
            p_asym: self.p_asym,
            r_beta: self.r_beta,
            p_travel_sym: self.p_travel_sym,
        }
    }

    pub fn simulation(&self) -> SimulationConfig {
        SimulationConfig {
            max_days: self.max_days,
            rule: PandemicRule { threshold_per_100k: self.threshold_per_100k, criterion: self.criterion },
            ..SimulationConfig::default()
        }
    }
}

/// Flag, then config file, then [`DEFAULT_RNG_SEED`].
pub fn resolve_seed(file: &FileConfig, flag: Option<u64>) -> u64 {
    flag.or(file.rng_seed).unwrap_or(DEFAULT_RNG_SEED)
}

/// `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let num = |p: &str| p.trim().parse::<f64>().with_context(|| format!("invalid number {p:?} in {s:?}"));
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step.is_nan() || step <= 0.0 || stop < start {
            bail!("range {s:?} needs start <= stop and a positive step");
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| round9(start + i as f64 * step)).collect());
    }
    s.split(',')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("invalid number {p:?} in {s:?}")))
        .collect()
}

/// Percentages as fractions: `first..last` (inclusive, step 1) or a list.
pub fn parse_percentages(s: &str) -> Result<Vec<f64>> {
    let percents: Vec<f64> = if let Some((a, b)) = s.split_once("..") {
        let first: u32 = a.trim().parse().with_context(|| format!("invalid percentage {a:?}"))?;
        let last: u32 = b.trim().parse().with_context(|| format!("invalid percentage {b:?}"))?;
        if last < first {
            bail!("empty percentage range {s:?}");
        }
        (first..=last).map(f64::from).collect()
    } else {
        parse_grid(s)?
    };
    Ok(percents.into_iter().map(|p| round9(p / 100.0)).collect())
}

fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beats_defaults() {
        let file = FileConfig { beta: Some(0.6), runs: Some(7), rng_seed: Some(9), ..Default::default() };
        let flags = DiseaseFlags { beta: Some(0.7), ..Default::default() };
        let e = Effective::resolve(DiseaseModel::full(0.8), &file, &flags, None).unwrap();
        assert_eq!((e.beta, e.runs, e.rng_seed, e.p_asym), (0.7, 7, 9, 0.33));
        let e = Effective::resolve(DiseaseModel::full(0.8), &file, &flags, Some(3)).unwrap();
        assert_eq!(e.rng_seed, 3);
    }

    #[test]
    fn config_document_round_trips() {
        let e = Effective::resolve(DiseaseModel::simple_seir(0.45), &FileConfig::default(), &DiseaseFlags::default(), None)
            .unwrap();
        let back: FileConfig = serde_json::from_value(serde_json::to_value(e).unwrap()).unwrap();
        assert_eq!(back.criterion, Some(PandemicCriterion::Regions(3)));
        assert_eq!(back.beta, Some(0.45));
        assert!(serde_json::from_str::<FileConfig>(r#"{"betta": 1}"#).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.40:0.50:0.01").unwrap().len(), 11);
        assert_eq!(parse_grid("0.40:0.50:0.01").unwrap()[10], 0.5);
        assert_eq!(parse_grid("1.0:3.0:0.1").unwrap().len(), 21);
        assert_eq!(parse_grid("0.4, 0.45").unwrap(), vec![0.4, 0.45]);
        assert!(parse_grid("1:0:1").is_err());
        assert_eq!(parse_percentages("1..15").unwrap().len(), 15);
        assert_eq!(parse_percentages("1..15").unwrap()[14], 0.15);
        assert_eq!(parse_percentages("5,10").unwrap(), vec![0.05, 0.1]);
        assert_eq!(parse_criterion("cities:100"), Ok(PandemicCriterion::Cities(100)));
        assert!(parse_criterion("towns:3").is_err());
    }
}
