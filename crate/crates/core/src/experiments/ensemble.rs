use serde::Serialize;

use super::{map_trials, trial_seed, Execution};
use crate::analysis::{
    average_sigma_across_trials, default_tau_grid, excess_kurtosis, fit_power_law, mean, returns,
    sigma_table, std_dev, HurstFit, PriceSeries, SigmaTable,
};
use crate::config::GameConfig;
use crate::engine::run;
use crate::error::Result;

/// One game of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub seed: u64,
    pub series: PriceSeries,
    pub sigma: SigmaTable,
}

impl Trial {
    /// Power-law fit of this trial alone, if it has enough usable points.
    pub fn fit(&self) -> Option<HurstFit> {
        fit_power_law(&self.sigma).ok()
    }

    pub fn excess_kurtosis(&self, horizon: usize) -> Option<f64> {
        returns(&self.series, horizon)
            .ok()
            .and_then(|r| excess_kurtosis(&r).ok())
    }
}

/// Trials plus the fit of their averaged `sigma(tau)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub config: GameConfig,
    pub trials: Vec<Trial>,
    pub averaged: SigmaTable,
    pub fit: HurstFit,
}

/// Summary statistics across trials of one scalar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spread {
    pub mean: f64,
    pub standard_error: f64,
    pub count: usize,
}

impl Spread {
    fn of(values: &[f64]) -> Spread {
        let n = values.len();
        let se = if n > 1 {
            std_dev(values) * (n as f64 / (n as f64 - 1.0)).sqrt() / (n as f64).sqrt()
        } else {
            f64::NAN
        };
        Spread {
            mean: mean(values),
            standard_error: se,
            count: n,
        }
    }
}

impl EnsembleResult {
    pub fn seeds(&self) -> Vec<u64> {
        self.trials.iter().map(|t| t.seed).collect()
    }

    /// Per-trial Hurst exponents (trials without a usable fit are skipped).
    pub fn trial_hursts(&self) -> Vec<f64> {
        self.trials
            .iter()
            .filter_map(|t| t.fit())
            .map(|f| f.hurst)
            .collect()
    }

    /// Mean and standard error of the per-trial Hurst exponents.
    pub fn hurst_spread(&self) -> Spread {
        Spread::of(&self.trial_hursts())
    }

    /// Mean and standard error of the per-trial excess kurtosis of returns.
    pub fn kurtosis_spread(&self, horizon: usize) -> Spread {
        let k: Vec<f64> = self
            .trials
            .iter()
            .filter_map(|t| t.excess_kurtosis(horizon))
            .collect();
        Spread::of(&k)
    }

    /// Mean over trials of `max_t |p(t) - level|`.
    pub fn mean_max_deviation(&self, level: f64) -> f64 {
        let d: Vec<f64> = self
            .trials
            .iter()
            .map(|t| t.series.max_abs_deviation_from(level))
            .collect();
        mean(&d)
    }

    /// Non-overlapping returns of every trial, concatenated in trial order.
    pub fn pooled_returns(&self, horizon: usize) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        for t in &self.trials {
            out.extend(returns(&t.series, horizon)?);
        }
        Ok(out)
    }
}

/// Runs `n_trials` games of `config` with seeds `master_seed + i`, averages
/// their `sigma(tau)` on the default grid and fits the scaling exponent.
pub fn run_ensemble(
    config: &GameConfig,
    n_trials: usize,
    master_seed: u64,
    execution: Execution,
) -> Result<EnsembleResult> {
    config.validate()?;
    let grid = default_tau_grid(config.horizon + 1);
    let trials = map_trials(n_trials, execution, |i| -> Result<Trial> {
        let seed = trial_seed(master_seed, i);
        let sim = run(&config.clone().with_seed(seed))?;
        let series = sim.price_series();
        let sigma = sigma_table(&series, &grid)?;
        Ok(Trial {
            seed,
            series,
            sigma,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let tables: Vec<SigmaTable> = trials.iter().map(|t| t.sigma.clone()).collect();
    let averaged = average_sigma_across_trials(&tables)?;
    let fit = fit_power_law(&averaged)?;
    Ok(EnsembleResult {
        config: config.clone(),
        trials,
        averaged,
        fit,
    })
}
