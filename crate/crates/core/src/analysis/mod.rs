//! Scaling and stylized-fact statistics on price series.

mod hurst;
mod stats;

pub use hurst::{
    average_sigma_across_trials, default_tau_grid, fit_hurst, fit_power_law, sigma_table,
    sigma_tau, HurstFit, SigmaTable,
};
pub use stats::{
    acf, aggregational_gaussianity_profile, excess_kurtosis, histogram, log_returns, mean,
    overlapping_returns, returns, std_dev, AcfResult, TailStats,
};

use serde::{Deserialize, Serialize};

/// An ordered price trajectory with optional per-step metadata.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PriceSeries {
    pub prices: Vec<f64>,
    /// Traded volume per step, aligned with `prices[1..]`.
    pub volume: Option<Vec<u64>>,
}

impl PriceSeries {
    pub fn new(prices: Vec<f64>) -> Self {
        Self {
            prices,
            volume: None,
        }
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn max_abs_deviation_from(&self, level: f64) -> f64 {
        self.prices
            .iter()
            .map(|p| (p - level).abs())
            .fold(0.0, f64::max)
    }
}

impl From<Vec<f64>> for PriceSeries {
    fn from(prices: Vec<f64>) -> Self {
        Self::new(prices)
    }
}
