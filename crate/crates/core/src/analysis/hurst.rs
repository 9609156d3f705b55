use serde::{Deserialize, Serialize};

use super::PriceSeries;
use crate::error::{Error, Result};

/// Standard deviation of the `tau`-step price changes over all overlapping
/// windows:
///
/// `sigma(tau) = sqrt(<(p(t+tau) - p(t))^2> - <p(t+tau) - p(t)>^2)`
///
/// computed with a centered two-pass sum. Returns 0 for constant increments.
pub fn sigma_tau(series: &PriceSeries, tau: usize) -> Result<f64> {
    let p = &series.prices;
    if tau == 0 || tau >= p.len() {
        return Err(Error::LagOutOfRange {
            lag: tau,
            len: p.len(),
        });
    }
    let n = (p.len() - tau) as f64;
    let diffs = || p.iter().zip(&p[tau..]).map(|(a, b)| b - a);
    let mean = diffs().sum::<f64>() / n;
    let var = diffs().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
    Ok(var.max(0.0).sqrt())
}

/// Dyadic `tau = 2^k`, `k = 0..=12`, keeping only `tau <= len / 10`.
pub fn default_tau_grid(len: usize) -> Vec<usize> {
    (0..=12)
        .map(|k| 1usize << k)
        .take_while(|&t| t <= len / 10)
        .collect()
}

/// `sigma(tau)` evaluated over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaTable {
    pub taus: Vec<usize>,
    pub sigmas: Vec<f64>,
}

pub fn sigma_table(series: &PriceSeries, taus: &[usize]) -> Result<SigmaTable> {
    let sigmas = taus
        .iter()
        .map(|&t| sigma_tau(series, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(SigmaTable {
        taus: taus.to_vec(),
        sigmas,
    })
}

/// Per-tau arithmetic mean of sigma across trials sharing one grid.
pub fn average_sigma_across_trials(tables: &[SigmaTable]) -> Result<SigmaTable> {
    let first = tables
        .first()
        .ok_or(Error::SeriesTooShort { needed: 1, got: 0 })?;
    if tables
        .iter()
        .any(|t| t.taus != first.taus || t.sigmas.len() != first.taus.len())
    {
        return Err(Error::GridMismatch);
    }
    let n = tables.len() as f64;
    let sigmas = (0..first.taus.len())
        .map(|k| tables.iter().map(|t| t.sigmas[k]).sum::<f64>() / n)
        .collect();
    Ok(SigmaTable {
        taus: first.taus.clone(),
        sigmas,
    })
}

/// Power-law fit `sigma(tau) ~ exp(intercept) * tau^hurst`.
///
/// Only grid points with `sigma > 0` are kept in `taus`/`sigmas`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstFit {
    pub taus: Vec<usize>,
    pub sigmas: Vec<f64>,
    pub hurst: f64,
    /// Natural-log intercept.
    pub intercept: f64,
    pub r_squared: f64,
}

impl HurstFit {
    pub fn predicted_sigma(&self, tau: usize) -> f64 {
        (self.intercept + self.hurst * (tau as f64).ln()).exp()
    }
}

/// OLS of `ln sigma` on `ln tau` over the usable (`sigma > 0`) points.
pub fn fit_power_law(table: &SigmaTable) -> Result<HurstFit> {
    if table.taus.len() != table.sigmas.len() {
        return Err(Error::GridMismatch);
    }
    let (taus, sigmas): (Vec<usize>, Vec<f64>) = table
        .taus
        .iter()
        .zip(&table.sigmas)
        .filter(|(_, s)| **s > 0.0 && s.is_finite())
        .map(|(t, s)| (*t, *s))
        .unzip();
    if taus.len() < 3 {
        return Err(Error::InsufficientGrid { usable: taus.len() });
    }
    if taus.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "tau grid must be strictly ascending".into(),
        ));
    }
    let xs: Vec<f64> = taus.iter().map(|&t| (t as f64).ln()).collect();
    let ys: Vec<f64> = sigmas.iter().map(|s| s.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(HurstFit {
        taus,
        sigmas,
        hurst: slope,
        intercept,
        r_squared,
    })
}

/// Computes `sigma(tau)` on `taus` and fits the scaling exponent.
pub fn fit_hurst(series: &PriceSeries, taus: &[usize]) -> Result<HurstFit> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            got: series.len(),
        });
    }
    fit_power_law(&sigma_table(series, taus)?)
}
