use serde::{Deserialize, Serialize};

use super::PriceSeries;
use crate::error::{Error, Result};

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Population standard deviation.
pub fn std_dev(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / values.len() as f64).sqrt()
}

fn check_horizon(series: &PriceSeries, horizon: usize) -> Result<()> {
    if horizon == 0 || horizon >= series.len() {
        return Err(Error::LagOutOfRange {
            lag: horizon,
            len: series.len(),
        });
    }
    Ok(())
}

/// Non-overlapping arithmetic returns `p(t+h) - p(t)` for `t = 0, h, 2h, ...`.
pub fn returns(series: &PriceSeries, horizon: usize) -> Result<Vec<f64>> {
    check_horizon(series, horizon)?;
    Ok(series
        .prices
        .iter()
        .step_by(horizon)
        .collect::<Vec<_>>()
        .windows(2)
        .map(|w| w[1] - w[0])
        .collect())
}

/// Stride-1 arithmetic returns `p(t+h) - p(t)` for every `t`.
pub fn overlapping_returns(series: &PriceSeries, horizon: usize) -> Result<Vec<f64>> {
    check_horizon(series, horizon)?;
    let p = &series.prices;
    Ok(p.iter().zip(&p[horizon..]).map(|(a, b)| b - a).collect())
}

/// Non-overlapping log returns; every price must be positive.
pub fn log_returns(series: &PriceSeries, horizon: usize) -> Result<Vec<f64>> {
    check_horizon(series, horizon)?;
    if let Some(i) = series.prices.iter().position(|p| *p <= 0.0) {
        return Err(Error::InvalidInput(format!(
            "log returns need positive prices, got {} at index {i}",
            series.prices[i]
        )));
    }
    let logs = PriceSeries::new(series.prices.iter().map(|p| p.ln()).collect());
    returns(&logs, horizon)
}

/// Sample autocorrelation for lags `0..=max_lag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfResult {
    pub lags: Vec<usize>,
    pub values: Vec<f64>,
}

impl AcfResult {
    pub fn at(&self, lag: usize) -> Option<f64> {
        self.lags
            .iter()
            .position(|&l| l == lag)
            .map(|i| self.values[i])
    }
}

/// `rho(k) = sum_t (x_t - m)(x_{t+k} - m) / sum_t (x_t - m)^2` with the global
/// mean `m`; bounded by 1 in magnitude.
pub fn acf(values: &[f64], max_lag: usize) -> Result<AcfResult> {
    if values.len() <= max_lag + 1 {
        return Err(Error::SeriesTooShort {
            needed: max_lag + 2,
            got: values.len(),
        });
    }
    let m = mean(values);
    let centered: Vec<f64> = values.iter().map(|v| v - m).collect();
    let denom: f64 = centered.iter().map(|c| c * c).sum();
    if denom == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let values = (0..=max_lag)
        .map(|k| {
            let num: f64 = centered
                .iter()
                .zip(&centered[k..])
                .map(|(a, b)| a * b)
                .sum();
            num / denom
        })
        .collect();
    Ok(AcfResult {
        lags: (0..=max_lag).collect(),
        values,
    })
}

/// `m4 / m2^2 - 3` from central sample moments.
pub fn excess_kurtosis(values: &[f64]) -> Result<f64> {
    if values.len() < 4 {
        return Err(Error::SeriesTooShort {
            needed: 4,
            got: values.len(),
        });
    }
    let m = mean(values);
    let n = values.len() as f64;
    let (m2, m4) = values.iter().fold((0.0, 0.0), |(m2, m4), v| {
        let d2 = (v - m) * (v - m);
        (m2 + d2, m4 + d2 * d2)
    });
    let (m2, m4) = (m2 / n, m4 / n);
    if m2 == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(m4 / (m2 * m2) - 3.0)
}

/// Excess kurtosis of non-overlapping returns at each horizon.
pub fn aggregational_gaussianity_profile(
    series: &PriceSeries,
    horizons: &[usize],
) -> Result<Vec<(usize, f64)>> {
    horizons
        .iter()
        .map(|&h| Ok((h, excess_kurtosis(&returns(series, h)?)?)))
        .collect()
}

/// Density-normalized return histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailStats {
    pub bin_centers: Vec<f64>,
    pub densities: Vec<f64>,
    pub bin_width: f64,
    pub excess_kurtosis: f64,
    /// Samples outside the binned range; not counted in the densities.
    pub outside: usize,
}

/// Uniform bins spanning `mean ± span_sd` sample standard deviations.
///
/// Densities are normalized over the in-range samples, so
/// `sum(densities) * bin_width == 1`.
pub fn histogram(values: &[f64], bins: usize, span_sd: f64) -> Result<TailStats> {
    let kurt = excess_kurtosis(values)?;
    let m = mean(values);
    let sd = std_dev(values);
    let lo = m - span_sd * sd;
    let width = 2.0 * span_sd * sd / bins as f64;
    let hi = m + span_sd * sd;
    let mut counts = vec![0usize; bins];
    let mut outside = 0;
    for &v in values {
        if v < lo || v > hi {
            outside += 1;
        } else {
            let k = ((v - lo) / width) as usize;
            counts[k.min(bins - 1)] += 1;
        }
    }
    let inside = (values.len() - outside) as f64;
    Ok(TailStats {
        bin_centers: (0..bins).map(|k| lo + (k as f64 + 0.5) * width).collect(),
        densities: counts
            .iter()
            .map(|&c| c as f64 / (inside * width))
            .collect(),
        bin_width: width,
        excess_kurtosis: kurt,
        outside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[f64]) -> PriceSeries {
        PriceSeries::new(v.to_vec())
    }

    #[test]
    fn return_examples() {
        assert_eq!(returns(&ps(&[0., 1., 3.]), 1).unwrap(), vec![1., 2.]);
        assert_eq!(returns(&ps(&[0., 1., 3., 6.]), 2).unwrap(), vec![3.]);
        assert_eq!(
            returns(&ps(&[0., 1., 3., 6., 10.]), 2).unwrap(),
            vec![3., 7.]
        );
        assert_eq!(
            overlapping_returns(&ps(&[0., 1., 3., 6.]), 2).unwrap(),
            vec![3., 5.]
        );
        assert_eq!(returns(&ps(&[4.; 5]), 1).unwrap(), vec![0.; 4]);
        assert!(returns(&ps(&[1., 2.]), 2).is_err());
    }

    #[test]
    fn log_returns_need_positive_prices() {
        let r = log_returns(&ps(&[1., std::f64::consts::E]), 1).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-15);
        assert!(log_returns(&ps(&[1., -1., 2.]), 1).is_err());
    }

    #[test]
    fn acf_basics() {
        let alt: Vec<f64> = (0..100)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let r = acf(&alt, 2).unwrap();
        assert_eq!(r.at(0), Some(1.0));
        assert!((r.at(1).unwrap() + 0.99).abs() < 1e-12);
        assert!(acf(&[1.0; 10], 2).is_err());
        assert!(acf(&[1.0, 2.0], 1).is_err());
    }

    #[test]
    fn kurtosis_of_two_point_sample() {
        assert!((excess_kurtosis(&[1., -1., 1., -1.]).unwrap() + 2.0).abs() < 1e-15);
        assert!(matches!(
            excess_kurtosis(&[2.0; 8]),
            Err(Error::ZeroVariance)
        ));
        assert!(excess_kurtosis(&[1., 2., 3.]).is_err());
    }

    #[test]
    fn histogram_normalizes() {
        let v: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 - 50.0).collect();
        let h = histogram(&v, 101, 6.0).unwrap();
        assert_eq!(h.bin_centers.len(), 101);
        let total: f64 = h.densities.iter().sum::<f64>() * h.bin_width;
        assert!((total - 1.0).abs() < 1e-9);
        assert!(h.densities.iter().all(|d| *d >= 0.0));
    }
}
