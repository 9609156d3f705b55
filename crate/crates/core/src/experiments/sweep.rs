use std::path::Path;

use serde::Serialize;

use super::{
    run_ensemble, EnsembleResult, Execution, ExperimentSpec, Spread, HISTOGRAM_BINS,
    HISTOGRAM_SPAN_SD,
};
use crate::analysis::{histogram, HurstFit, PriceSeries, SigmaTable, TailStats};
use crate::error::Result;
use crate::io::{ensure_dir, write_table};

pub const SWEEP_SUMMARY_FILE: &str = "sweep.csv";

/// Ensemble summary at one perturbation level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub pb: f64,
    pub averaged: SigmaTable,
    pub fit: HurstFit,
    /// Spread of per-trial Hurst exponents.
    pub hurst: Spread,
    /// Spread of per-trial excess kurtosis of horizon-1 returns.
    pub excess_kurtosis: Spread,
    /// Histogram of horizon-1 returns pooled over trials.
    pub histogram: TailStats,
    pub mean_max_deviation: f64,
    /// Trajectory of the first trial.
    #[serde(skip)]
    pub trajectory: PriceSeries,
}

impl SweepPoint {
    pub fn from_ensemble(ensemble: &EnsembleResult) -> Result<SweepPoint> {
        let pooled = ensemble.pooled_returns(1)?;
        Ok(SweepPoint {
            pb: ensemble.config.perturbation,
            averaged: ensemble.averaged.clone(),
            fit: ensemble.fit.clone(),
            hurst: ensemble.hurst_spread(),
            excess_kurtosis: ensemble.kurtosis_spread(1),
            histogram: histogram(&pooled, HISTOGRAM_BINS, HISTOGRAM_SPAN_SD)?,
            mean_max_deviation: ensemble.mean_max_deviation(ensemble.config.initial_price),
            trajectory: ensemble.trials[0].series.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub spec: ExperimentSpec,
    pub seeds: Vec<u64>,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn point(&self, pb: f64) -> Option<&SweepPoint> {
        self.points.iter().find(|p| p.pb == pb)
    }
}

/// Runs one ensemble per value of `spec.pb_grid`, all with the same seeds.
pub fn sweep_pb(spec: &ExperimentSpec, execution: Execution) -> Result<SweepResult> {
    spec.validate()?;
    let points = spec
        .pb_grid
        .iter()
        .map(|&pb| {
            let config = spec.base_config.clone().with_perturbation(pb);
            let ensemble = run_ensemble(&config, spec.n_trials, spec.master_seed, execution)?;
            SweepPoint::from_ensemble(&ensemble)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        spec: spec.clone(),
        seeds: spec.seeds(),
        points,
    })
}

/// Histogram file name for a perturbation level.
pub fn histogram_file(pb: f64) -> String {
    format!("hist_pb{pb}.csv")
}

/// Writes `sweep.csv` (`pb,hurst,r2,excess_kurtosis`) and one
/// `hist_pb<pb>.csv` (`bin_center,density`) per level. Returns file names.
pub fn emit_sweep(result: &SweepResult, dir: &Path) -> Result<Vec<String>> {
    ensure_dir(dir)?;
    write_table(
        &dir.join(SWEEP_SUMMARY_FILE),
        &["pb", "hurst", "r2", "excess_kurtosis"],
        result
            .points
            .iter()
            .map(|p| [p.pb, p.fit.hurst, p.fit.r_squared, p.excess_kurtosis.mean]),
    )?;
    let mut files = vec![SWEEP_SUMMARY_FILE.to_string()];
    for p in &result.points {
        let name = histogram_file(p.pb);
        write_table(
            &dir.join(&name),
            &["bin_center", "density"],
            p.histogram
                .bin_centers
                .iter()
                .zip(&p.histogram.densities)
                .map(|(c, d)| [*c, *d]),
        )?;
        files.push(name);
    }
    Ok(files)
}
