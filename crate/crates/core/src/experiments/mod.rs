//! Multi-trial ensembles, perturbation sweeps and figure data.
//!
//! Trial `i` of an ensemble always uses seed `master_seed + i` (wrapping), so
//! an ensemble is reproducible from its spec alone. Trials are independent and
//! are executed through [`map_trials`], which uses rayon when the `parallel`
//! feature is enabled; results are collected in trial order either way.

mod ensemble;
mod figures;
mod sweep;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::config::GameConfig;
use crate::error::{Error, Result};

pub use ensemble::{run_ensemble, EnsembleResult, Spread, Trial};
pub use figures::{emit_figure_data, reproduce_figures, FIGURE_FILES};
pub use sweep::{emit_sweep, sweep_pb, SweepPoint, SweepResult, SWEEP_SUMMARY_FILE};

/// Perturbation levels compared in the tail-thinning figure.
pub const TAIL_PB_LEVELS: [f64; 3] = [0.25, 0.5, 0.75];

/// Number of histogram bins and their half-span in standard deviations.
pub const HISTOGRAM_BINS: usize = 101;
pub const HISTOGRAM_SPAN_SD: f64 = 6.0;

/// Seed of trial `index` in an ensemble.
pub fn trial_seed(master_seed: u64, index: usize) -> u64 {
    master_seed.wrapping_add(index as u64)
}

/// How independent trials are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    /// Rayon work-stealing pool; same as `Sequential` without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Maps `f` over trial indices `0..n`, returning results in index order.
pub fn map_trials<T, F>(n: usize, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match execution {
        Execution::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel => (0..n).map(f).collect(),
    }
}

/// An ensemble / sweep description, usually read from a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub base_config: GameConfig,
    pub n_trials: usize,
    pub pb_grid: Vec<f64>,
    pub master_seed: u64,
    pub output_dir: PathBuf,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            base_config: GameConfig::default(),
            n_trials: 100,
            pb_grid: vec![0.0, 0.1, 0.25, 0.5, 0.75, 1.0],
            master_seed: 0,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.base_config.validate()?;
        if self.n_trials == 0 {
            return Err(Error::config("n_trials", "must be >= 1"));
        }
        if self.pb_grid.is_empty() {
            return Err(Error::config("pb_grid", "must not be empty"));
        }
        if self
            .pb_grid
            .iter()
            .any(|pb| !(pb.is_finite() && *pb >= 0.0))
        {
            return Err(Error::config("pb_grid", "values must be >= 0"));
        }
        if self.pb_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config(
                "pb_grid",
                "values must be strictly ascending",
            ));
        }
        Ok(())
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.n_trials)
            .map(|i| trial_seed(self.master_seed, i))
            .collect()
    }
}
