use std::path::Path;

use super::{sweep_pb, Execution, ExperimentSpec, SweepPoint, SweepResult, TAIL_PB_LEVELS};
use crate::analysis::{HurstFit, PriceSeries};
use crate::error::{Error, Result};
use crate::io::{ensure_dir, write_table};

/// Files written by [`emit_figure_data`], in figure order.
pub const FIGURE_FILES: [&str; 6] = [
    "fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv", "fig5.csv", "fig6.csv",
];

const BASELINE_PB: f64 = 0.0;
const RECOVERY_PB: f64 = 0.25;

/// Sweeps the spec's grid extended with every level the figures need
/// (0, 0.25, 0.5, 0.75).
pub fn reproduce_figures(spec: &ExperimentSpec, execution: Execution) -> Result<SweepResult> {
    let mut spec = spec.clone();
    spec.pb_grid.extend([BASELINE_PB, RECOVERY_PB]);
    spec.pb_grid.extend(TAIL_PB_LEVELS);
    spec.pb_grid.sort_by(f64::total_cmp);
    spec.pb_grid.dedup();
    sweep_pb(&spec, execution)
}

fn require(result: &SweepResult, pb: f64) -> Result<&SweepPoint> {
    result
        .point(pb)
        .ok_or_else(|| Error::InvalidInput(format!("sweep has no Pb = {pb} point")))
}

fn write_trajectory(path: &Path, series: &PriceSeries) -> Result<()> {
    write_table(
        path,
        &["t", "price"],
        series
            .prices
            .iter()
            .enumerate()
            .map(|(t, p)| [t.to_string(), p.to_string()]),
    )
}

fn write_fit(path: &Path, fit: &HurstFit) -> Result<()> {
    write_table(
        path,
        &[
            "tau",
            "sigma",
            "fitted_sigma",
            "hurst",
            "intercept",
            "r_squared",
        ],
        fit.taus.iter().zip(&fit.sigmas).map(|(&tau, &sigma)| {
            [
                tau as f64,
                sigma,
                fit.predicted_sigma(tau),
                fit.hurst,
                fit.intercept,
                fit.r_squared,
            ]
        }),
    )
}

/// Writes the data behind each figure:
///
/// - `fig1.csv`, `fig3.csv`: `t,price` for the first trial at Pb = 0 and 0.25
/// - `fig2.csv`, `fig4.csv`: averaged `sigma(tau)` with the fitted line
/// - `fig5.csv`: `pb,bin_center,density` return histograms at Pb = 0.25, 0.5, 0.75
/// - `fig6.csv`: `pb,hurst,hurst_se,r_squared` over the whole sweep
pub fn emit_figure_data(result: &SweepResult, dir: &Path) -> Result<Vec<String>> {
    ensure_dir(dir)?;
    let baseline = require(result, BASELINE_PB)?;
    let recovered = require(result, RECOVERY_PB)?;
    write_trajectory(&dir.join(FIGURE_FILES[0]), &baseline.trajectory)?;
    write_fit(&dir.join(FIGURE_FILES[1]), &baseline.fit)?;
    write_trajectory(&dir.join(FIGURE_FILES[2]), &recovered.trajectory)?;
    write_fit(&dir.join(FIGURE_FILES[3]), &recovered.fit)?;

    let mut rows = Vec::new();
    for pb in TAIL_PB_LEVELS {
        let h = &require(result, pb)?.histogram;
        rows.extend(
            h.bin_centers
                .iter()
                .zip(&h.densities)
                .map(|(c, d)| [pb, *c, *d]),
        );
    }
    write_table(
        &dir.join(FIGURE_FILES[4]),
        &["pb", "bin_center", "density"],
        rows,
    )?;

    write_table(
        &dir.join(FIGURE_FILES[5]),
        &["pb", "hurst", "hurst_se", "r_squared"],
        result
            .points
            .iter()
            .map(|p| [p.pb, p.fit.hurst, p.hurst.standard_error, p.fit.r_squared]),
    )?;
    Ok(FIGURE_FILES.iter().map(|s| s.to_string()).collect())
}
