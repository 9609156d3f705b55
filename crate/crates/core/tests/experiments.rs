use std::fs;

use specgame::analysis::default_tau_grid;
use specgame::experiments::{
    emit_figure_data, emit_sweep, reproduce_figures, run_ensemble, sweep_pb, Execution,
    ExperimentSpec, FIGURE_FILES, SWEEP_SUMMARY_FILE,
};
use specgame::io::Manifest;
use specgame::GameConfig;

fn small_spec(grid: &[f64]) -> ExperimentSpec {
    ExperimentSpec {
        base_config: GameConfig {
            n_players: 60,
            memory: 3,
            horizon: 2_000,
            ..GameConfig::default()
        },
        n_trials: 3,
        pb_grid: grid.to_vec(),
        master_seed: 42,
        ..ExperimentSpec::default()
    }
}

#[test]
fn degenerate_sweep_is_the_baseline_ensemble() {
    let spec = small_spec(&[0.0]);
    let sweep = sweep_pb(&spec, Execution::Parallel).unwrap();
    let base = run_ensemble(&spec.base_config, 3, 42, Execution::Sequential).unwrap();
    let p = &sweep.points[0];
    assert_eq!(p.averaged, base.averaged);
    assert_eq!(p.fit, base.fit);
    assert_eq!(p.trajectory, base.trials[0].series);
    assert_eq!(sweep.seeds, vec![42, 43, 44]);
}

#[test]
fn sequential_and_parallel_sweeps_agree() {
    let spec = small_spec(&[0.0, 0.5]);
    let a = sweep_pb(&spec, Execution::Sequential).unwrap();
    let b = sweep_pb(&spec, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sweep_summary_has_one_row_per_level() {
    let spec = small_spec(&[0.0, 0.25, 0.5, 0.75]);
    let dir = tempfile::tempdir().unwrap();
    let files = emit_sweep(&sweep_pb(&spec, Execution::default()).unwrap(), dir.path()).unwrap();
    assert_eq!(files.len(), 5);
    let summary = fs::read_to_string(dir.path().join(SWEEP_SUMMARY_FILE)).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], "pb,hurst,r2,excess_kurtosis");
    assert_eq!(lines.len(), 5);
    assert!(lines[2].starts_with("0.25,"));
}

#[test]
fn figure_files_are_complete_and_reproducible() {
    let spec = small_spec(&[0.0, 1.0]);
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let result = reproduce_figures(&spec, Execution::default()).unwrap();
    assert_eq!(
        result.points.iter().map(|p| p.pb).collect::<Vec<_>>(),
        vec![0.0, 0.25, 0.5, 0.75, 1.0]
    );
    let files = emit_figure_data(&result, d1.path()).unwrap();
    assert_eq!(files, FIGURE_FILES.to_vec());
    let again = reproduce_figures(&spec, Execution::Sequential).unwrap();
    emit_figure_data(&again, d2.path()).unwrap();
    for f in FIGURE_FILES {
        assert_eq!(
            fs::read(d1.path().join(f)).unwrap(),
            fs::read(d2.path().join(f)).unwrap(),
            "{f}"
        );
    }

    let fig4 = fs::read_to_string(d1.path().join("fig4.csv")).unwrap();
    let taus: Vec<usize> = fig4
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    let fit = &result.point(0.25).unwrap().fit;
    assert_eq!(taus, fit.taus);
    assert_eq!(taus, default_tau_grid(2_001));

    let fig1 = fs::read_to_string(d1.path().join("fig1.csv")).unwrap();
    assert_eq!(fig1.lines().count(), 1 + 2_001);
    assert!(fig1.lines().nth(1).unwrap().starts_with("0,100"));

    let fig6 = fs::read_to_string(d1.path().join("fig6.csv")).unwrap();
    assert_eq!(fig6.lines().count(), 1 + 5);
    let fig5 = fs::read_to_string(d1.path().join("fig5.csv")).unwrap();
    assert_eq!(fig5.lines().count(), 1 + 3 * 101);
}

#[test]
fn manifest_lists_hashed_files() {
    let spec = small_spec(&[0.0]);
    let dir = tempfile::tempdir().unwrap();
    let files = emit_sweep(&sweep_pb(&spec, Execution::default()).unwrap(), dir.path()).unwrap();
    let manifest = Manifest::write(
        dir.path(),
        "sweep",
        serde_json::to_value(&spec).unwrap(),
        spec.seeds(),
        &files,
    )
    .unwrap();
    assert_eq!(manifest.files.len(), files.len());
    assert_eq!(manifest.seeds, vec![42, 43, 44]);
    let on_disk: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(on_disk["files"][0]["path"], SWEEP_SUMMARY_FILE);
    assert_eq!(on_disk["files"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn invalid_specs_are_rejected() {
    let mut spec = small_spec(&[0.5, 0.25]);
    assert!(sweep_pb(&spec, Execution::Sequential).is_err());
    spec.pb_grid = vec![];
    assert!(sweep_pb(&spec, Execution::Sequential).is_err());
    spec.pb_grid = vec![-0.1];
    assert!(sweep_pb(&spec, Execution::Sequential).is_err());
    spec.pb_grid = vec![0.0];
    spec.n_trials = 0;
    assert!(sweep_pb(&spec, Execution::Sequential).is_err());
}
