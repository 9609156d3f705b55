use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::json;
use specgame::analysis::{
    acf, aggregational_gaussianity_profile, default_tau_grid, excess_kurtosis, fit_power_law,
    log_returns, overlapping_returns, sigma_table, PriceSeries,
};
use specgame::engine::run;
use specgame::experiments::{
    emit_figure_data, emit_sweep, reproduce_figures, sweep_pb, Execution, ExperimentSpec,
};
use specgame::io::{
    create_file, ensure_dir, open_file, read_records_csv, read_records_jsonl, series_from_records,
    write_json, write_records_csv, write_records_jsonl, write_table, Manifest, RunMetadata,
};
use specgame::{Error, GameConfig};

use crate::{AnalyzeArgs, ExperimentArgs, Format, GameFlags, SimulateArgs};

pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::InvalidConfig { .. }
            | Error::Parse { .. }
            | Error::SeriesTooShort { .. }
            | Error::InvalidInput(_)
            | Error::InsufficientGrid { .. },
        ) => 1,
        _ if err.downcast_ref::<serde_json::Error>().is_some() => 1,
        _ => 2,
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

impl GameFlags {
    fn apply(&self, c: &mut GameConfig) {
        if let Some(v) = self.n_players {
            c.n_players = v;
        }
        if let Some(v) = self.memory {
            c.memory = v;
        }
        if let Some(v) = self.n_strategies {
            c.n_strategies = v;
        }
        if let Some(v) = self.board_lot {
            c.board_lot = v;
        }
        if let Some(v) = self.cognitive_threshold {
            c.cognitive_threshold = v;
        }
        if let Some(v) = self.perturbation {
            c.perturbation = v;
        }
        if let Some(v) = self.horizon {
            c.horizon = v;
        }
        if let Some(v) = self.initial_price {
            c.initial_price = v;
        }
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

pub fn simulate(args: SimulateArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => read_json(path)?,
        None => GameConfig::default(),
    };
    args.game.apply(&mut config);
    if let Some(seed) = args.seed {
        config.rng_seed = seed;
    }
    config.validate()?;
    if args.print_config {
        return print_json(&config);
    }
    for w in config.warnings() {
        eprintln!("warning: {w}");
    }

    let sim = run(&config)?;
    let dir = &args.output;
    ensure_dir(dir)?;
    let records_file = match args.format {
        Format::Csv => {
            write_records_csv(create_file(&dir.join("steps.csv"))?, &sim.records)?;
            "steps.csv"
        }
        Format::Jsonl => {
            write_records_jsonl(create_file(&dir.join("steps.jsonl"))?, &sim.records)?;
            "steps.jsonl"
        }
    };
    write_json(
        &dir.join("metadata.json"),
        &RunMetadata::new(&config, sim.records.len()),
    )?;
    let files = vec![records_file.to_string(), "metadata.json".to_string()];
    Manifest::write(
        dir,
        "simulate",
        serde_json::to_value(&config)?,
        vec![config.rng_seed],
        &files,
    )?;
    eprintln!(
        "simulated {} steps (seed {}), final price {:.4} -> {}",
        sim.records.len(),
        config.rng_seed,
        sim.records.last().map_or(config.initial_price, |r| r.price),
        dir.display()
    );
    Ok(())
}

fn read_series(path: &Path) -> Result<PriceSeries> {
    let reader = open_file(path)?;
    let records = match path.extension().and_then(|e| e.to_str()) {
        Some("jsonl") => read_records_jsonl(reader)?,
        _ => read_records_csv(reader)?,
    };
    Ok(series_from_records(&records))
}

/// Shortest series for which the default grid has three points.
const MIN_ANALYZE_LEN: usize = 40;

pub fn analyze(args: AnalyzeArgs) -> Result<()> {
    let series = read_series(&args.input)?;
    if series.len() < MIN_ANALYZE_LEN {
        return Err(Error::SeriesTooShort {
            needed: MIN_ANALYZE_LEN,
            got: series.len(),
        }
        .into());
    }
    let dir = &args.output;
    ensure_dir(dir)?;

    let grid = default_tau_grid(series.len());
    let table = sigma_table(&series, &grid)?;
    write_table(
        &dir.join("sigma.csv"),
        &["tau", "sigma"],
        table
            .taus
            .iter()
            .zip(&table.sigmas)
            .map(|(t, s)| [t.to_string(), s.to_string()]),
    )?;
    let fit = fit_power_law(&table)?;
    write_json(
        &dir.join("fit.json"),
        &json!({
            "hurst": fit.hurst,
            "intercept": fit.intercept,
            "r_squared": fit.r_squared,
            "points": fit.taus.len(),
        }),
    )?;

    let (rets, diag_series) = if args.log_returns {
        let logs = PriceSeries::new(series.prices.iter().map(|p| p.ln()).collect());
        (log_returns(&series, 1)?, logs)
    } else {
        (overlapping_returns(&series, 1)?, series.clone())
    };
    let max_lag = args.max_lag.min(rets.len().saturating_sub(2));
    let abs: Vec<f64> = rets.iter().map(|r| r.abs()).collect();
    for (name, values) in [("acf_returns.csv", &rets), ("acf_abs_returns.csv", &abs)] {
        let a = match acf(values, max_lag) {
            Err(Error::ZeroVariance) => {
                eprintln!("warning: {name}: constant input, autocorrelation undefined");
                write_table(
                    &dir.join(name),
                    &["lag", "acf"],
                    std::iter::empty::<[f64; 2]>(),
                )?;
                continue;
            }
            a => a?,
        };
        write_table(
            &dir.join(name),
            &["lag", "acf"],
            a.lags
                .iter()
                .zip(&a.values)
                .map(|(l, v)| [l.to_string(), v.to_string()]),
        )?;
    }
    let horizons: Vec<usize> = args
        .horizons
        .iter()
        .copied()
        .filter(|&h| h > 0 && diag_series.len() / h >= 5)
        .collect();
    let profile = aggregational_gaussianity_profile(&diag_series, &horizons)?;
    write_table(
        &dir.join("kurtosis.csv"),
        &["horizon", "excess_kurtosis"],
        profile.iter().map(|(h, k)| [h.to_string(), k.to_string()]),
    )?;

    let files: Vec<String> = [
        "sigma.csv",
        "fit.json",
        "acf_returns.csv",
        "acf_abs_returns.csv",
        "kurtosis.csv",
    ]
    .map(String::from)
    .to_vec();
    Manifest::write(
        dir,
        "analyze",
        json!({
            "input": args.input,
            "max_lag": max_lag,
            "horizons": horizons,
            "log_returns": args.log_returns,
        }),
        Vec::new(),
        &files,
    )?;
    println!(
        "H = {:.4}, intercept = {:.4}, R^2 = {:.4}, excess kurtosis(1) = {:.3}",
        fit.hurst,
        fit.intercept,
        fit.r_squared,
        excess_kurtosis(&rets)?
    );
    Ok(())
}

fn experiment_spec(args: &ExperimentArgs) -> Result<ExperimentSpec> {
    let mut spec = match &args.config {
        Some(path) => read_json(path)?,
        None => ExperimentSpec::default(),
    };
    args.game.apply(&mut spec.base_config);
    if let Some(seed) = args.seed {
        spec.master_seed = seed;
    }
    if let Some(n) = args.trials {
        spec.n_trials = n;
    }
    if let Some(grid) = &args.pb_grid {
        spec.pb_grid = grid.clone();
    }
    if let Some(out) = &args.output {
        spec.output_dir = out.clone();
    }
    spec.validate()?;
    Ok(spec)
}

fn execution(args: &ExperimentArgs) -> Execution {
    if args.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

pub fn sweep(args: ExperimentArgs) -> Result<()> {
    let spec = experiment_spec(&args)?;
    if args.print_config {
        return print_json(&spec);
    }
    let result = sweep_pb(&spec, execution(&args))?;
    let files = emit_sweep(&result, &spec.output_dir)?;
    Manifest::write(
        &spec.output_dir,
        "sweep",
        serde_json::to_value(&spec)?,
        result.seeds.clone(),
        &files,
    )?;
    for p in &result.points {
        println!(
            "pb={:<6} H={:.4} (se {:.4}) R2={:.4} kurtosis={:.3}",
            p.pb, p.fit.hurst, p.hurst.standard_error, p.fit.r_squared, p.excess_kurtosis.mean
        );
    }
    Ok(())
}

pub fn figures(args: ExperimentArgs) -> Result<()> {
    let spec = experiment_spec(&args)?;
    if args.print_config {
        return print_json(&spec);
    }
    let result = reproduce_figures(&spec, execution(&args))?;
    let mut files = emit_figure_data(&result, &spec.output_dir)?;
    files.extend(emit_sweep(&result, &spec.output_dir)?);
    Manifest::write(
        &spec.output_dir,
        "figures",
        serde_json::to_value(&result.spec)?,
        result.seeds.clone(),
        &files,
    )?;
    eprintln!(
        "wrote {} files to {}",
        files.len(),
        spec.output_dir.display()
    );
    Ok(())
}
