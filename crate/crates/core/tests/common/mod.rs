//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};

use specgame::analysis::{default_tau_grid, fit_hurst, PriceSeries};
use specgame::engine::{quantize_move, run, Game, Player, TradeEvent};
use specgame::GameConfig;

/// Variance of the `tau`-increments via the pairwise identity
/// `var = 1/(2 n^2) * sum_i sum_j (d_i - d_j)^2`; shares no code path with
/// the library's two-pass estimator.
pub fn sigma_pairwise(prices: &[f64], tau: usize) -> f64 {
    let d: Vec<f64> = (0..prices.len() - tau)
        .map(|t| prices[t + tau] - prices[t])
        .collect();
    let n = d.len() as f64;
    let mut acc = 0.0;
    for a in &d {
        for b in &d {
            acc += (a - b) * (a - b);
        }
    }
    (acc / (2.0 * n * n)).sqrt()
}

/// Gaussian-increment random walk of `len` points starting at zero.
pub fn gaussian_walk(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = 0.0;
    let mut out = Vec::with_capacity(len);
    out.push(p);
    for _ in 1..len {
        let z: f64 = StandardNormal.sample(&mut rng);
        p += z;
        out.push(p);
    }
    out
}

pub fn gaussian_samples(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Laplace(0, 1) as the difference of two unit exponentials.
pub fn laplace_samples(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = Exp::new(1.0).unwrap();
    (0..n)
        .map(|_| e.sample(&mut rng) - e.sample(&mut rng))
        .collect()
}

pub fn uniform_series(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-50.0..50.0)).collect()
}

/// How many of `seeds` random walks of length `len` fit a Hurst exponent
/// inside `[lo, hi]` on the default grid.
pub fn random_walk_hits(seeds: std::ops::Range<u64>, len: usize, lo: f64, hi: f64) -> usize {
    let grid = default_tau_grid(len);
    seeds
        .filter(|&s| {
            let h = fit_hurst(&PriceSeries::new(gaussian_walk(len, s)), &grid)
                .unwrap()
                .hurst;
            (lo..=hi).contains(&h)
        })
        .count()
}

/// Replays one game step by step and checks every engine invariant against
/// quantities recomputed from the trade events. Returns the first violation.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn check_engine_invariants(config: &GameConfig) -> Result<(), String> {
    macro_rules! ensure {
        ($cond:expr, $($msg:tt)+) => {
            if !$cond {
                return Err(format!($($msg)+));
            }
        };
    }

    let mut g = Game::new(config.clone()).map_err(|e| e.to_string())?;
    g.record_events(true);
    let n = config.n_players;
    let lot = config.board_lot as f64;
    let mut ledger: Vec<f64> = g.players().iter().map(Player::wealth).collect();
    let mut open_qty: Vec<Option<u64>> = vec![None; n];
    let (mut cp, mut price) = (0.0, config.initial_price);
    let mut records = Vec::with_capacity(config.horizon);

    for step in 1..=config.horizon {
        let r = g.step();
        records.push(r);
        let h = quantize_move(r.price_change, config.cognitive_threshold);
        ensure!(
            r.quantized_move == h,
            "step {step}: h {} != {h}",
            r.quantized_move
        );
        ensure!(
            *g.market().history.last().unwrap() == h,
            "step {step}: history digit differs from h"
        );
        if config.perturbation == 0.0 {
            ensure!(
                r.perturbation_draw == 0.0 && r.price_change == r.speculative_imbalance,
                "step {step}: Pb = 0 but price change carries noise"
            );
        } else {
            ensure!(h != 0, "step {step}: zero digit under Pb > 0");
            ensure!(
                r.perturbation_draw.abs() <= config.perturbation,
                "step {step}: draw outside [-Pb, Pb]"
            );
        }
        cp += f64::from(h);
        price += r.price_change;
        ensure!(
            g.market().cognitive_price == cp,
            "step {step}: P is not the sum of h"
        );
        ensure!(
            (g.market().price - price).abs() < 1e-9,
            "step {step}: p drifted"
        );

        let (mut volume, mut imbalance) = (0u64, 0i64);
        for e in g.events() {
            match *e {
                TradeEvent::Open {
                    player,
                    action,
                    quantity,
                } => {
                    ensure!(
                        open_qty[player].is_none(),
                        "step {step}: player {player} opened twice"
                    );
                    ensure!(quantity >= 1, "step {step}: empty order");
                    open_qty[player] = Some(quantity);
                    volume += quantity;
                    imbalance += action.value() * quantity as i64;
                }
                TradeEvent::Close {
                    player,
                    action,
                    quantity,
                    open_quantity,
                    gain,
                    wealth_change,
                    ..
                } => {
                    ensure!(
                        open_qty[player] == Some(quantity) && quantity == open_quantity,
                        "step {step}: player {player} closed {quantity}, opened {:?}",
                        open_qty[player]
                    );
                    ensure!(
                        wealth_change == gain * quantity as f64,
                        "step {step}: wealth change {wealth_change} != {gain} * {quantity}"
                    );
                    open_qty[player] = None;
                    ledger[player] += wealth_change;
                    volume += quantity;
                    imbalance += action.value() * quantity as i64;
                }
                TradeEvent::Replaced { player } => {
                    ensure!(
                        ledger[player] < lot,
                        "step {step}: solvent player {player} replaced"
                    );
                    ledger[player] = g.players()[player].wealth();
                }
                TradeEvent::VirtualClose { .. } => {}
            }
        }
        ensure!(volume == r.traded_volume, "step {step}: volume mismatch");
        ensure!(
            (imbalance as f64 / n as f64 - r.speculative_imbalance).abs() < 1e-12,
            "step {step}: imbalance mismatch"
        );
        for (i, p) in g.players().iter().enumerate() {
            ensure!(
                p.wealth() == ledger[i],
                "step {step}: player {i} wealth not audited"
            );
            ensure!(
                p.wealth() >= lot,
                "step {step}: insolvent player {i} survived"
            );
            ensure!(
                p.position().map(|o| o.quantity) == open_qty[i],
                "step {step}: player {i} position disagrees with events"
            );
        }
    }
    if config.perturbation > 0.0 {
        ensure!(
            g.market().history.iter().all(|&d| d != 0),
            "seed history contains 0 under Pb > 0"
        );
    }
    let again = run(config).map_err(|e| e.to_string())?;
    ensure!(again.records == records, "rerun with the same seed differs");
    Ok(())
}
