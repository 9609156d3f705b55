//! The speculation game: players trade round trips against a shared price,
//! scored in a coarse-grained cognitive price.

mod game;
mod player;
mod strategy;

pub use game::{run, Game, MarketState, Simulation, StepRecord, TradeEvent};
pub use player::{replace_if_bankrupt, resolve_order, OpenPosition, Order, Player, Settlement};
pub use strategy::{Action, Alphabet, Strategy};

use rand::Rng;

/// Initial wealth `floor(B + u)` with `u ~ U[0, 100)`.
pub fn draw_initial_wealth<R: Rng + ?Sized>(board_lot: u64, rng: &mut R) -> f64 {
    initial_wealth_from_draw(board_lot, rng.random_range(0.0..100.0))
}

/// Deterministic half of [`draw_initial_wealth`] for a given uniform draw.
pub fn initial_wealth_from_draw(board_lot: u64, u: f64) -> f64 {
    (board_lot as f64 + u).floor()
}

/// Orderable units: `floor(wealth / B)`.
pub fn order_quantity(wealth: f64, board_lot: u64) -> u64 {
    if wealth <= 0.0 {
        return 0;
    }
    // Truncation is the floor for non-negative values.
    (wealth / board_lot as f64) as u64
}

/// `(1/N) * sum(a * q)` over submitted orders.
pub fn speculative_imbalance(
    signed_quantities: impl IntoIterator<Item = i64>,
    n_players: usize,
) -> f64 {
    let total: i64 = signed_quantities.into_iter().sum();
    total as f64 / n_players as f64
}

/// One market-wide draw from `U[-pb, pb)`; exactly zero (and no RNG use) when `pb = 0`.
pub fn perturbation_draw<R: Rng + ?Sized>(pb: f64, rng: &mut R) -> f64 {
    if pb > 0.0 {
        rng.random_range(-pb..pb)
    } else {
        0.0
    }
}

/// Price change from submitted orders plus perturbation. Returns `(dp, draw)`.
pub fn aggregate_price_change<R: Rng + ?Sized>(
    signed_quantities: impl IntoIterator<Item = i64>,
    n_players: usize,
    pb: f64,
    rng: &mut R,
) -> (f64, f64) {
    let imbalance = speculative_imbalance(signed_quantities, n_players);
    let draw = perturbation_draw(pb, rng);
    (imbalance + draw, draw)
}

/// Five-level coarse-graining of a price change against threshold `c`.
pub fn quantize_move(dp: f64, c: f64) -> i8 {
    if dp > c {
        2
    } else if dp > 0.0 {
        1
    } else if dp == 0.0 {
        0
    } else if dp >= -c {
        -1
    } else {
        -2
    }
}

pub fn update_cognitive_price(previous: f64, h: i8) -> f64 {
    previous + h as f64
}

/// Cognitive-price gain of a round trip opened with `open_action`.
pub fn round_trip_gain(open_action: Action, open_price: f64, close_price: f64) -> f64 {
    open_action.value() as f64 * (close_price - open_price)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn initial_wealth_boundaries() {
        assert_eq!(initial_wealth_from_draw(9, 0.0), 9.0);
        assert_eq!(initial_wealth_from_draw(9, 99.999), 108.0);
        assert_eq!(initial_wealth_from_draw(9, 41.7), 50.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let w = draw_initial_wealth(9, &mut rng);
            assert!((9.0..=108.0).contains(&w) && w.fract() == 0.0);
        }
    }

    #[test]
    fn order_quantity_floors() {
        assert_eq!(order_quantity(9.0, 9), 1);
        assert_eq!(order_quantity(8.5, 9), 0);
        assert_eq!(order_quantity(50.0, 9), 5);
        assert_eq!(order_quantity(-4.0, 9), 0);
    }

    #[test]
    fn price_change_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(aggregate_price_change([], 4, 0.0, &mut rng), (0.0, 0.0));
        assert_eq!(
            aggregate_price_change([3, -1], 4, 0.0, &mut rng),
            (0.5, 0.0)
        );
        assert_eq!(speculative_imbalance([], 1000) + -0.1, -0.1);
    }

    #[test]
    fn zero_perturbation_consumes_no_randomness() {
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let b = a.clone();
        assert_eq!(perturbation_draw(0.0, &mut a), 0.0);
        assert_eq!(a, b);
    }

    #[test]
    fn perturbation_stays_in_half_open_band() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let u = perturbation_draw(0.25, &mut rng);
            assert!((-0.25..0.25).contains(&u));
        }
    }

    #[test]
    fn quantization_branches() {
        assert_eq!(quantize_move(5.0, 3.0), 2);
        assert_eq!(quantize_move(3.0, 3.0), 1);
        assert_eq!(quantize_move(0.2, 3.0), 1);
        assert_eq!(quantize_move(0.0, 3.0), 0);
        assert_eq!(quantize_move(-3.0, 3.0), -1);
        assert_eq!(quantize_move(-3.01, 3.0), -2);
    }

    #[test]
    fn cognitive_price_telescopes() {
        assert_eq!(update_cognitive_price(0.0, 2), 2.0);
        assert_eq!(update_cognitive_price(5.0, -1), 4.0);
        let p = [1i8, 1, -2]
            .iter()
            .fold(0.0, |p, &h| update_cognitive_price(p, h));
        assert_eq!(p, 0.0);
    }

    #[test]
    fn round_trip_gain_sign() {
        assert_eq!(round_trip_gain(Action::Buy, 3.0, 7.0), 4.0);
        assert_eq!(round_trip_gain(Action::Sell, 3.0, 7.0), -4.0);
        assert_eq!(round_trip_gain(Action::Buy, 3.0, 3.0), 0.0);
    }
}
