use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::player::{replace_if_bankrupt, resolve_order, Order, Player};
use super::strategy::{Action, Alphabet};
use super::{perturbation_draw, quantize_move, speculative_imbalance, update_cognitive_price};
use crate::analysis::PriceSeries;
use crate::config::GameConfig;
use crate::error::{Error, Result};

/// One row of the output trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    #[serde(rename = "t")]
    pub time: usize,
    pub price: f64,
    #[serde(rename = "dp")]
    pub price_change: f64,
    #[serde(rename = "imbalance")]
    pub speculative_imbalance: f64,
    #[serde(rename = "perturbation")]
    pub perturbation_draw: f64,
    #[serde(rename = "h")]
    pub quantized_move: i8,
    #[serde(rename = "volume")]
    pub traded_volume: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarketState {
    pub price: f64,
    pub cognitive_price: f64,
    /// Seed digits followed by one digit per step.
    pub history: Vec<i8>,
    pub time: usize,
}

impl MarketState {
    pub fn tail(&self, memory: usize) -> &[i8] {
        &self.history[self.history.len() - memory..]
    }
}

/// Trade-level events from the most recent step, in processing order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TradeEvent {
    Open {
        player: usize,
        action: Action,
        quantity: u64,
    },
    Close {
        player: usize,
        strategy: usize,
        action: Action,
        quantity: u64,
        open_quantity: u64,
        gain: f64,
        wealth_change: f64,
    },
    VirtualClose {
        player: usize,
        strategy: usize,
        gain: f64,
    },
    Replaced {
        player: usize,
    },
}

#[derive(Debug, Clone, Default)]
struct EventLog {
    enabled: bool,
    events: Vec<TradeEvent>,
}

impl EventLog {
    #[inline]
    fn push(&mut self, event: TradeEvent) {
        if self.enabled {
            self.events.push(event);
        }
    }
}

/// A running game.
#[derive(Debug, Clone)]
pub struct Game {
    config: GameConfig,
    alphabet: Alphabet,
    rng: ChaCha8Rng,
    players: Vec<Player>,
    market: MarketState,
    events: EventLog,
    orders: Vec<Order>,
    virtual_orders: Vec<(usize, usize, Order)>,
    closed: Vec<usize>,
}

impl Game {
    /// Validates `config`, seeds the history with `memory` uniform digits and
    /// creates `n_players` random players, all from the config's seed.
    pub fn new(config: GameConfig) -> Result<Self> {
        config.validate()?;
        let alphabet = Alphabet::for_perturbation(config.perturbation);
        let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
        let history = (0..config.memory)
            .map(|_| alphabet.sample(&mut rng))
            .collect();
        let players = (0..config.n_players)
            .map(|_| Player::random(&config, alphabet, &mut rng))
            .collect();
        Ok(Self::assemble(config, alphabet, rng, players, history))
    }

    /// Builds a game from explicit players and seed history.
    ///
    /// `config.n_players` is overwritten with `players.len()`. Every strategy
    /// must use the config's alphabet and memory.
    pub fn from_parts(
        mut config: GameConfig,
        players: Vec<Player>,
        history: Vec<i8>,
    ) -> Result<Self> {
        config.n_players = players.len();
        config.validate()?;
        let alphabet = Alphabet::for_perturbation(config.perturbation);
        if history.len() < config.memory {
            return Err(Error::config("memory", "seed history shorter than memory"));
        }
        if !history.iter().all(|&d| alphabet.contains(d)) {
            return Err(Error::config(
                "perturbation",
                "seed history digit outside alphabet",
            ));
        }
        for p in &players {
            if p.strategies().len() != config.n_strategies {
                return Err(Error::config(
                    "n_strategies",
                    "player strategy count mismatch",
                ));
            }
            if p.strategies()
                .iter()
                .any(|s| s.alphabet() != alphabet || s.memory() != config.memory)
            {
                return Err(Error::config(
                    "memory",
                    "strategy table does not match config",
                ));
            }
        }
        let rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
        Ok(Self::assemble(config, alphabet, rng, players, history))
    }

    fn assemble(
        config: GameConfig,
        alphabet: Alphabet,
        rng: ChaCha8Rng,
        players: Vec<Player>,
        history: Vec<i8>,
    ) -> Self {
        let n = players.len();
        let mut history_buf = Vec::with_capacity(history.len() + config.horizon);
        history_buf.extend(history);
        Self {
            market: MarketState {
                price: config.initial_price,
                cognitive_price: 0.0,
                history: history_buf,
                time: 0,
            },
            config,
            alphabet,
            rng,
            players,
            events: EventLog {
                enabled: true,
                events: Vec::new(),
            },
            orders: vec![Order::Idle; n],
            virtual_orders: Vec::new(),
            closed: Vec::new(),
        }
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn market(&self) -> &MarketState {
        &self.market
    }

    /// Events produced by the last call to [`Game::step`]; empty when
    /// recording is off.
    pub fn events(&self) -> &[TradeEvent] {
        &self.events.events
    }

    /// Turns per-step trade event recording on or off (on by default).
    pub fn record_events(&mut self, enabled: bool) {
        self.events.enabled = enabled;
        self.events.events.clear();
    }

    /// Advances one time step.
    ///
    /// Order within the step: pending switches apply, every player decides on
    /// the same history tail, real orders form the price, the move is
    /// quantized into history and cognitive price, then real and virtual
    /// round trips settle, and players that closed a real trade re-select
    /// their strategy and are replaced if bankrupt.
    pub fn step(&mut self) -> StepRecord {
        let cfg = &self.config;
        let key = self
            .alphabet
            .pattern_index(self.market.tail(cfg.memory))
            .expect("history digits stay inside the alphabet");
        self.events.events.clear();
        self.virtual_orders.clear();
        self.closed.clear();

        // Decisions.
        for (i, player) in self.players.iter_mut().enumerate() {
            player.apply_pending_switch();
            let active = player.active;
            let rec = player.strategies[active].action_at(key);
            self.orders[i] = player.resolve_order(rec, cfg.board_lot);
            for (j, strategy) in player
                .strategies
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != active)
            {
                let rec = strategy.action_at(key);
                let order = resolve_order(player.virtual_positions[j].as_ref(), rec, 1);
                if order.is_submitted() {
                    self.virtual_orders.push((i, j, order));
                }
            }
        }

        // Price formation.
        let imbalance = speculative_imbalance(
            self.orders.iter().map(|o| o.signed_quantity()),
            cfg.n_players,
        );
        let volume: u64 = self
            .orders
            .iter()
            .map(|o| o.signed_quantity().unsigned_abs())
            .sum();
        let mut draw = perturbation_draw(cfg.perturbation, &mut self.rng);
        while cfg.perturbation > 0.0 && imbalance + draw == 0.0 {
            draw = perturbation_draw(cfg.perturbation, &mut self.rng);
        }
        let dp = imbalance + draw;
        let h = quantize_move(dp, cfg.cognitive_threshold);
        debug_assert!(self.alphabet.contains(h));
        self.market.price += dp;
        self.market.history.push(h);
        self.market.cognitive_price = update_cognitive_price(self.market.cognitive_price, h);
        self.market.time += 1;
        let cp = self.market.cognitive_price;

        // Settlement.
        for (i, player) in self.players.iter_mut().enumerate() {
            match self.orders[i] {
                Order::Open { action, quantity } => {
                    player.open_real(action, quantity, cp);
                    self.events.push(TradeEvent::Open {
                        player: i,
                        action,
                        quantity,
                    });
                }
                Order::Close { action, quantity } => {
                    let s = player.close_real(cp);
                    self.events.push(TradeEvent::Close {
                        player: i,
                        strategy: s.strategy,
                        action,
                        quantity,
                        open_quantity: s.quantity,
                        gain: s.gain,
                        wealth_change: s.wealth_change,
                    });
                    self.closed.push(i);
                }
                Order::Idle => {}
            }
        }
        for &(i, j, order) in &self.virtual_orders {
            let player = &mut self.players[i];
            match order {
                Order::Open { action, .. } => player.open_virtual(j, action, cp),
                Order::Close { .. } => {
                    let gain = player.close_virtual(j, cp);
                    self.events.push(TradeEvent::VirtualClose {
                        player: i,
                        strategy: j,
                        gain,
                    });
                }
                Order::Idle => {}
            }
        }

        // Review and replacement.
        for &i in &self.closed {
            let player = &mut self.players[i];
            if let Some((strategy, gain)) = player.review_best_strategy(cp) {
                self.events.push(TradeEvent::VirtualClose {
                    player: i,
                    strategy,
                    gain,
                });
            }
            if replace_if_bankrupt(player, &self.config, self.alphabet, &mut self.rng) {
                self.events.push(TradeEvent::Replaced { player: i });
            }
        }

        StepRecord {
            time: self.market.time,
            price: self.market.price,
            price_change: dp,
            speculative_imbalance: imbalance,
            perturbation_draw: draw,
            quantized_move: h,
            traded_volume: volume,
        }
    }

    /// Runs the remaining `horizon - time` steps.
    pub fn run_to_end(&mut self) -> Vec<StepRecord> {
        let remaining = self.config.horizon.saturating_sub(self.market.time);
        (0..remaining).map(|_| self.step()).collect()
    }
}

/// Output of a complete run.
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub config: GameConfig,
    pub records: Vec<StepRecord>,
}

impl Simulation {
    /// `p(0), p(1), ..., p(T)`.
    pub fn prices(&self) -> Vec<f64> {
        std::iter::once(self.config.initial_price)
            .chain(self.records.iter().map(|r| r.price))
            .collect()
    }

    pub fn price_series(&self) -> PriceSeries {
        PriceSeries::new(self.prices())
    }
}

/// Runs a full game for `config.horizon` steps.
pub fn run(config: &GameConfig) -> Result<Simulation> {
    let mut game = Game::new(config.clone())?;
    game.record_events(false);
    let records = game.run_to_end();
    Ok(Simulation {
        config: config.clone(),
        records,
    })
}
