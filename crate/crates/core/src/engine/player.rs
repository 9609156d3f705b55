use rand::Rng;

use super::strategy::{Action, Alphabet, Strategy};
use super::{draw_initial_wealth, order_quantity, round_trip_gain};
use crate::config::GameConfig;

/// The opening leg of a round-trip trade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenPosition {
    /// Buy or sell; never hold.
    pub action: Action,
    /// Quantity at opening; the close must use the same quantity.
    pub quantity: u64,
    /// Cognitive price at the opening step.
    pub cognitive_price: f64,
}

/// What a player submits for one strategy in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Open { action: Action, quantity: u64 },
    Close { action: Action, quantity: u64 },
    Idle,
}

impl Order {
    /// `a * q` contribution to the order imbalance.
    pub fn signed_quantity(self) -> i64 {
        match self {
            Order::Open { action, quantity } | Order::Close { action, quantity } => {
                action.value() * quantity as i64
            }
            Order::Idle => 0,
        }
    }

    pub fn is_submitted(self) -> bool {
        !matches!(self, Order::Idle)
    }
}

/// Turns a recommendation into an order given the current position.
///
/// A flat book opens on buy/sell if at least one unit is affordable. An open
/// position is closed only by the opposite action; the same action or hold
/// keeps it open.
pub fn resolve_order(
    position: Option<&OpenPosition>,
    recommendation: Action,
    quantity: u64,
) -> Order {
    match position {
        None => {
            if recommendation == Action::Hold || quantity == 0 {
                Order::Idle
            } else {
                Order::Open {
                    action: recommendation,
                    quantity,
                }
            }
        }
        Some(open)
            if recommendation == open.action.opposite() && recommendation != Action::Hold =>
        {
            Order::Close {
                action: open.action.opposite(),
                quantity: open.quantity,
            }
        }
        Some(_) => Order::Idle,
    }
}

/// Outcome of closing a real round trip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settlement {
    pub strategy: usize,
    pub gain: f64,
    pub quantity: u64,
    pub wealth_change: f64,
}

#[derive(Debug, Clone)]
pub struct Player {
    pub(crate) wealth: f64,
    pub(crate) strategies: Vec<Strategy>,
    pub(crate) gains: Vec<f64>,
    pub(crate) active: usize,
    pub(crate) position: Option<OpenPosition>,
    pub(crate) virtual_positions: Vec<Option<OpenPosition>>,
    pub(crate) pending_switch: Option<usize>,
}

impl Player {
    /// A flat player using strategy 0 with all gains zero.
    ///
    /// # Panics
    /// If `strategies` is empty.
    pub fn new(strategies: Vec<Strategy>, wealth: f64) -> Self {
        assert!(
            !strategies.is_empty(),
            "a player needs at least one strategy"
        );
        let s = strategies.len();
        Self {
            wealth,
            strategies,
            gains: vec![0.0; s],
            active: 0,
            position: None,
            virtual_positions: vec![None; s],
            pending_switch: None,
        }
    }

    /// Fresh random strategies and initial wealth.
    pub fn random<R: Rng + ?Sized>(config: &GameConfig, alphabet: Alphabet, rng: &mut R) -> Self {
        let strategies = (0..config.n_strategies)
            .map(|_| Strategy::random(alphabet, config.memory, rng))
            .collect();
        let wealth = draw_initial_wealth(config.board_lot, rng);
        Self::new(strategies, wealth)
    }

    pub fn wealth(&self) -> f64 {
        self.wealth
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    pub fn accumulated_gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn active_index(&self) -> usize {
        self.active
    }

    pub fn position(&self) -> Option<&OpenPosition> {
        self.position.as_ref()
    }

    pub fn virtual_position(&self, strategy: usize) -> Option<&OpenPosition> {
        self.virtual_positions[strategy].as_ref()
    }

    pub fn pending_switch(&self) -> Option<usize> {
        self.pending_switch
    }

    pub fn order_quantity(&self, board_lot: u64) -> u64 {
        order_quantity(self.wealth, board_lot)
    }

    /// Active strategy's raw recommendation for the history tail.
    pub fn recommend_action(&self, tail: &[i8]) -> Action {
        self.strategies[self.active].recommend(tail)
    }

    /// Real order implied by `recommendation` and the current position.
    pub fn resolve_order(&self, recommendation: Action, board_lot: u64) -> Order {
        resolve_order(
            self.position.as_ref(),
            recommendation,
            self.order_quantity(board_lot),
        )
    }

    /// Applies a pending strategy switch, if any.
    pub(crate) fn apply_pending_switch(&mut self) {
        if let Some(j) = self.pending_switch.take() {
            debug_assert!(self.position.is_none());
            self.active = j;
        }
    }

    pub(crate) fn open_real(&mut self, action: Action, quantity: u64, cognitive_price: f64) {
        debug_assert!(self.position.is_none(), "re-entry while open");
        let open = OpenPosition {
            action,
            quantity,
            cognitive_price,
        };
        self.position = Some(open);
        self.virtual_positions[self.active] = Some(open);
    }

    pub(crate) fn open_virtual(&mut self, strategy: usize, action: Action, cognitive_price: f64) {
        debug_assert_ne!(strategy, self.active);
        self.virtual_positions[strategy] = Some(OpenPosition {
            action,
            quantity: 0,
            cognitive_price,
        });
    }

    /// Books a closed round trip.
    ///
    /// The strategy's accumulated gain grows by `gain`. A real close also adds
    /// `gain * quantity_at_open` to wealth and clears both the real position and
    /// the active strategy's mirrored virtual position; a virtual close clears
    /// only that strategy's virtual position.
    ///
    /// # Panics
    /// If the referenced position is not open.
    pub fn settle_round_trip(
        &mut self,
        strategy: usize,
        gain: f64,
        quantity_at_open: u64,
        is_real: bool,
    ) {
        if is_real {
            assert!(self.position.is_some(), "settling a closed real position");
            assert_eq!(
                strategy, self.active,
                "real trades belong to the active strategy"
            );
            self.wealth += gain * quantity_at_open as f64;
            self.position = None;
        } else {
            assert!(
                self.virtual_positions[strategy].is_some(),
                "settling a closed virtual position"
            );
        }
        self.gains[strategy] += gain;
        self.virtual_positions[strategy] = None;
    }

    /// Closes the real position at `cognitive_price`.
    pub(crate) fn close_real(&mut self, cognitive_price: f64) -> Settlement {
        let open = self.position.expect("closing a flat real position");
        let gain = round_trip_gain(open.action, open.cognitive_price, cognitive_price);
        let before = self.wealth;
        let strategy = self.active;
        self.settle_round_trip(strategy, gain, open.quantity, true);
        Settlement {
            strategy,
            gain,
            quantity: open.quantity,
            wealth_change: self.wealth - before,
        }
    }

    /// Closes strategy `j`'s virtual position, returning its gain.
    pub(crate) fn close_virtual(&mut self, strategy: usize, cognitive_price: f64) -> f64 {
        let open = self.virtual_positions[strategy].expect("closing a flat virtual position");
        let gain = round_trip_gain(open.action, open.cognitive_price, cognitive_price);
        self.settle_round_trip(strategy, gain, open.quantity.max(1), false);
        gain
    }

    /// Index with the highest accumulated gain; ties go to the active strategy,
    /// then the lowest index.
    pub fn best_strategy(&self) -> usize {
        let incumbent = self.gains[self.active];
        let mut best = self.active;
        let mut best_gain = incumbent;
        for (j, &g) in self.gains.iter().enumerate() {
            if g > best_gain {
                best = j;
                best_gain = g;
            }
        }
        best
    }

    /// Re-selects the best strategy after the active strategy's gain changed.
    ///
    /// If a different strategy wins and holds an open virtual trade, that trade
    /// is closed immediately at `cognitive_price`. The switch itself takes effect
    /// at the start of the next step. Returns the gain of any forced virtual
    /// close.
    pub fn review_best_strategy(&mut self, cognitive_price: f64) -> Option<(usize, f64)> {
        let best = self.best_strategy();
        if best == self.active {
            return None;
        }
        let closed = self.virtual_positions[best]
            .is_some()
            .then(|| (best, self.close_virtual(best, cognitive_price)));
        self.pending_switch = Some(best);
        closed
    }
}

/// Swaps in a brand-new random player if `player` can no longer afford one
/// lot. Returns whether a replacement happened.
pub fn replace_if_bankrupt<R: Rng + ?Sized>(
    player: &mut Player,
    config: &GameConfig,
    alphabet: Alphabet,
    rng: &mut R,
) -> bool {
    if player.wealth < config.board_lot as f64 {
        *player = Player::random(config, alphabet, rng);
        true
    } else {
        false
    }
}
