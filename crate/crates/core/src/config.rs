//! Model parameters.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// All parameters of a single game.
///
/// The defaults are the standard parameter set: `N=1000, M=5, S=2, B=9, C=3`,
/// `p(0)=100`, no perturbation, 50,000 steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameConfig {
    pub n_players: usize,
    pub memory: usize,
    pub n_strategies: usize,
    pub board_lot: u64,
    pub cognitive_threshold: f64,
    pub perturbation: f64,
    pub horizon: usize,
    pub initial_price: f64,
    pub rng_seed: u64,
}

impl Default for GameConfig {
    fn default() -> Self {
        Self {
            n_players: 1000,
            memory: 5,
            n_strategies: 2,
            board_lot: 9,
            cognitive_threshold: 3.0,
            perturbation: 0.0,
            horizon: 50_000,
            initial_price: 100.0,
            rng_seed: 0,
        }
    }
}

/// Largest strategy table we are willing to allocate per strategy (5^10).
const MAX_TABLE_ENTRIES: usize = 9_765_625;

impl GameConfig {
    pub fn with_perturbation(mut self, pb: f64) -> Self {
        self.perturbation = pb;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    /// Checks every invariant and names the first one violated.
    ///
    /// `horizon = 0` is accepted and yields an empty run.
    pub fn validate(&self) -> Result<()> {
        if self.n_players == 0 {
            return Err(Error::config("n_players", "must be >= 1"));
        }
        if self.memory == 0 {
            return Err(Error::config("memory", "must be >= 1"));
        }
        if self.n_strategies == 0 {
            return Err(Error::config("n_strategies", "must be >= 1"));
        }
        if self.board_lot == 0 {
            return Err(Error::config("board_lot", "must be >= 1"));
        }
        if !(self.cognitive_threshold.is_finite() && self.cognitive_threshold > 0.0) {
            return Err(Error::config(
                "cognitive_threshold",
                format!(
                    "must be a positive finite number, got {}",
                    self.cognitive_threshold
                ),
            ));
        }
        if !(self.perturbation.is_finite() && self.perturbation >= 0.0) {
            return Err(Error::config(
                "perturbation",
                format!("must be >= 0, got {}", self.perturbation),
            ));
        }
        if !self.initial_price.is_finite() {
            return Err(Error::config("initial_price", "must be finite"));
        }
        let entries = 5usize
            .checked_pow(self.memory as u32)
            .filter(|&n| n <= MAX_TABLE_ENTRIES);
        if entries.is_none() {
            return Err(Error::config(
                "memory",
                format!("strategy table for memory {} is too large", self.memory),
            ));
        }
        Ok(())
    }

    /// Soft warnings that do not block a run.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.board_lot > 100 {
            out.push(format!(
                "board_lot {} exceeds the initial wealth spread of 100; most players start with q = 1",
                self.board_lot
            ));
        }
        out
    }

    /// Stable short hash of the canonical JSON form.
    pub fn hash(&self) -> String {
        config_hash(self)
    }
}

/// SHA-256 (first 16 hex chars) of the canonical JSON serialization of
/// `value` (object keys sorted).
pub fn config_hash<T: Serialize>(value: &T) -> String {
    let canonical = serde_json::to_value(value).expect("config serializes");
    let json = serde_json::to_vec(&canonical).expect("json value serializes");
    let digest = Sha256::digest(&json);
    hex::encode(&digest[..8])
}
