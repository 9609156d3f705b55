//! Extended speculation game.
//!
//! An agent-based market in which players make round-trip speculative trades
//! scored against a coarse-grained cognitive price, with an optional uniform
//! perturbation of each price change, plus the scaling and stylized-fact
//! statistics used to study the resulting price series.

pub mod analysis;
pub mod config;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod io;

pub use config::GameConfig;
pub use error::{Error, Result};
