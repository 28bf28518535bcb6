//! Permutation wordle: a guessing game over permutations where each guess
//! reveals exactly which positions are right.
//!
//! The crate provides the game engine, strategy construction and
//! enumeration, generating-function analysis of strategies, closed-form
//! counts, and a registry of exhaustive verification checks.

pub mod analysis;
pub mod closedform;
pub mod engine;
mod error;
pub mod memo;
pub mod perm;
pub mod strategy;
pub mod tables;
pub mod verify;

pub use error::{Error, Result};
pub use perm::Permutation;
pub use strategy::{Strategy, StrategyClass, StrategySpace, StrategySpec};
