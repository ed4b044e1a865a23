//! Game-theoretic model of the optimistic-rollup aggregator/validator
//! interaction.
//!
//! The crate is split into four layers:
//!
//! - [`game`]: a small finite extensive-form engine (decision, chance and leaf
//!   nodes, information sets, behavior strategies) with exact evaluation,
//!   backward induction, pure best responses and regret audits.
//! - [`rollup`]: protocol parameters, the concrete rollup games built from
//!   them, and the closed-form aggregator, validator and transactor
//!   utilities.
//! - [`equilibria`]: indifference curves, viability bounds and mechanism
//!   thresholds, each with a numeric cross-check.
//! - [`montecarlo`]: seeded, shard-deterministic simulation of protocol
//!   rounds.
//!
//! Closed-form code is generic over [`Scalar`], so the same formulas run in
//! `f64` and in exact [`num_rational::BigRational`] arithmetic.
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod equilibria;
mod error;
pub mod game;
pub mod montecarlo;
pub mod rollup;
mod scalar;

pub use error::{Error, NonViable};
pub use scalar::Scalar;

/// Absolute tolerance used for floating-point assertions across the crate.
pub const TOLERANCE: f64 = 1e-9;
