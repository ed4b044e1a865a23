use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed game tree: {0}")]
    MalformedTree(String),
    #[error("strategy profile does not cover information set `{0}`")]
    MissingInfoSet(String),
    #[error("invalid distribution at information set `{label}`: {reason}")]
    InvalidDistribution { label: String, reason: String },
    #[error("information set `{0}` has more than one node; backward induction needs perfect information")]
    NotPerfectInformation(String),
    #[error("unknown player index {0}")]
    UnknownPlayer(usize),
    #[error("parameter `{field}` is invalid: {reason}")]
    InvalidParam { field: &'static str, reason: String },
    #[error("parameter `{0}` is required here but absent")]
    MissingParam(&'static str),
    #[error("probability `{field}` = {value} is outside [0, 1]")]
    InvalidProbability { field: &'static str, value: f64 },
    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),
    #[error("bound is unbounded: {0}")]
    Unbounded(&'static str),
    #[error("simulation needs at least {min} rounds, got {got}")]
    TooFewRounds { min: u64, got: u64 },
    #[error("no sign change of {what} on [{lo}, {hi}]")]
    NoSignChange {
        what: &'static str,
        lo: f64,
        hi: f64,
    },
    #[error(transparent)]
    NonViable(#[from] NonViable),
}

/// Why a candidate point on the indifference curve is not an interior
/// mixed equilibrium.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NonViable {
    #[error("b = {b} must lie strictly inside (0, 1)")]
    BOutsideUnit { b: f64 },
    #[error("b = {b} is at or below the bound s_A/(s_A+z) = {bound}; blind challenge rate g = {g} is not in (0, 1)")]
    BelowGBound { b: f64, bound: f64, g: f64 },
    #[error("honesty rate h = {h} is not in (0, 1) at b = {b} (lower bound from the h window is {bound})")]
    HOutsideUnit { b: f64, h: f64, bound: f64 },
    #[error("zero denominator in {0}")]
    Degenerate(&'static str),
}
