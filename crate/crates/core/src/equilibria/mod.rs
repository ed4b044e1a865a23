//! Indifference curves, viability bounds and mechanism thresholds.
//!
//! The search game has three mixing probabilities but only two
//! indifference conditions, so `b` is the free parameter: for each `b` the
//! aggregator's condition fixes `g` and the validator's fixes `h`. The
//! closed forms are generic over [`Scalar`](crate::Scalar) and are
//! cross-checked by bisection on the utilities.

mod bisect;
mod closed_form;
mod point;

pub use bisect::{bisect, Bisection};
pub use closed_form::{
    combined_h, easter_egg_margin, easter_egg_min_reward, indifference_g, indifference_h,
    random_check_threshold, transactor_min_utility, viability_b_lower, BLowerBounds, CurveValue,
    LowerBound,
};
pub use point::{
    numeric_cross_check, solve_mix, solve_point, sweep, viability_flags, CrossCheck,
    EquilibriumPoint, RootAgreement, SolvedMix, SweepRow, ViabilityFlags,
};
