//! Closed-form expected utilities of the search game.
//!
//! Honest aggregation is normalized to zero (`f - w = 0`) and a caught
//! aggregator loses exactly `s_A`.

use super::params::{MixPoint, ProtocolParams};
use crate::{Error, Scalar};

/// Aggregator payoff from cheating, before weighting by `1 - h`.
pub fn aggregator_dishonest_utility<T: Scalar>(params: &ProtocolParams<T>, b: &T, g: &T) -> T {
    let s_a = params.s_a.clone();
    let blind = g.clone() * -s_a.clone() + (T::one() - g.clone()) * params.z.clone();
    b.clone() * blind + (T::one() - b.clone()) * -s_a
}

pub fn aggregator_utility<T: Scalar>(params: &ProtocolParams<T>, m: &MixPoint<T>) -> T {
    // The honest branch contributes h * 0.
    (T::one() - m.h.clone()) * aggregator_dishonest_utility(params, &m.b, &m.g)
}

/// Validator payoff when it skips the search and challenges with rate `g`.
pub fn blind_validator_utility<T: Scalar>(params: &ProtocolParams<T>, g: &T, h: &T) -> T {
    let h = h.clone();
    g.clone() * (h.clone() * -params.s_v.clone() + (T::one() - h) * T::half() * params.s_a.clone())
}

/// Validator payoff when it pays for the search and challenges exactly
/// when the aggregator cheats.
pub fn informed_validator_utility<T: Scalar>(params: &ProtocolParams<T>, h: &T) -> T {
    (T::one() - h.clone()) * T::half() * params.s_a.clone() - params.x.clone()
}

pub fn validator_utility<T: Scalar>(params: &ProtocolParams<T>, m: &MixPoint<T>) -> T {
    m.b.clone() * blind_validator_utility(params, &m.g, &m.h)
        + (T::one() - m.b.clone()) * informed_validator_utility(params, &m.h)
}

/// Transactor payoff: `u_T - f` under honest aggregation, `-f` when a
/// cheat goes unchallenged, zero when a cheat is caught.
pub fn transactor_utility<T: Scalar>(
    params: &ProtocolParams<T>,
    m: &MixPoint<T>,
) -> Result<T, Error> {
    let u_t = params.u_t.clone().ok_or(Error::MissingParam("u_T"))?;
    let f = params.f.clone();
    Ok(m.h.clone() * (u_t - f.clone())
        - m.b.clone() * (T::one() - m.h.clone()) * (T::one() - m.g.clone()) * f)
}
