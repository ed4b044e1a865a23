use serde::{Deserialize, Serialize};

use crate::rollup::{
    blind_validator_utility, informed_validator_utility, MixPoint, ProtocolParams,
};
use crate::{Error, Scalar};

/// A solved probability together with whether it is strictly inside (0, 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveValue<T> {
    pub value: T,
    pub viable: bool,
}

impl<T: Scalar> CurveValue<T> {
    fn new(value: T) -> Self {
        let viable = value > T::zero() && value < T::one();
        CurveValue { value, viable }
    }
}

/// Blind challenge rate `g = 1 - s_A / (b s_A + b z)` that leaves the
/// aggregator indifferent between honesty and cheating.
pub fn indifference_g<T: Scalar>(
    params: &ProtocolParams<T>,
    b: &T,
) -> Result<CurveValue<T>, Error> {
    let denom = b.clone() * (params.s_a.clone() + params.z.clone());
    if denom.is_zero() {
        return Err(Error::ZeroDenominator("indifference_g: b (s_A + z)"));
    }
    Ok(CurveValue::new(T::one() - params.s_a.clone() / denom))
}

/// Honesty rate that leaves the validator at zero expected utility for the
/// given `(b, g)`.
pub fn indifference_h<T: Scalar>(
    params: &ProtocolParams<T>,
    b: &T,
    g: &T,
) -> Result<CurveValue<T>, Error> {
    let half_s_a = T::half() * params.s_a.clone();
    let bg = b.clone() * g.clone();
    let searching = T::one() - b.clone();
    let num = bg.clone() * half_s_a.clone() + searching.clone() * half_s_a.clone()
        - searching.clone() * params.x.clone();
    let denom = bg.clone() * params.s_v.clone() + bg * half_s_a.clone() + searching * half_s_a;
    if denom.is_zero() {
        return Err(Error::ZeroDenominator("indifference_h"));
    }
    Ok(CurveValue::new(num / denom))
}

/// `indifference_h` with `g` substituted from [`indifference_g`], in the
/// simplified single-fraction form.
pub fn combined_h<T: Scalar>(params: &ProtocolParams<T>, b: &T) -> Result<CurveValue<T>, Error> {
    let ProtocolParams { s_a, s_v, x, z, .. } = params.clone();
    let half_s_a_z = T::half() * s_a.clone() * z.clone();
    let num =
        half_s_a_z.clone() - (T::one() - b.clone()) * (z.clone() * x.clone() + s_a.clone() * x);
    let denom = half_s_a_z - s_a.clone() * s_v.clone() + (z + s_a) * s_v * b.clone();
    if denom.is_zero() {
        return Err(Error::ZeroDenominator("combined_h"));
    }
    Ok(CurveValue::new(num / denom))
}

/// A lower bound on `b`. `value` is `None` when the bound is undefined;
/// a negative bound is `always_satisfied`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBound<T> {
    pub value: Option<T>,
    pub always_satisfied: bool,
}

impl<T: Scalar> LowerBound<T> {
    fn of(value: Option<T>) -> Self {
        let always_satisfied = matches!(&value, Some(v) if *v < T::zero());
        LowerBound {
            value,
            always_satisfied,
        }
    }

    /// Whether `b` clears the bound strictly. Undefined bounds never pass.
    pub fn admits(&self, b: &T) -> bool {
        match &self.value {
            Some(v) => b > v,
            None => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BLowerBounds<T> {
    /// `s_A / (s_A + z)`: below it the blind challenge rate is not positive.
    pub from_g: LowerBound<T>,
    /// `(s_A s_V - s_A x - z x) / ((s_A + z)(s_V - x))`: below it the
    /// honesty rate is not below one.
    pub from_h_window: LowerBound<T>,
}

pub fn viability_b_lower<T: Scalar>(params: &ProtocolParams<T>) -> BLowerBounds<T> {
    let ProtocolParams { s_a, s_v, x, z, .. } = params.clone();
    let stake_plus_attack = s_a.clone() + z.clone();
    let from_g = if stake_plus_attack.is_zero() {
        None
    } else {
        Some(s_a.clone() / stake_plus_attack.clone())
    };
    let num = s_a.clone() * s_v.clone() - s_a * x.clone() - z.clone() * x.clone();
    // s_A s_V - s_A x - z x + z s_V factors as (s_A + z)(s_V - x).
    let denom = stake_plus_attack * (s_v - x);
    let from_h = if denom.is_zero() {
        None
    } else {
        Some(num / denom)
    };
    BLowerBounds {
        from_g: LowerBound::of(from_g),
        from_h_window: LowerBound::of(from_h),
    }
}

/// Check probability above which cheating has negative expected value:
/// `z / (z + s_A)`.
pub fn random_check_threshold<T: Scalar>(params: &ProtocolParams<T>) -> Result<T, Error> {
    let denom = params.z.clone() + params.s_a.clone();
    if denom.is_zero() {
        return Err(Error::ZeroDenominator("random_check_threshold: z + s_A"));
    }
    Ok(params.z.clone() / denom)
}

/// Smallest expected Easter-egg reward that makes searching weakly better
/// than acting blind for every `(g, h)`: the search cost itself.
pub fn easter_egg_min_reward<T: Scalar>(params: &ProtocolParams<T>) -> T {
    params.x.clone()
}

/// Always-search utility plus the reward `y`, minus always-blind utility.
pub fn easter_egg_margin<T: Scalar>(params: &ProtocolParams<T>, g: &T, h: &T) -> T {
    informed_validator_utility(params, h) + params.y.clone() - blind_validator_utility(params, g, h)
}

/// Transactor utility above which participation beats the outside option:
/// `f (1 + b (1 - g)(1 - h) / h)`.
pub fn transactor_min_utility<T: Scalar>(
    params: &ProtocolParams<T>,
    m: &MixPoint<T>,
) -> Result<T, Error> {
    if m.h.is_zero() {
        return Err(Error::Unbounded("transactor never participates when h = 0"));
    }
    let f = params.f.clone();
    let loss_odds = m.b.clone() * (T::one() - m.g.clone()) * (T::one() - m.h.clone()) / m.h.clone();
    Ok(f * (T::one() + loss_odds))
}
