use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Scalar};

/// Economic parameters of one rollup scenario.
///
/// All amounts are in the same currency unit. `y`, `u_t` and `p` are only
/// needed by the Easter-egg, transactor and random-check analyses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams<T = f64> {
    /// Transaction fee paid to the aggregator.
    pub f: T,
    /// Aggregator computation cost.
    pub w: T,
    #[serde(rename = "s_A")]
    pub s_a: T,
    #[serde(rename = "s_V")]
    pub s_v: T,
    /// Validator search cost.
    pub x: T,
    /// Value an undetected dishonest aggregator extracts.
    pub z: T,
    /// Expected Easter-egg reward for a validator that searches.
    pub y: T,
    /// Gross utility of the transactor.
    #[serde(rename = "u_T")]
    pub u_t: Option<T>,
    /// Probability that the contract checks a commitment.
    pub p: Option<T>,
}

impl<T: Scalar> ProtocolParams<T> {
    /// Stakes, search cost and attack value; every optional field is unset
    /// and `f = w = y = 0`.
    pub fn new(s_a: T, s_v: T, x: T, z: T) -> Self {
        ProtocolParams {
            f: T::zero(),
            w: T::zero(),
            s_a,
            s_v,
            x,
            z,
            y: T::zero(),
            u_t: None,
            p: None,
        }
    }

    pub fn with_fee(mut self, f: T, w: T) -> Self {
        self.f = f;
        self.w = w;
        self
    }

    pub fn with_easter_egg(mut self, y: T) -> Self {
        self.y = y;
        self
    }

    pub fn with_transactor_utility(mut self, u_t: T) -> Self {
        self.u_t = Some(u_t);
        self
    }

    pub fn with_check_probability(mut self, p: T) -> Self {
        self.p = Some(p);
        self
    }

    fn fields(&self) -> Vec<(&'static str, &T)> {
        let mut out = alloc::vec![
            ("f", &self.f),
            ("w", &self.w),
            ("s_A", &self.s_a),
            ("s_V", &self.s_v),
            ("x", &self.x),
            ("z", &self.z),
            ("y", &self.y),
        ];
        if let Some(u) = &self.u_t {
            out.push(("u_T", u));
        }
        if let Some(p) = &self.p {
            out.push(("p", p));
        }
        out
    }

    /// All fields nonnegative and finite; `p`, if set, at most 1.
    pub fn validate(&self) -> Result<(), Error> {
        for (field, value) in self.fields() {
            if !value.is_finite_value() {
                return Err(Error::InvalidParam {
                    field,
                    reason: "not finite".into(),
                });
            }
            if *value < T::zero() {
                return Err(Error::InvalidParam {
                    field,
                    reason: format!("{} is negative", value.to_f64_lossy()),
                });
            }
        }
        if let Some(p) = &self.p {
            if *p > T::one() {
                return Err(Error::InvalidProbability {
                    field: "p",
                    value: p.to_f64_lossy(),
                });
            }
        }
        Ok(())
    }

    /// Checks `x < s_V <= s_A < z` and whether `z >= ratio * s_A`. Never
    /// rejects; the report is advisory.
    pub fn ordinal_report(&self, ratio: T) -> OrdinalReport {
        let strictness_ratio = if self.s_a > T::zero() {
            Some((self.z.clone() / self.s_a.clone()).to_f64_lossy())
        } else {
            None
        };
        OrdinalReport {
            search_below_validator_stake: self.x < self.s_v,
            validator_stake_within_aggregator_stake: self.s_v <= self.s_a,
            aggregator_stake_below_attack_value: self.s_a < self.z,
            attack_value_dominates: self.z >= ratio.clone() * self.s_a.clone(),
            strictness_ratio,
            required_ratio: ratio.to_f64_lossy(),
        }
    }
}

/// Default multiple of `s_A` that `z` must reach to count as "much larger".
pub const DEFAULT_DOMINANCE_RATIO: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrdinalReport {
    pub search_below_validator_stake: bool,
    pub validator_stake_within_aggregator_stake: bool,
    pub aggregator_stake_below_attack_value: bool,
    pub attack_value_dominates: bool,
    /// `z / s_A`, absent when `s_A = 0`.
    pub strictness_ratio: Option<f64>,
    pub required_ratio: f64,
}

impl OrdinalReport {
    pub fn holds(&self) -> bool {
        self.search_below_validator_stake
            && self.validator_stake_within_aggregator_stake
            && self.aggregator_stake_below_attack_value
    }

    pub fn warnings(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.search_below_validator_stake {
            out.push("expected x < s_V");
        }
        if !self.validator_stake_within_aggregator_stake {
            out.push("expected s_V <= s_A");
        }
        if !self.aggregator_stake_below_attack_value {
            out.push("expected s_A < z");
        }
        if !self.attack_value_dominates {
            out.push("z is not much larger than s_A");
        }
        out
    }
}

/// Mixing probabilities of the search game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixPoint<T = f64> {
    /// Probability the validator skips the search and acts blindly.
    pub b: T,
    /// Probability a blind validator challenges.
    pub g: T,
    /// Probability the aggregator is honest.
    pub h: T,
}

impl<T: Scalar> MixPoint<T> {
    pub fn new(b: T, g: T, h: T) -> Result<Self, Error> {
        let m = MixPoint { b, g, h };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), Error> {
        for (field, v) in [("b", &self.b), ("g", &self.g), ("h", &self.h)] {
            if !v.is_finite_value() || *v < T::zero() || *v > T::one() {
                return Err(Error::InvalidProbability {
                    field,
                    value: v.to_f64_lossy(),
                });
            }
        }
        Ok(())
    }

    pub fn to_f64(&self) -> MixPoint<f64> {
        MixPoint {
            b: self.b.to_f64_lossy(),
            g: self.g.to_f64_lossy(),
            h: self.h.to_f64_lossy(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_and_nonfinite() {
        let p = ProtocolParams::new(1.0, -1.0, 0.0, 24.0);
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParam { field: "s_V", .. })
        ));
        let p = ProtocolParams::new(1.0, 1.0, f64::NAN, 24.0);
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParam { field: "x", .. })
        ));
        let p = ProtocolParams::new(1.0, 1.0, 0.0, 24.0).with_check_probability(1.5);
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidProbability { field: "p", .. })
        ));
    }

    #[test]
    fn ordinal_report_warns_without_rejecting() {
        let good = ProtocolParams::new(1.0, 1.0, 1.0 / 24.0, 24.0);
        let r = good.ordinal_report(DEFAULT_DOMINANCE_RATIO);
        assert!(r.holds());
        assert!(r.warnings().is_empty());
        assert_eq!(r.strictness_ratio, Some(24.0));

        let weak = ProtocolParams::new(1.0, 2.0, 3.0, 5.0);
        assert!(weak.validate().is_ok());
        let r = weak.ordinal_report(DEFAULT_DOMINANCE_RATIO);
        assert!(!r.holds());
        assert_eq!(r.warnings().len(), 3);
    }

    #[test]
    fn mix_point_range() {
        assert!(MixPoint::new(0.2, 0.8, 1.0).is_ok());
        assert!(matches!(
            MixPoint::new(0.2, 1.1, 0.5),
            Err(Error::InvalidProbability { field: "g", .. })
        ));
    }
}
