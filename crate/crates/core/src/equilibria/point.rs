use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::bisect::{bisect, Bisection};
use super::closed_form::{combined_h, indifference_g, indifference_h, viability_b_lower};
use crate::game::regret_audit;
use crate::rollup::{
    aggregator_dishonest_utility, aggregator_utility, build_game2, mix_profile, validator_utility,
    MixPoint, ProtocolParams, DEFAULT_DOMINANCE_RATIO,
};
use crate::{Error, NonViable, Scalar, TOLERANCE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViabilityFlags {
    pub b_interior: bool,
    pub g_interior: bool,
    pub h_interior: bool,
    /// `b > s_A / (s_A + z)`.
    pub above_g_bound: bool,
    /// `b` clears the lower bound that keeps `h` below one.
    pub above_h_window_bound: bool,
    /// `x < s_V <= s_A < z`.
    pub ordinal_constraint: bool,
    /// `z >= 10 s_A`.
    pub attack_value_dominates: bool,
}

pub fn viability_flags<T: Scalar>(params: &ProtocolParams<T>, m: &MixPoint<T>) -> ViabilityFlags {
    let interior = |v: &T| *v > T::zero() && *v < T::one();
    let bounds = viability_b_lower(params);
    let ordinal =
        params.ordinal_report(T::from_f64_exact(DEFAULT_DOMINANCE_RATIO).unwrap_or_else(T::one));
    ViabilityFlags {
        b_interior: interior(&m.b),
        g_interior: interior(&m.g),
        h_interior: interior(&m.h),
        above_g_bound: bounds.from_g.admits(&m.b),
        above_h_window_bound: bounds.from_h_window.admits(&m.b),
        ordinal_constraint: ordinal.holds(),
        attack_value_dominates: ordinal.attack_value_dominates,
    }
}

/// A point on both indifference curves, in any scalar type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolvedMix<T> {
    pub mix: MixPoint<T>,
    /// |aggregator utility| at the point.
    pub residual_a: T,
    /// |validator utility| at the point.
    pub residual_v: T,
}

/// Solves `g` and `h` for a given `b` from the closed forms. Any `b` whose
/// `g` or `h` falls outside (0, 1) is rejected with the violated bound.
pub fn solve_mix<T: Scalar>(params: &ProtocolParams<T>, b: &T) -> Result<SolvedMix<T>, Error> {
    params.validate()?;
    let b_f = b.to_f64_lossy();
    if !(*b > T::zero() && *b < T::one()) {
        return Err(NonViable::BOutsideUnit { b: b_f }.into());
    }
    let bounds = viability_b_lower(params);
    let degenerate = |e: Error| match e {
        Error::ZeroDenominator(what) => Error::NonViable(NonViable::Degenerate(what)),
        other => other,
    };
    let g = indifference_g(params, b).map_err(degenerate)?;
    if !g.viable {
        return Err(NonViable::BelowGBound {
            b: b_f,
            bound: bounds.from_g.value.map_or(f64::NAN, |v| v.to_f64_lossy()),
            g: g.value.to_f64_lossy(),
        }
        .into());
    }
    let h = combined_h(params, b).map_err(degenerate)?;
    if !h.viable {
        return Err(NonViable::HOutsideUnit {
            b: b_f,
            h: h.value.to_f64_lossy(),
            bound: bounds
                .from_h_window
                .value
                .map_or(f64::NAN, |v| v.to_f64_lossy()),
        }
        .into());
    }
    let mix = MixPoint {
        b: b.clone(),
        g: g.value,
        h: h.value,
    };
    Ok(SolvedMix {
        residual_a: aggregator_utility(params, &mix).abs(),
        residual_v: validator_utility(params, &mix).abs(),
        mix,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumPoint {
    pub mix: MixPoint,
    pub residual_a: f64,
    pub residual_v: f64,
    /// Expected payoffs `(A, V)` at the mix.
    pub values: Vec<f64>,
    pub best_response_values: Vec<f64>,
    /// Best-response gain over the mix, per player `(A, V)`.
    pub regrets: Vec<f64>,
    pub flags: ViabilityFlags,
}

impl EquilibriumPoint {
    /// Both players indifferent within [`TOLERANCE`].
    pub fn is_indifferent(&self) -> bool {
        self.residual_a <= TOLERANCE && self.residual_v <= TOLERANCE
    }
}

/// Closed-form point for `b` with residuals and a regret audit of the
/// search game attached.
pub fn solve_point(params: &ProtocolParams, b: f64) -> Result<EquilibriumPoint, Error> {
    let solved = solve_mix(params, &b)?;
    let tree = build_game2(params)?;
    let audit = regret_audit(&tree, &mix_profile(&tree, &solved.mix)?)?;
    Ok(EquilibriumPoint {
        flags: viability_flags(params, &solved.mix),
        mix: solved.mix,
        residual_a: solved.residual_a,
        residual_v: solved.residual_v,
        values: audit.values,
        best_response_values: audit.best_responses.iter().map(|br| br.value).collect(),
        regrets: audit.regrets,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootAgreement {
    /// Closed form and bisection find the same interior root.
    Agree,
    /// Neither route finds a root inside the bracket.
    NoInteriorRoot,
    Disagree,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub b: f64,
    pub g_closed: Option<f64>,
    pub g_numeric: Option<f64>,
    pub g: RootAgreement,
    /// Single-fraction form.
    pub h_closed: Option<f64>,
    /// `indifference_h` evaluated at the closed-form `g`.
    pub h_composed: Option<f64>,
    pub h_numeric: Option<f64>,
    pub h: RootAgreement,
}

impl CrossCheck {
    /// No disagreement between the routes.
    pub fn consistent(&self) -> bool {
        self.g != RootAgreement::Disagree && self.h != RootAgreement::Disagree
    }

    /// Both routes agree on an interior `(g, h)`.
    pub fn interior(&self) -> bool {
        self.g == RootAgreement::Agree && self.h == RootAgreement::Agree
    }
}

fn compare(closed: &[Option<f64>], numeric: Option<f64>, bracket: &Bisection) -> RootAgreement {
    let inside = |v: f64| v >= bracket.lo && v <= bracket.hi;
    let reference = closed[0];
    let closed_agree = closed.windows(2).all(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => (a - b).abs() <= TOLERANCE,
        (None, None) => true,
        _ => false,
    });
    if !closed_agree {
        return RootAgreement::Disagree;
    }
    match (reference, numeric) {
        (Some(c), Some(n)) if inside(c) && (c - n).abs() <= TOLERANCE => RootAgreement::Agree,
        (Some(c), None) if !inside(c) => RootAgreement::NoInteriorRoot,
        (None, None) => RootAgreement::NoInteriorRoot,
        _ => RootAgreement::Disagree,
    }
}

/// Re-derives `g` and `h` for `b` by bisection on the utilities themselves
/// and compares with the closed forms.
///
/// Cheating utility is strictly decreasing in `g` for `b > 0`, and validator
/// utility is affine in `h`, so each bracket holds at most one root.
pub fn numeric_cross_check(params: &ProtocolParams, b: f64) -> Result<CrossCheck, Error> {
    params.validate()?;
    let bracket = Bisection::default();
    let g_closed = indifference_g(params, &b).ok().map(|c| c.value);
    let g_numeric = bisect(
        "aggregator cheating utility in g",
        |g| aggregator_dishonest_utility(params, &b, &g),
        bracket,
    )
    .ok();
    let g = compare(&[g_closed], g_numeric, &bracket);

    let g_for_h = g_numeric.or(g_closed);
    let h_closed = combined_h(params, &b).ok().map(|c| c.value);
    let h_composed = g_closed.and_then(|g| indifference_h(params, &b, &g).ok().map(|c| c.value));
    let h_numeric = g_for_h.and_then(|g| {
        bisect(
            "validator utility in h",
            |h| validator_utility(params, &MixPoint { b, g, h }),
            bracket,
        )
        .ok()
    });
    let h = compare(&[h_closed, h_composed], h_numeric, &bracket);
    Ok(CrossCheck {
        b,
        g_closed,
        g_numeric,
        g,
        h_closed,
        h_composed,
        h_numeric,
        h,
    })
}

/// One row of a `b` sweep. Undefined quantities are NaN.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub b: f64,
    pub g: f64,
    pub h: f64,
    pub residual_a: f64,
    pub residual_v: f64,
    pub regret_a: f64,
    pub regret_v: f64,
    pub viable: bool,
}

pub fn sweep(params: &ProtocolParams, grid: &[f64]) -> Result<Vec<SweepRow>, Error> {
    params.validate()?;
    let tree = build_game2(params)?;
    grid.iter()
        .map(|&b| {
            let g = indifference_g(params, &b).map_or(f64::NAN, |c| c.value);
            let h = combined_h(params, &b).map_or(f64::NAN, |c| c.value);
            let mut row = SweepRow {
                b,
                g,
                h,
                residual_a: f64::NAN,
                residual_v: f64::NAN,
                regret_a: f64::NAN,
                regret_v: f64::NAN,
                viable: solve_mix(params, &b).is_ok(),
            };
            let mix = MixPoint { b, g, h };
            if g.is_finite() && h.is_finite() {
                row.residual_a = aggregator_utility(params, &mix).abs();
                row.residual_v = validator_utility(params, &mix).abs();
            }
            if mix.validate().is_ok() {
                let audit = regret_audit(&tree, &mix_profile(&tree, &mix)?)?;
                row.regret_a = audit.regrets[0];
                row.regret_v = audit.regrets[1];
            }
            Ok(row)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn params() -> ProtocolParams {
        ProtocolParams::new(1.0, 1.0, 1.0 / 24.0, 24.0)
    }

    #[test]
    fn reference_point_float_and_exact() {
        let point = solve_point(&params(), 0.2).unwrap();
        assert!((point.mix.g - 0.8).abs() <= 1e-12);
        assert!((point.mix.h - 67.0 / 96.0).abs() <= 1e-12);
        assert!(point.residual_a <= 1e-12 && point.residual_v <= 1e-12);
        assert!(point.regrets[0].abs() <= 1e-12);
        assert!((point.regrets[1] - 21.0 / 192.0).abs() <= 1e-12);
        assert!(point.flags.g_interior && point.flags.h_interior && point.flags.above_g_bound);

        let exact = ProtocolParams::new(q(1, 1), q(1, 1), q(1, 24), q(24, 1));
        let solved = solve_mix(&exact, &q(1, 5)).unwrap();
        assert_eq!(solved.mix.g, q(4, 5));
        assert_eq!(solved.mix.h, q(67, 96));
        assert_eq!(solved.residual_a, q(0, 1));
        assert_eq!(solved.residual_v, q(0, 1));
    }

    #[test]
    fn below_g_bound_is_structured() {
        match solve_point(&params(), 0.03) {
            Err(Error::NonViable(NonViable::BelowGBound { bound, g, .. })) => {
                assert!((bound - 0.04).abs() < 1e-15);
                assert!(g < 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            solve_point(&params(), 0.0),
            Err(Error::NonViable(NonViable::BOutsideUnit { .. }))
        ));
    }

    #[test]
    fn just_above_g_bound() {
        let point = solve_point(&params(), 1.0 / 25.0 + 1e-6).unwrap();
        assert!(point.mix.g > 0.0 && point.mix.g < 1e-4);
        assert!(point.residual_a <= 1e-9 && point.residual_v <= 1e-9);
    }

    #[test]
    fn cross_check_reference_point() {
        let check = numeric_cross_check(&params(), 0.2).unwrap();
        assert!(check.interior(), "{check:?}");
        assert!((check.g_numeric.unwrap() - 0.8).abs() <= 1e-9);
        assert!((check.h_numeric.unwrap() - 67.0 / 96.0).abs() <= 1e-9);
    }

    #[test]
    fn cross_check_reports_h_leaving_unit_interval() {
        // Search cost above half the stake: at small b the h-numerator goes negative.
        let p = ProtocolParams::new(1.0, 1.0, 0.9, 24.0);
        let check = numeric_cross_check(&p, 0.05).unwrap();
        assert_eq!(check.g, RootAgreement::Agree);
        assert_eq!(check.h, RootAgreement::NoInteriorRoot);
        assert!(check.h_closed.unwrap() < 0.0);
        assert!(check.consistent());
        assert!(matches!(
            solve_point(&p, 0.05),
            Err(Error::NonViable(NonViable::HOutsideUnit { .. }))
        ));
    }

    #[test]
    fn sweep_shape() {
        let grid: Vec<f64> = (1..=20).map(|i| i as f64 * 0.05).collect();
        let rows = sweep(&params(), &grid).unwrap();
        assert_eq!(rows.len(), 20);
        assert!(!rows[19].viable); // b = 1
        assert!(rows[3].viable);
        assert!((rows[3].h - 67.0 / 96.0).abs() < 1e-12);
        assert!(rows[3].residual_a < 1e-12);
        // b = 0.05 > 1/25 is viable, g small.
        assert!(rows[0].viable);
    }
}
