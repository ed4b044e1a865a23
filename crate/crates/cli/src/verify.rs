//! Self-check suite run by `rollup-game verify`. Deterministic grids stand
//! in for random draws so that a run is reproducible from its flags alone.

use rollup_game::equilibria::{
    easter_egg_margin, indifference_g, numeric_cross_check, random_check_threshold, solve_mix,
    viability_b_lower,
};
use rollup_game::game::{backward_induction, expected_utilities, regret_audit, GameTree};
use rollup_game::rollup::{
    aggregator_utility, build_game1, build_game2, game3_dishonest_payoff, labels, mix_profile,
    validator_utility, MixPoint, ProtocolParams, AGGREGATOR_ID, VALIDATOR_ID,
};
use rollup_game::{Error, TOLERANCE};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// `b` for the regret audit; the reference value 0.2 or the middle of
    /// the viable range when absent.
    pub b: Option<f64>,
    /// Perturb one validator payoff in the search tree, which the
    /// consistency checks must catch.
    pub inject_fault: bool,
}

type CheckOutcome = Result<(bool, String), Error>;

pub fn run(params: &ProtocolParams, opts: &VerifyOptions) -> VerifyReport {
    let tree = build_game2(params).map(|t| {
        if opts.inject_fault {
            t.map_payoffs(|i, p| {
                if i == 6 {
                    p[1] += 0.01;
                }
            })
        } else {
            t
        }
    });
    let checks: Vec<(&str, CheckOutcome)> = vec![
        ("one-shot backward induction", one_shot_profile()),
        (
            "closed form vs tree",
            tree.clone().and_then(|t| tree_consistency(params, &t)),
        ),
        ("combined h vs bisection", cross_checks(params)),
        ("g viability bound", g_flip(params)),
        ("random-check threshold", random_check_flip(params)),
        ("easter-egg dominance", easter_egg(params)),
        ("regret audit", tree.and_then(|t| audit(params, &t, opts.b))),
    ];
    let checks: Vec<CheckResult> = checks
        .into_iter()
        .map(|(name, outcome)| {
            let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
            CheckResult {
                name: name.to_string(),
                pass,
                detail,
            }
        })
        .collect();
    let failures: Vec<String> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.clone())
        .collect();
    VerifyReport {
        passed: failures.is_empty(),
        checks,
        failures,
    }
}

fn one_shot_profile() -> CheckOutcome {
    let mut count = 0;
    for s_a in [0.5, 1.0, 5.0] {
        for s_v in [0.2, 1.0, 3.0] {
            for x in [0.0, 0.1] {
                for z in [1.0, 24.0, 100.0] {
                    for (f, w) in [(1.0, 0.0), (2.0, 1.5)] {
                        let params = ProtocolParams::new(s_a, s_v, x, z).with_fee(f, w);
                        let tree = build_game1(&params)?;
                        let bi = backward_induction(&tree)?;
                        let label = |player, set| {
                            let id = tree.info_set_by_label(set)?;
                            bi.profile.strategy(player)?.pure_label(&tree, id)
                        };
                        let got = (
                            label(AGGREGATOR_ID, labels::HONESTY),
                            label(VALIDATOR_ID, labels::AFTER_HONEST),
                            label(VALIDATOR_ID, labels::AFTER_DISHONEST),
                        );
                        if got
                            != (
                                Some(labels::HONEST),
                                Some(labels::NO),
                                Some(labels::CHALLENGE),
                            )
                        {
                            return Ok((false, format!("{params:?}: {got:?}")));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok((true, format!("{count} parameter sets")))
}

fn tree_consistency(params: &ProtocolParams, tree: &GameTree) -> CheckOutcome {
    let steps = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut worst = 0.0f64;
    for b in steps {
        for g in steps {
            for h in steps {
                let m = MixPoint { b, g, h };
                let u = expected_utilities(tree, &mix_profile(tree, &m)?)?;
                let d = (u[0] - aggregator_utility(params, &m))
                    .abs()
                    .max((u[1] - validator_utility(params, &m)).abs());
                worst = worst.max(d);
            }
        }
    }
    Ok((
        worst <= TOLERANCE,
        format!("125 mixes, worst difference {worst:.1e}"),
    ))
}

fn viable_range(params: &ProtocolParams) -> f64 {
    viability_b_lower(params)
        .from_g
        .value
        .unwrap_or(0.0)
        .clamp(0.0, 1.0)
}

fn cross_checks(params: &ProtocolParams) -> CheckOutcome {
    let lo = viable_range(params);
    let n = 200;
    let mut agreed = 0;
    for i in 1..=n {
        let b = lo + (1.0 - lo) * i as f64 / (n + 1) as f64;
        let check = numeric_cross_check(params, b)?;
        if !check.consistent() {
            return Ok((false, format!("b={b}: {check:?}")));
        }
        agreed += usize::from(check.interior());
    }
    Ok((
        true,
        format!("{n} points, {agreed} with interior roots on both routes"),
    ))
}

fn g_flip(params: &ProtocolParams) -> CheckOutcome {
    let Some(bound) = viability_b_lower(params).from_g.value else {
        return Ok((true, "no lower bound on b for these parameters".into()));
    };
    let step = 1e-4;
    let mut first = None;
    for k in 1..10_000 {
        let b = k as f64 * step;
        let viable = indifference_g(params, &b)
            .map(|g| g.viable)
            .unwrap_or(false);
        if (b - bound).abs() > 1e-12 && viable != (b > bound) {
            return Ok((
                false,
                format!("b={b}: viable={viable} but bound is {bound}"),
            ));
        }
        if viable && first.is_none() {
            first = Some(b);
        }
    }
    match first {
        Some(b) => Ok((
            b - bound <= step + 1e-12,
            format!("first viable b on 1e-4 grid: {b:.4} (bound {bound:.6})"),
        )),
        None => Ok((bound >= 1.0 - step, format!("no viable b; bound {bound}"))),
    }
}

fn random_check_flip(params: &ProtocolParams) -> CheckOutcome {
    let threshold = random_check_threshold(params)?;
    for i in 0..100 {
        let p = (i as f64 + 0.5) / 100.0;
        let payoff = game3_dishonest_payoff(&params.clone().with_check_probability(p))?;
        let ok = if p < threshold {
            payoff > 0.0
        } else {
            payoff < 0.0
        };
        if !ok && (p - threshold).abs() > 1e-12 {
            return Ok((
                false,
                format!("p={p}: dishonest payoff {payoff}, threshold {threshold}"),
            ));
        }
    }
    Ok((
        true,
        format!("sign flips at p*={threshold:.6} on a 100-point grid"),
    ))
}

fn easter_egg(params: &ProtocolParams) -> CheckOutcome {
    let params = params.clone().with_easter_egg(params.x);
    let mut worst = f64::INFINITY;
    for i in 0..=20 {
        for j in 0..=20 {
            let (g, h) = (i as f64 / 20.0, j as f64 / 20.0);
            worst = worst.min(easter_egg_margin(&params, &g, &h));
        }
    }
    let corner = easter_egg_margin(&params, &1.0, &0.0);
    Ok((
        worst >= -1e-12 && corner.abs() <= 1e-12,
        format!("441 (g, h) points with y=x, min margin {worst:.3e}; margin at g=1, h=0 is {corner:.1e}"),
    ))
}

fn audit(params: &ProtocolParams, tree: &GameTree, b: Option<f64>) -> CheckOutcome {
    let b = match b {
        Some(b) => b,
        None if solve_mix(params, &0.2).is_ok() => 0.2,
        None => 0.5 * (viable_range(params) + 1.0),
    };
    let solved = solve_mix(params, &b)?;
    let audit = regret_audit(tree, &mix_profile(tree, &solved.mix)?)?;
    let (regret_a, value_v) = (audit.regrets[0], audit.values[1]);
    Ok((
        regret_a <= TOLERANCE && value_v.abs() <= TOLERANCE,
        format!(
            "b={b}: A regret {regret_a:.1e}, V value {value_v:.1e}, V best response {:.9} (regret {:.9})",
            audit.best_responses[1].value, audit.regrets[1]
        ),
    ))
}
