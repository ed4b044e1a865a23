//! The concrete rollup games as [`GameTree`]s.

use alloc::vec;

use super::params::{MixPoint, ProtocolParams};
use crate::game::{
    expected_utilities, BehaviorStrategy, GameTree, InfoSetId, PlayerId, StrategyProfile,
    TreeBuilder,
};
use crate::Error;

/// Player, information-set and action labels shared by the builders.
pub mod labels {
    pub const AGGREGATOR: &str = "A";
    pub const VALIDATOR: &str = "V";
    /// Checking contract in the random-check game; it only ever receives 0.
    pub const CONTRACT: &str = "C";

    pub const HONESTY: &str = "A:honesty";
    pub const AFTER_HONEST: &str = "V:after-honest";
    pub const AFTER_DISHONEST: &str = "V:after-dishonest";
    pub const SEARCH: &str = "V:search";
    pub const BLIND: &str = "V:blind";
    pub const INFORMED_HONEST: &str = "V:informed-honest";
    pub const INFORMED_DISHONEST: &str = "V:informed-dishonest";

    pub const HONEST: &str = "Honest";
    pub const DISHONEST: &str = "Dishonest";
    pub const CHALLENGE: &str = "Challenge";
    pub const NO: &str = "No";
    pub const NO_SEARCH: &str = "NoSearch";
    pub const SEARCH_ACTION: &str = "Search";
    pub const CHECK: &str = "Check";
}

use labels::*;

pub const AGGREGATOR_ID: PlayerId = PlayerId(0);
pub const VALIDATOR_ID: PlayerId = PlayerId(1);

/// Perfect-information game: the aggregator commits, then the validator,
/// seeing the commitment, decides whether to challenge.
pub fn build_game1(params: &ProtocolParams) -> Result<GameTree, Error> {
    params.validate()?;
    let ProtocolParams {
        f, w, s_a, s_v, z, ..
    } = *params;
    let mut t = TreeBuilder::new(&[AGGREGATOR, VALIDATOR]);
    let a = t.info_set(AGGREGATOR_ID, HONESTY);
    let v_honest = t.info_set(VALIDATOR_ID, AFTER_HONEST);
    let v_dishonest = t.info_set(VALIDATOR_ID, AFTER_DISHONEST);

    let hc = t.leaf(vec![f - w, -s_v]);
    let hn = t.leaf(vec![f - w, 0.0]);
    let dc = t.leaf(vec![-s_a - w, 0.5 * s_a]);
    let dn = t.leaf(vec![f + z - w, 0.0]);
    let after_honest = t.decision(v_honest, &[(CHALLENGE, hc), (NO, hn)]);
    let after_dishonest = t.decision(v_dishonest, &[(CHALLENGE, dc), (NO, dn)]);
    let root = t.decision(a, &[(HONEST, after_honest), (DISHONEST, after_dishonest)]);
    t.finish(root)
}

/// Search game: the validator first decides whether to pay for the search;
/// the aggregator cannot observe that choice, and a validator that skipped
/// the search cannot observe the aggregator.
pub fn build_game2(params: &ProtocolParams) -> Result<GameTree, Error> {
    params.validate()?;
    search_game(params, 0.0)
}

/// [`build_game2`] with the Easter-egg reward `y` added to the validator on
/// every leaf below `Search`.
pub fn build_game2_easter(params: &ProtocolParams) -> Result<GameTree, Error> {
    params.validate()?;
    search_game(params, params.y)
}

fn search_game(params: &ProtocolParams, bonus: f64) -> Result<GameTree, Error> {
    let ProtocolParams { s_a, s_v, x, z, .. } = *params;
    let mut t = TreeBuilder::new(&[AGGREGATOR, VALIDATOR]);
    let search = t.info_set(VALIDATOR_ID, SEARCH);
    let honesty = t.info_set(AGGREGATOR_ID, HONESTY);
    let blind = t.info_set(VALIDATOR_ID, BLIND);
    let informed_honest = t.info_set(VALIDATOR_ID, INFORMED_HONEST);
    let informed_dishonest = t.info_set(VALIDATOR_ID, INFORMED_DISHONEST);

    let challenge_node =
        |t: &mut TreeBuilder, set: InfoSetId, challenge: [f64; 2], no: [f64; 2]| {
            let c = t.leaf(challenge.to_vec());
            let n = t.leaf(no.to_vec());
            t.decision(set, &[(CHALLENGE, c), (NO, n)])
        };

    let blind_honest = challenge_node(&mut t, blind, [0.0, -s_v], [0.0, 0.0]);
    let blind_dishonest = challenge_node(&mut t, blind, [-s_a, 0.5 * s_a], [z, 0.0]);
    let no_search = t.decision(
        honesty,
        &[(HONEST, blind_honest), (DISHONEST, blind_dishonest)],
    );

    let cost = bonus - x;
    let seen_honest = challenge_node(&mut t, informed_honest, [0.0, -s_v + cost], [0.0, cost]);
    let seen_dishonest = challenge_node(
        &mut t,
        informed_dishonest,
        [-s_a, 0.5 * s_a + cost],
        [z, cost],
    );
    let searched = t.decision(
        honesty,
        &[(HONEST, seen_honest), (DISHONEST, seen_dishonest)],
    );

    let root = t.decision(search, &[(NO_SEARCH, no_search), (SEARCH_ACTION, searched)]);
    t.finish(root)
}

/// Random-check game: after the aggregator commits, the contract checks
/// with probability `p`. Only the aggregator has a stake in the outcome.
pub fn build_game3(params: &ProtocolParams) -> Result<GameTree, Error> {
    params.validate()?;
    let p = params.p.ok_or(Error::MissingParam("p"))?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParam {
            field: "p",
            reason: alloc::format!("{p} must lie strictly inside (0, 1)"),
        });
    }
    let ProtocolParams { s_a, z, .. } = *params;
    let mut t = TreeBuilder::new(&[AGGREGATOR, CONTRACT]);
    let honesty = t.info_set(AGGREGATOR_ID, HONESTY);
    let hc = t.leaf(vec![0.0, 0.0]);
    let hn = t.leaf(vec![0.0, 0.0]);
    let dc = t.leaf(vec![-s_a, 0.0]);
    let dn = t.leaf(vec![z, 0.0]);
    let honest = t.chance(&[(CHECK, p, hc), (NO, 1.0 - p, hn)]);
    let dishonest = t.chance(&[(CHECK, p, dc), (NO, 1.0 - p, dn)]);
    let root = t.decision(honesty, &[(HONEST, honest), (DISHONEST, dishonest)]);
    t.finish(root)
}

fn lookup(tree: &GameTree, label: &'static str) -> Result<InfoSetId, Error> {
    tree.info_set_by_label(label)
        .ok_or_else(|| Error::MissingInfoSet(label.into()))
}

fn binary(p_first: f64) -> alloc::vec::Vec<f64> {
    vec![p_first, 1.0 - p_first]
}

/// Profile on a search-game tree for a mix point. The informed validator
/// challenges exactly when the aggregator cheated.
pub fn mix_profile(tree: &GameTree, m: &MixPoint) -> Result<StrategyProfile, Error> {
    m.validate()?;
    let mut profile = StrategyProfile::for_tree(tree);
    profile.set(tree, lookup(tree, SEARCH)?, binary(m.b))?;
    profile.set(tree, lookup(tree, BLIND)?, binary(m.g))?;
    profile.set(tree, lookup(tree, INFORMED_HONEST)?, vec![0.0, 1.0])?;
    profile.set(tree, lookup(tree, INFORMED_DISHONEST)?, vec![1.0, 0.0])?;
    profile.set(tree, lookup(tree, HONESTY)?, binary(m.h))?;
    Ok(profile)
}

/// Validator strategy on the perfect-information tree that challenges
/// exactly the dishonest commitment.
pub fn game1_validator_response(tree: &GameTree) -> Result<BehaviorStrategy, Error> {
    Ok(BehaviorStrategy::new(VALIDATOR_ID)
        .with_pure(lookup(tree, AFTER_HONEST)?, 1, 2)
        .with_pure(lookup(tree, AFTER_DISHONEST)?, 0, 2))
}

/// Aggregator plays Honest with probability `honest_prob` on a tree whose
/// only aggregator set is the honesty choice.
pub fn aggregator_strategy(tree: &GameTree, honest_prob: f64) -> Result<BehaviorStrategy, Error> {
    if !(0.0..=1.0).contains(&honest_prob) {
        return Err(Error::InvalidProbability {
            field: "h",
            value: honest_prob,
        });
    }
    Ok(BehaviorStrategy::new(AGGREGATOR_ID).with(lookup(tree, HONESTY)?, binary(honest_prob)))
}

/// Expected aggregator payoff from cheating in the random-check game.
pub fn game3_dishonest_payoff(params: &ProtocolParams) -> Result<f64, Error> {
    let tree = build_game3(params)?;
    let mut profile = StrategyProfile::for_tree(&tree);
    profile.set_strategy(aggregator_strategy(&tree, 0.0)?)?;
    Ok(expected_utilities(&tree, &profile)?[AGGREGATOR_ID.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{backward_induction, enumerate_pure_strategies, Node};

    fn leaf_values(tree: &GameTree) -> alloc::vec::Vec<[f64; 2]> {
        tree.leaves()
            .into_iter()
            .map(|l| {
                let p = tree.leaf_payoffs(l).unwrap();
                [p[0], p[1]]
            })
            .collect()
    }

    #[test]
    fn game1_leaves_and_shape() {
        let p = ProtocolParams::new(10.0, 5.0, 0.0, 100.0).with_fee(2.0, 1.0);
        let tree = build_game1(&p).unwrap();
        assert_eq!(
            leaf_values(&tree),
            vec![[1.0, -5.0], [1.0, 0.0], [-11.0, 5.0], [101.0, 0.0]]
        );
        assert_eq!(tree.decision_node_count(), 3);
        assert!(tree.info_sets().iter().all(|s| s.nodes.len() == 1));
        assert_eq!(
            enumerate_pure_strategies(&tree, AGGREGATOR_ID)
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn game1_normalized_fee_pays_zero_when_honest() {
        let p = ProtocolParams::new(3.0, 2.0, 0.0, 50.0).with_fee(1.5, 1.5);
        let tree = build_game1(&p).unwrap();
        let leaves = leaf_values(&tree);
        assert_eq!(leaves[0][0], 0.0);
        assert_eq!(leaves[1][0], 0.0);
    }

    #[test]
    fn game1_backward_induction() {
        let p = ProtocolParams::new(10.0, 5.0, 0.0, 100.0).with_fee(2.0, 1.0);
        let tree = build_game1(&p).unwrap();
        let bi = backward_induction(&tree).unwrap();
        assert_eq!(bi.payoffs, vec![1.0, 0.0]);
        assert!(bi.ties.is_empty());
        let a = bi.profile.strategy(AGGREGATOR_ID).unwrap();
        let v = bi.profile.strategy(VALIDATOR_ID).unwrap();
        assert_eq!(
            a.pure_label(&tree, lookup(&tree, HONESTY).unwrap()),
            Some(HONEST)
        );
        assert_eq!(
            v.pure_label(&tree, lookup(&tree, AFTER_HONEST).unwrap()),
            Some(NO)
        );
        assert_eq!(
            v.pure_label(&tree, lookup(&tree, AFTER_DISHONEST).unwrap()),
            Some(CHALLENGE)
        );
        assert_eq!(v, &game1_validator_response(&tree).unwrap());
    }

    #[test]
    fn game2_leaves_and_shape() {
        let p = ProtocolParams::new(1.0, 1.0, 1.0 / 24.0, 24.0);
        let tree = build_game2(&p).unwrap();
        let x = 1.0 / 24.0;
        assert_eq!(
            leaf_values(&tree),
            vec![
                [0.0, -1.0],
                [0.0, 0.0],
                [-1.0, 0.5],
                [24.0, 0.0],
                [0.0, -1.0 - x],
                [0.0, -x],
                [-1.0, 0.5 - x],
                [24.0, -x],
            ]
        );
        assert_eq!(tree.info_sets_of(AGGREGATOR_ID).count(), 1);
        assert_eq!(
            tree.info_set(lookup(&tree, HONESTY).unwrap()).nodes.len(),
            2
        );
        assert_eq!(tree.info_sets_of(VALIDATOR_ID).count(), 4);
        assert_eq!(tree.info_set(lookup(&tree, BLIND).unwrap()).nodes.len(), 2);
        assert_eq!(
            enumerate_pure_strategies(&tree, VALIDATOR_ID)
                .unwrap()
                .len(),
            16
        );
    }

    #[test]
    fn game2_free_search_mirrors_blind_side() {
        let p = ProtocolParams::new(2.0, 1.5, 0.0, 30.0);
        let leaves = leaf_values(&build_game2(&p).unwrap());
        assert_eq!(leaves[..4], leaves[4..]);
    }

    #[test]
    fn easter_egg_tree() {
        let base = ProtocolParams::new(1.0, 1.0, 1.0 / 24.0, 24.0);
        assert_eq!(
            build_game2_easter(&base).unwrap(),
            build_game2(&base).unwrap()
        );

        let exact = base.clone().with_easter_egg(1.0 / 24.0);
        let leaves = leaf_values(&build_game2_easter(&exact).unwrap());
        assert_eq!(leaves[5][1], 0.0);

        let bonus = base.with_easter_egg(1.0 / 12.0);
        let leaves = leaf_values(&build_game2_easter(&bonus).unwrap());
        assert_eq!(leaves[6][1], 0.5 - 1.0 / 24.0 + 1.0 / 12.0);
        assert_eq!(leaves[2][1], 0.5);
    }

    #[test]
    fn game3_payoffs() {
        let p = ProtocolParams::new(1.0, 1.0, 0.0, 24.0).with_check_probability(0.5);
        assert_eq!(game3_dishonest_payoff(&p).unwrap(), 11.5);
        let tree = build_game3(&p).unwrap();
        assert!(matches!(tree.node(tree.leaves()[0]), Node::Leaf { .. }));
        assert_eq!(
            enumerate_pure_strategies(&tree, AGGREGATOR_ID)
                .unwrap()
                .len(),
            2
        );
        let near_one = p.clone().with_check_probability(1.0 - 1e-12);
        assert!((game3_dishonest_payoff(&near_one).unwrap() + 1.0).abs() < 1e-9);

        for prob in [0.01, 0.5, 0.99] {
            let q = p.clone().with_check_probability(prob);
            let tree = build_game3(&q).unwrap();
            let mut profile = StrategyProfile::for_tree(&tree);
            profile
                .set_strategy(aggregator_strategy(&tree, 1.0).unwrap())
                .unwrap();
            assert_eq!(expected_utilities(&tree, &profile).unwrap()[0], 0.0);
        }
    }

    #[test]
    fn game3_requires_interior_p() {
        let p = ProtocolParams::new(1.0, 1.0, 0.0, 24.0);
        assert_eq!(build_game3(&p).unwrap_err(), Error::MissingParam("p"));
        for bad in [0.0, 1.0] {
            let q = p.clone().with_check_probability(bad);
            assert!(matches!(
                build_game3(&q),
                Err(Error::InvalidParam { field: "p", .. })
            ));
        }
    }
}
