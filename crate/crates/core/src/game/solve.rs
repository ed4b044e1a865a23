use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::strategy::{BehaviorStrategy, StrategyProfile};
use super::tree::{GameTree, InfoSetId, Node, NodeId, PlayerId};
use crate::Error;

/// Two values closer than this are treated as a tie.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Probability of reaching each leaf under `profile`, in
/// [`GameTree::leaves`] order.
pub fn leaf_probabilities(
    tree: &GameTree,
    profile: &StrategyProfile,
) -> Result<Vec<(NodeId, f64)>, Error> {
    profile.validate(tree)?;
    let mut out = Vec::new();
    let mut stack = vec![(tree.root(), 1.0f64)];
    while let Some((id, reach)) = stack.pop() {
        match tree.node(id) {
            Node::Leaf { .. } => out.push((id, reach)),
            Node::Decision {
                info_set, children, ..
            } => {
                let dist = profile
                    .distribution(tree, *info_set)
                    .ok_or_else(|| Error::MissingInfoSet(tree.info_set(*info_set).label.clone()))?;
                for (child, p) in children.iter().zip(dist).rev() {
                    stack.push((*child, reach * p));
                }
            }
            Node::Chance {
                probabilities,
                children,
                ..
            } => {
                for (child, p) in children.iter().zip(probabilities).rev() {
                    stack.push((*child, reach * p));
                }
            }
        }
    }
    Ok(out)
}

/// Expected payoff of every player: the sum over leaves of reach
/// probability times leaf payoff.
pub fn expected_utilities(tree: &GameTree, profile: &StrategyProfile) -> Result<Vec<f64>, Error> {
    let mut totals = vec![0.0; tree.players().len()];
    for (leaf, reach) in leaf_probabilities(tree, profile)? {
        if let Some(payoffs) = tree.leaf_payoffs(leaf) {
            for (t, v) in totals.iter_mut().zip(payoffs) {
                *t += reach * v;
            }
        }
    }
    Ok(totals)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackwardInduction {
    /// Pure subgame-perfect profile, defined at every decision node.
    pub profile: StrategyProfile,
    pub payoffs: Vec<f64>,
    /// Information sets where the chosen action tied with a later one.
    pub ties: Vec<InfoSetId>,
}

/// Subgame-perfect solution of a perfect-information tree.
///
/// Chance nodes are averaged. On an exact tie (within [`TIE_TOLERANCE`]) the
/// first listed action wins and the set is reported in `ties`.
pub fn backward_induction(tree: &GameTree) -> Result<BackwardInduction, Error> {
    if let Some(set) = tree.info_sets().iter().find(|s| s.nodes.len() != 1) {
        return Err(Error::NotPerfectInformation(set.label.clone()));
    }
    let mut result = BackwardInduction {
        profile: StrategyProfile::for_tree(tree),
        payoffs: Vec::new(),
        ties: Vec::new(),
    };
    result.payoffs = induct(tree, tree.root(), &mut result)?;
    Ok(result)
}

fn induct(tree: &GameTree, id: NodeId, acc: &mut BackwardInduction) -> Result<Vec<f64>, Error> {
    match tree.node(id) {
        Node::Leaf { payoffs } => Ok(payoffs.clone()),
        Node::Chance {
            probabilities,
            children,
            ..
        } => {
            let mut total = vec![0.0; tree.players().len()];
            for (child, p) in children.iter().zip(probabilities) {
                let v = induct(tree, *child, acc)?;
                for (t, x) in total.iter_mut().zip(v) {
                    *t += p * x;
                }
            }
            Ok(total)
        }
        Node::Decision {
            player,
            info_set,
            children,
            ..
        } => {
            let mut best: Option<(usize, Vec<f64>)> = None;
            let mut tied = false;
            for (i, child) in children.iter().enumerate() {
                let v = induct(tree, *child, acc)?;
                match &best {
                    None => best = Some((i, v)),
                    Some((_, bv)) => {
                        let (cand, cur) = (v[player.0], bv[player.0]);
                        if cand > cur + TIE_TOLERANCE {
                            best = Some((i, v));
                            tied = false;
                        } else if (cand - cur).abs() <= TIE_TOLERANCE {
                            tied = true;
                        }
                    }
                }
            }
            let (choice, value) = best.ok_or_else(|| {
                Error::MalformedTree(alloc::format!("decision node {} has no children", id.0))
            })?;
            if tied {
                acc.ties.push(*info_set);
            }
            let mut dist = vec![0.0; children.len()];
            dist[choice] = 1.0;
            acc.profile.set(tree, *info_set, dist)?;
            Ok(value)
        }
    }
}

/// All pure strategies of `player`: the Cartesian product of action choices
/// over its information sets. The last information set varies fastest.
pub fn enumerate_pure_strategies(
    tree: &GameTree,
    player: PlayerId,
) -> Result<Vec<BehaviorStrategy>, Error> {
    if player.0 >= tree.players().len() {
        return Err(Error::UnknownPlayer(player.0));
    }
    let sets: Vec<(InfoSetId, usize)> = tree
        .info_sets_of(player)
        .map(|id| (id, tree.info_set_actions(id).len()))
        .collect();
    let total: usize = sets.iter().map(|(_, k)| *k).product();
    let mut out = Vec::with_capacity(total);
    let mut choice = vec![0usize; sets.len()];
    for _ in 0..total {
        let strategy = sets
            .iter()
            .zip(&choice)
            .fold(BehaviorStrategy::new(player), |s, (&(id, arity), &a)| {
                s.with_pure(id, a, arity)
            });
        out.push(strategy);
        for pos in (0..sets.len()).rev() {
            choice[pos] += 1;
            if choice[pos] < sets[pos].1 {
                break;
            }
            choice[pos] = 0;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    pub strategy: BehaviorStrategy,
    pub value: f64,
    /// Other pure strategies attaining the same value within [`TIE_TOLERANCE`].
    pub ties: Vec<BehaviorStrategy>,
}

/// Exhaustive pure best response of `player` against the rest of `profile`.
///
/// A pure best response always exists in a finite game, so searching the
/// pure strategies is exact. The first strategy in enumeration order wins
/// ties.
pub fn best_response(
    tree: &GameTree,
    profile: &StrategyProfile,
    player: PlayerId,
) -> Result<BestResponse, Error> {
    let mut best: Option<BestResponse> = None;
    for candidate in enumerate_pure_strategies(tree, player)? {
        let trial = profile.with_strategy(candidate.clone())?;
        let value = expected_utilities(tree, &trial)?[player.0];
        match &mut best {
            None => {
                best = Some(BestResponse {
                    strategy: candidate,
                    value,
                    ties: Vec::new(),
                })
            }
            Some(b) if value > b.value + TIE_TOLERANCE => {
                *b = BestResponse {
                    strategy: candidate,
                    value,
                    ties: Vec::new(),
                };
            }
            Some(b) if (value - b.value).abs() <= TIE_TOLERANCE => b.ties.push(candidate),
            Some(_) => {}
        }
    }
    best.ok_or(Error::UnknownPlayer(player.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegretAudit {
    /// Expected payoff of each player under the audited profile.
    pub values: Vec<f64>,
    pub best_responses: Vec<BestResponse>,
    /// Best-response value minus current value, per player.
    pub regrets: Vec<f64>,
}

impl RegretAudit {
    pub fn max_regret(&self) -> f64 {
        self.regrets.iter().copied().fold(0.0, f64::max)
    }

    /// True when no player gains more than `epsilon` by deviating.
    pub fn is_epsilon_nash(&self, epsilon: f64) -> bool {
        self.max_regret() <= epsilon
    }
}

pub fn regret_audit(tree: &GameTree, profile: &StrategyProfile) -> Result<RegretAudit, Error> {
    let values = expected_utilities(tree, profile)?;
    let mut best_responses = Vec::with_capacity(values.len());
    let mut regrets = Vec::with_capacity(values.len());
    for (p, &current) in values.iter().enumerate() {
        let br = best_response(tree, profile, PlayerId(p))?;
        regrets.push(br.value - current);
        best_responses.push(br);
    }
    Ok(RegretAudit {
        values,
        best_responses,
        regrets,
    })
}
