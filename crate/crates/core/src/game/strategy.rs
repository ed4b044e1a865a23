use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::tree::{GameTree, InfoSetId, PlayerId};
use crate::Error;

/// Tolerance on the sum of a behavior distribution.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-12;

/// A distribution over actions at each of one player's information sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BehaviorStrategy {
    player: PlayerId,
    distributions: BTreeMap<InfoSetId, Vec<f64>>,
}

impl BehaviorStrategy {
    pub fn new(player: PlayerId) -> Self {
        BehaviorStrategy {
            player,
            distributions: BTreeMap::new(),
        }
    }

    pub fn player(&self) -> PlayerId {
        self.player
    }

    pub fn set(&mut self, info_set: InfoSetId, distribution: Vec<f64>) -> &mut Self {
        self.distributions.insert(info_set, distribution);
        self
    }

    pub fn with(mut self, info_set: InfoSetId, distribution: Vec<f64>) -> Self {
        self.set(info_set, distribution);
        self
    }

    /// Puts all mass on `action` out of `arity` actions.
    pub fn with_pure(self, info_set: InfoSetId, action: usize, arity: usize) -> Self {
        let mut dist = vec![0.0; arity];
        if let Some(slot) = dist.get_mut(action) {
            *slot = 1.0;
        }
        self.with(info_set, dist)
    }

    pub fn distribution(&self, info_set: InfoSetId) -> Option<&[f64]> {
        self.distributions.get(&info_set).map(Vec::as_slice)
    }

    pub fn distributions(&self) -> impl Iterator<Item = (InfoSetId, &[f64])> {
        self.distributions.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    /// The chosen action index if the strategy is pure at `info_set`.
    pub fn pure_action(&self, info_set: InfoSetId) -> Option<usize> {
        let dist = self.distribution(info_set)?;
        let mut chosen = None;
        for (i, &p) in dist.iter().enumerate() {
            if p == 1.0 && chosen.is_none() {
                chosen = Some(i);
            } else if p != 0.0 {
                return None;
            }
        }
        chosen
    }

    /// Action label chosen at `info_set`, for pure strategies.
    pub fn pure_label<'t>(&self, tree: &'t GameTree, info_set: InfoSetId) -> Option<&'t str> {
        let action = self.pure_action(info_set)?;
        tree.info_set_actions(info_set)
            .get(action)
            .map(|s| s.as_str())
    }

    /// Checks that every information set of the player in `tree` carries a
    /// normalized distribution of the right length.
    pub fn validate(&self, tree: &GameTree) -> Result<(), Error> {
        for id in tree.info_sets_of(self.player) {
            let set = tree.info_set(id);
            let dist = self
                .distribution(id)
                .ok_or_else(|| Error::MissingInfoSet(set.label.clone()))?;
            let arity = tree.info_set_actions(id).len();
            let invalid = |reason: alloc::string::String| Error::InvalidDistribution {
                label: set.label.clone(),
                reason,
            };
            if dist.len() != arity {
                return Err(invalid(format!(
                    "{} probabilities for {arity} actions",
                    dist.len()
                )));
            }
            if let Some(p) = dist.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
                return Err(invalid(format!(
                    "probability {p} is negative or not finite"
                )));
            }
            let sum: f64 = dist.iter().sum();
            if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
                return Err(invalid(format!("probabilities sum to {sum}")));
            }
        }
        Ok(())
    }
}

/// One behavior strategy per player, indexed by player.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    strategies: Vec<BehaviorStrategy>,
}

impl StrategyProfile {
    /// Profile with an empty strategy for each of `players` players.
    pub fn empty(players: usize) -> Self {
        StrategyProfile {
            strategies: (0..players)
                .map(|p| BehaviorStrategy::new(PlayerId(p)))
                .collect(),
        }
    }

    pub fn for_tree(tree: &GameTree) -> Self {
        Self::empty(tree.players().len())
    }

    pub fn strategy(&self, player: PlayerId) -> Option<&BehaviorStrategy> {
        self.strategies.get(player.0)
    }

    pub fn strategies(&self) -> &[BehaviorStrategy] {
        &self.strategies
    }

    /// Replaces the strategy of `strategy.player()`.
    pub fn set_strategy(&mut self, strategy: BehaviorStrategy) -> Result<(), Error> {
        let slot = self
            .strategies
            .get_mut(strategy.player().0)
            .ok_or(Error::UnknownPlayer(strategy.player().0))?;
        *slot = strategy;
        Ok(())
    }

    pub fn with_strategy(&self, strategy: BehaviorStrategy) -> Result<Self, Error> {
        let mut out = self.clone();
        out.set_strategy(strategy)?;
        Ok(out)
    }

    /// Sets the distribution at an information set, routed to its owner.
    pub fn set(
        &mut self,
        tree: &GameTree,
        info_set: InfoSetId,
        distribution: Vec<f64>,
    ) -> Result<(), Error> {
        let owner = tree
            .info_sets()
            .get(info_set.0)
            .ok_or_else(|| Error::MissingInfoSet(info_set.0.to_string()))?
            .player;
        let slot = self
            .strategies
            .get_mut(owner.0)
            .ok_or(Error::UnknownPlayer(owner.0))?;
        slot.set(info_set, distribution);
        Ok(())
    }

    pub fn distribution(&self, tree: &GameTree, info_set: InfoSetId) -> Option<&[f64]> {
        let owner = tree.info_sets().get(info_set.0)?.player;
        self.strategies.get(owner.0)?.distribution(info_set)
    }

    pub fn validate(&self, tree: &GameTree) -> Result<(), Error> {
        if self.strategies.len() != tree.players().len() {
            return Err(Error::MalformedTree(format!(
                "profile has {} strategies for {} players",
                self.strategies.len(),
                tree.players().len()
            )));
        }
        for (i, s) in self.strategies.iter().enumerate() {
            if s.player().0 != i {
                return Err(Error::UnknownPlayer(s.player().0));
            }
            s.validate(tree)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::tree::TreeBuilder;

    fn tree() -> (GameTree, InfoSetId) {
        let mut b = TreeBuilder::new(&["A", "B"]);
        let a = b.info_set(PlayerId(0), "a");
        let l = b.leaf(vec![1.0, 0.0]);
        let r = b.leaf(vec![0.0, 1.0]);
        let root = b.decision(a, &[("L", l), ("R", r)]);
        (b.finish(root).unwrap(), a)
    }

    #[test]
    fn missing_coverage_names_the_set() {
        let (tree, _) = tree();
        let err = StrategyProfile::for_tree(&tree)
            .validate(&tree)
            .unwrap_err();
        assert_eq!(err, Error::MissingInfoSet("a".into()));
    }

    #[test]
    fn rejects_unnormalized_distribution() {
        let (tree, a) = tree();
        let mut profile = StrategyProfile::for_tree(&tree);
        profile.set(&tree, a, vec![0.5, 0.6]).unwrap();
        assert!(matches!(
            profile.validate(&tree),
            Err(Error::InvalidDistribution { .. })
        ));
        profile.set(&tree, a, vec![-0.5, 1.5]).unwrap();
        assert!(matches!(
            profile.validate(&tree),
            Err(Error::InvalidDistribution { .. })
        ));
    }

    #[test]
    fn pure_action_detection() {
        let (tree, a) = tree();
        let s = BehaviorStrategy::new(PlayerId(0)).with_pure(a, 1, 2);
        assert_eq!(s.pure_action(a), Some(1));
        assert_eq!(s.pure_label(&tree, a), Some("R"));
        let mixed = BehaviorStrategy::new(PlayerId(0)).with(a, vec![0.5, 0.5]);
        assert_eq!(mixed.pure_action(a), None);
    }
}
