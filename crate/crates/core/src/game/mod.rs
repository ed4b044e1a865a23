//! Finite two-player extensive-form games with information sets.
//!
//! Everything here is a pure function of immutable inputs. Beliefs are never
//! computed; all solution concepts are evaluated ex ante from behavior
//! strategies.

mod solve;
mod strategy;
mod tree;

pub use solve::{
    backward_induction, best_response, enumerate_pure_strategies, expected_utilities,
    leaf_probabilities, regret_audit, BackwardInduction, BestResponse, RegretAudit, TIE_TOLERANCE,
};
pub use strategy::{BehaviorStrategy, StrategyProfile, DISTRIBUTION_TOLERANCE};
pub use tree::{
    GameTree, InfoSet, InfoSetId, Node, NodeId, PlayerId, TreeBuilder, CHANCE_SUM_TOLERANCE,
};
