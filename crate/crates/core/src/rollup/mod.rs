//! Protocol parameters, the rollup game trees and their closed-form
//! utilities.

mod games;
mod params;
mod utility;

pub use games::{
    aggregator_strategy, build_game1, build_game2, build_game2_easter, build_game3,
    game1_validator_response, game3_dishonest_payoff, labels, mix_profile, AGGREGATOR_ID,
    VALIDATOR_ID,
};
pub use params::{MixPoint, OrdinalReport, ProtocolParams, DEFAULT_DOMINANCE_RATIO};
pub use utility::{
    aggregator_dishonest_utility, aggregator_utility, blind_validator_utility,
    informed_validator_utility, transactor_utility, validator_utility,
};
