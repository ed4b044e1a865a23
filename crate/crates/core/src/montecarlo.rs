//! Seeded simulation of independent protocol rounds.
//!
//! Every round reads a fixed number of words from a ChaCha8 stream seeded by
//! the user seed, starting at a position derived from the round index alone.
//! Rounds can therefore be split into shards in any way and the merged
//! outcome counts are identical. Means and standard errors are computed from
//! the counts, so reports are bit-identical too.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::rollup::{labels, MixPoint, ProtocolParams};
use crate::Error;

pub const GENERATOR: &str = "chacha8-wordpos";

/// Minimum rounds for [`convergence_check`].
pub const MIN_CONVERGENCE_ROUNDS: u64 = 100;

pub const DEFAULT_K_SIGMA: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimGame {
    /// Validator search game.
    Search,
    /// Aggregator against a randomly checking contract.
    RandomCheck,
}

impl SimGame {
    /// 32-bit words consumed per round.
    fn words_per_round(self) -> u128 {
        match self {
            SimGame::Search => 6,
            SimGame::RandomCheck => 4,
        }
    }

    pub fn outcome_labels(self) -> &'static [&'static str] {
        match self {
            SimGame::Search => &[
                "NoSearch/Honest/Challenge",
                "NoSearch/Honest/No",
                "NoSearch/Dishonest/Challenge",
                "NoSearch/Dishonest/No",
                "Search/Honest/Challenge",
                "Search/Honest/No",
                "Search/Dishonest/Challenge",
                "Search/Dishonest/No",
            ],
            SimGame::RandomCheck => &[
                "Honest/Check",
                "Honest/No",
                "Dishonest/Check",
                "Dishonest/No",
            ],
        }
    }

    pub fn players(self) -> [&'static str; 2] {
        match self {
            SimGame::Search => [labels::AGGREGATOR, labels::VALIDATOR],
            SimGame::RandomCheck => [labels::AGGREGATOR, labels::CONTRACT],
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn bernoulli(rng: &mut ChaCha8Rng, p: f64) -> bool {
    uniform(rng) < p
}

fn stream_at(seed: u64, game: SimGame, first_round: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(first_round as u128 * game.words_per_round());
    rng
}

/// Outcome counts for a range of rounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub game: SimGame,
    pub counts: Vec<u64>,
}

impl Tally {
    pub fn new(game: SimGame) -> Self {
        Tally {
            game,
            counts: vec![0; game.outcome_labels().len()],
        }
    }

    pub fn rounds(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn merge(&mut self, other: &Tally) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

fn check_probability(field: &'static str, value: f64) -> Result<(), Error> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { field, value })
    }
}

/// Outcome counts of the search game over `rounds`.
///
/// Each round draws blind ~ Bernoulli(b), honest ~ Bernoulli(h) and a third
/// uniform used as challenge ~ Bernoulli(g) when blind; a searching
/// validator challenges exactly the dishonest commitments.
pub fn tally_game2(m: &MixPoint, seed: u64, rounds: Range<u64>) -> Result<Tally, Error> {
    m.validate()?;
    let mut tally = Tally::new(SimGame::Search);
    let mut rng = stream_at(seed, SimGame::Search, rounds.start);
    for _ in rounds {
        let blind = bernoulli(&mut rng, m.b);
        let honest = bernoulli(&mut rng, m.h);
        let blind_challenge = bernoulli(&mut rng, m.g);
        let challenge = if blind { blind_challenge } else { !honest };
        let idx = (!blind as usize) * 4 + (!honest as usize) * 2 + (!challenge as usize);
        tally.counts[idx] += 1;
    }
    Ok(tally)
}

/// Outcome counts of the random-check game over `rounds`.
pub fn tally_game3(
    check_prob: f64,
    honest_prob: f64,
    seed: u64,
    rounds: Range<u64>,
) -> Result<Tally, Error> {
    check_probability("p", check_prob)?;
    check_probability("h", honest_prob)?;
    let mut tally = Tally::new(SimGame::RandomCheck);
    let mut rng = stream_at(seed, SimGame::RandomCheck, rounds.start);
    for _ in rounds {
        let honest = bernoulli(&mut rng, honest_prob);
        let check = bernoulli(&mut rng, check_prob);
        tally.counts[(!honest as usize) * 2 + (!check as usize)] += 1;
    }
    Ok(tally)
}

/// `(A, V)` payoffs of the search-game outcomes in label order.
fn search_payoffs(params: &ProtocolParams) -> [[f64; 2]; 8] {
    let ProtocolParams { s_a, s_v, x, z, .. } = *params;
    let bounty = 0.5 * s_a;
    [
        [0.0, -s_v],
        [0.0, 0.0],
        [-s_a, bounty],
        [z, 0.0],
        [0.0, -s_v - x],
        [0.0, -x],
        [-s_a, bounty - x],
        [z, -x],
    ]
}

fn random_check_payoffs(params: &ProtocolParams) -> [[f64; 2]; 4] {
    [[0.0, 0.0], [0.0, 0.0], [-params.s_a, 0.0], [params.z, 0.0]]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeCount {
    pub label: String,
    pub count: u64,
    pub payoffs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub game: SimGame,
    pub rounds: u64,
    pub players: Vec<String>,
    pub means: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub outcomes: Vec<OutcomeCount>,
    /// Half of `s_A` per successful validator challenge; all of `s_A` per
    /// failed random check. Never part of any payoff.
    pub burned_aggregator_stake: f64,
    /// `s_V` per erroneous challenge.
    pub burned_validator_stake: f64,
    pub seed: u64,
    pub generator: String,
}

impl SimulationReport {
    pub fn frequencies(&self) -> Vec<f64> {
        self.outcomes
            .iter()
            .map(|o| o.count as f64 / self.rounds as f64)
            .collect()
    }
}

/// Builds the report for a completed tally.
pub fn report(
    params: &ProtocolParams,
    tally: &Tally,
    seed: u64,
) -> Result<SimulationReport, Error> {
    let rounds = tally.rounds();
    if rounds == 0 {
        return Err(Error::TooFewRounds { min: 1, got: 0 });
    }
    let payoffs: Vec<[f64; 2]> = match tally.game {
        SimGame::Search => search_payoffs(params).to_vec(),
        SimGame::RandomCheck => random_check_payoffs(params).to_vec(),
    };
    let n = rounds as f64;
    let mut means = vec![0.0; 2];
    for (c, p) in tally.counts.iter().zip(&payoffs) {
        let weight = *c as f64 / n;
        for k in 0..2 {
            means[k] += weight * p[k];
        }
    }
    let mut std_errors = vec![0.0; 2];
    if rounds > 1 {
        for k in 0..2 {
            let ss: f64 = tally
                .counts
                .iter()
                .zip(&payoffs)
                .map(|(c, p)| *c as f64 * (p[k] - means[k]) * (p[k] - means[k]))
                .sum();
            std_errors[k] = Float::sqrt(ss / (n - 1.0) / n);
        }
    }
    let (burned_a, burned_v) = match tally.game {
        SimGame::Search => (
            (tally.counts[2] + tally.counts[6]) as f64 * 0.5 * params.s_a,
            (tally.counts[0] + tally.counts[4]) as f64 * params.s_v,
        ),
        SimGame::RandomCheck => (tally.counts[2] as f64 * params.s_a, 0.0),
    };
    let outcomes = tally
        .game
        .outcome_labels()
        .iter()
        .zip(&tally.counts)
        .zip(&payoffs)
        .map(|((label, count), p)| OutcomeCount {
            label: label.to_string(),
            count: *count,
            payoffs: p.to_vec(),
        })
        .collect();
    Ok(SimulationReport {
        game: tally.game,
        rounds,
        players: tally.game.players().iter().map(|p| p.to_string()).collect(),
        means,
        std_errors,
        outcomes,
        burned_aggregator_stake: burned_a,
        burned_validator_stake: burned_v,
        seed,
        generator: GENERATOR.to_string(),
    })
}

pub fn simulate_game2(
    params: &ProtocolParams,
    m: &MixPoint,
    rounds: u64,
    seed: u64,
) -> Result<SimulationReport, Error> {
    params.validate()?;
    if rounds == 0 {
        return Err(Error::TooFewRounds { min: 1, got: 0 });
    }
    report(params, &tally_game2(m, seed, 0..rounds)?, seed)
}

/// Random-check rounds. `p` may be 0 or 1 here, unlike in the game tree.
pub fn simulate_game3(
    params: &ProtocolParams,
    honest_prob: f64,
    rounds: u64,
    seed: u64,
) -> Result<SimulationReport, Error> {
    params.validate()?;
    let p = params.p.ok_or(Error::MissingParam("p"))?;
    if rounds == 0 {
        return Err(Error::TooFewRounds { min: 1, got: 0 });
    }
    report(params, &tally_game3(p, honest_prob, seed, 0..rounds)?, seed)
}

/// Splits `0..rounds` into `shards` contiguous ranges.
pub fn shard_ranges(rounds: u64, shards: usize) -> Vec<Range<u64>> {
    let shards = shards.max(1) as u64;
    let base = rounds / shards;
    let extra = rounds % shards;
    let mut start = 0;
    (0..shards)
        .map(|i| {
            let len = base + u64::from(i < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlayerConvergence {
    pub player: String,
    pub mean: f64,
    pub analytic: f64,
    pub std_error: f64,
    pub deviation: f64,
    pub pass: bool,
    /// Zero standard error but a nonzero deviation.
    pub exact_mismatch: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCheck {
    pub k_sigma: f64,
    pub players: Vec<PlayerConvergence>,
}

impl ConvergenceCheck {
    pub fn pass(&self) -> bool {
        self.players.iter().all(|p| p.pass)
    }
}

/// Passes per player iff `|mean - analytic| <= k_sigma * stderr`.
pub fn convergence_check(
    report: &SimulationReport,
    analytic: &[f64],
    k_sigma: f64,
) -> Result<ConvergenceCheck, Error> {
    if report.rounds < MIN_CONVERGENCE_ROUNDS {
        return Err(Error::TooFewRounds {
            min: MIN_CONVERGENCE_ROUNDS,
            got: report.rounds,
        });
    }
    let players = report
        .players
        .iter()
        .zip(&report.means)
        .zip(&report.std_errors)
        .zip(analytic)
        .map(|(((player, &mean), &std_error), &analytic)| {
            let deviation = (mean - analytic).abs();
            PlayerConvergence {
                player: player.clone(),
                mean,
                analytic,
                std_error,
                deviation,
                pass: deviation <= k_sigma * std_error,
                exact_mismatch: std_error == 0.0 && deviation != 0.0,
            }
        })
        .collect();
    Ok(ConvergenceCheck { k_sigma, players })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyCheck {
    pub label: String,
    pub frequency: f64,
    pub expected: f64,
    /// Binomial standard error `sqrt(p (1 - p) / n)`.
    pub sigma: f64,
    pub pass: bool,
}

/// Compares each outcome frequency with its expected probability.
pub fn frequency_check(
    report: &SimulationReport,
    expected: &[f64],
    k_sigma: f64,
) -> Vec<FrequencyCheck> {
    let n = report.rounds as f64;
    report
        .outcomes
        .iter()
        .zip(expected)
        .map(|(o, &p)| {
            let frequency = o.count as f64 / n;
            let sigma = Float::sqrt(p * (1.0 - p) / n);
            FrequencyCheck {
                label: o.label.clone(),
                frequency,
                expected: p,
                sigma,
                pass: (frequency - p).abs() <= k_sigma * sigma,
            }
        })
        .collect()
}
