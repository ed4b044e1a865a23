//! Multi-threaded simulation. Each thread tallies a contiguous range of
//! rounds; tallies are counts, so the merged report is bit-identical to a
//! single-threaded run with the same seed.

use std::ops::Range;
use std::thread;

use rollup_game::montecarlo::{
    report, shard_ranges, tally_game2, tally_game3, SimGame, SimulationReport, Tally,
};
use rollup_game::rollup::{MixPoint, ProtocolParams};
use rollup_game::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum Scenario {
    /// Search game at a mix `(b, g, h)`.
    Search(MixPoint),
    /// Random-check game with the aggregator honest with this probability.
    RandomCheck { honest_prob: f64 },
}

impl Scenario {
    fn game(&self) -> SimGame {
        match self {
            Scenario::Search(_) => SimGame::Search,
            Scenario::RandomCheck { .. } => SimGame::RandomCheck,
        }
    }
}

fn tally(
    params: &ProtocolParams,
    scenario: &Scenario,
    seed: u64,
    rounds: Range<u64>,
) -> Result<Tally, Error> {
    match scenario {
        Scenario::Search(m) => tally_game2(m, seed, rounds),
        Scenario::RandomCheck { honest_prob } => {
            let p = params.p.ok_or(Error::MissingParam("p"))?;
            tally_game3(p, *honest_prob, seed, rounds)
        }
    }
}

pub fn simulate(
    params: &ProtocolParams,
    scenario: &Scenario,
    rounds: u64,
    seed: u64,
    threads: usize,
) -> Result<SimulationReport, Error> {
    params.validate()?;
    if rounds == 0 {
        return Err(Error::TooFewRounds { min: 1, got: 0 });
    }
    let shards = shard_ranges(rounds, threads.max(1));
    let tallies: Vec<Result<Tally, Error>> = thread::scope(|s| {
        let handles: Vec<_> = shards
            .into_iter()
            .map(|range| s.spawn(move || tally(params, scenario, seed, range)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    });
    let mut total = Tally::new(scenario.game());
    for t in tallies {
        total.merge(&t?);
    }
    report(params, &total, seed)
}
