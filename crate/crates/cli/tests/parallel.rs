//! Threaded simulation against the single-threaded core routine.

use rollup_game::montecarlo::{simulate_game2, simulate_game3};
use rollup_game::rollup::{MixPoint, ProtocolParams};
use rollup_game_cli::simulate::{simulate, Scenario};

#[test]
fn search_game_matches_sequential_for_any_thread_count() {
    let params = ProtocolParams::new(2.0, 1.0, 0.1, 30.0);
    let m = MixPoint::new(0.35, 0.6, 0.7).unwrap();
    let sequential = simulate_game2(&params, &m, 100_003, 42).unwrap();
    for threads in [1, 2, 3, 8, 64] {
        let parallel =
            simulate(&params, &Scenario::Search(m.clone()), 100_003, 42, threads).unwrap();
        assert_eq!(parallel, sequential, "{threads} threads");
    }
}

#[test]
fn random_check_game_matches_sequential() {
    let params = ProtocolParams::new(1.0, 1.0, 0.0, 24.0).with_check_probability(0.9);
    let sequential = simulate_game3(&params, 0.25, 50_000, 9).unwrap();
    for threads in [1, 4, 13] {
        let parallel = simulate(
            &params,
            &Scenario::RandomCheck { honest_prob: 0.25 },
            50_000,
            9,
            threads,
        )
        .unwrap();
        assert_eq!(parallel, sequential, "{threads} threads");
    }
}

#[test]
fn more_threads_than_rounds() {
    let params = ProtocolParams::new(1.0, 1.0, 0.0, 24.0);
    let m = MixPoint::new(0.5, 0.5, 0.5).unwrap();
    let a = simulate(&params, &Scenario::Search(m.clone()), 3, 1, 16).unwrap();
    assert_eq!(a, simulate_game2(&params, &m, 3, 1).unwrap());
}
