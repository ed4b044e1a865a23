use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rollup_game::game::leaf_probabilities;
use rollup_game::montecarlo::{
    convergence_check, frequency_check, simulate_game2, simulate_game3, DEFAULT_K_SIGMA,
};
use rollup_game::rollup::{
    aggregator_utility, build_game2, mix_profile, validator_utility, MixPoint, ProtocolParams,
};

#[test]
fn means_and_frequencies_track_closed_forms_for_random_mixes() {
    let mut rng = StdRng::seed_from_u64(31);
    let params = ProtocolParams::new(1.0, 1.0, 1.0 / 24.0, 24.0);
    let tree = build_game2(&params).unwrap();
    let mut failures = 0;
    for i in 0..20 {
        let m = MixPoint::new(rng.random(), rng.random(), rng.random()).unwrap();
        let report = simulate_game2(&params, &m, 100_000, 1000 + i).unwrap();
        let analytic = [
            aggregator_utility(&params, &m),
            validator_utility(&params, &m),
        ];
        if !convergence_check(&report, &analytic, DEFAULT_K_SIGMA)
            .unwrap()
            .pass()
        {
            failures += 1;
        }
        let expected: Vec<f64> = leaf_probabilities(&tree, &mix_profile(&tree, &m).unwrap())
            .unwrap()
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        let freq = frequency_check(&report, &expected, DEFAULT_K_SIGMA);
        failures += freq.iter().filter(|c| !c.pass).count();
    }
    // 200 independent 4-sigma checks; a single miss is possible but rare.
    assert!(failures <= 1, "{failures} checks outside 4 sigma");
}

#[test]
fn random_check_game_mean() {
    let params = ProtocolParams::new(1.0, 1.0, 0.0, 24.0).with_check_probability(0.5);
    let report = simulate_game3(&params, 0.0, 200_000, 17).unwrap();
    let check = convergence_check(&report, &[11.5, 0.0], DEFAULT_K_SIGMA).unwrap();
    assert!(check.players[0].pass, "{check:?}");
    // The contract's payoff is identically zero.
    assert_eq!(report.std_errors[1], 0.0);
}

#[test]
fn frequent_checks_make_cheating_unprofitable() {
    let params = ProtocolParams::new(1.0, 1.0, 0.0, 24.0).with_check_probability(0.99);
    let report = simulate_game3(&params, 0.0, 50_000, 3).unwrap();
    assert!(report.means[0] < 0.0);
}

#[test]
fn reports_are_reproducible() {
    let params = ProtocolParams::new(1.0, 1.0, 1.0 / 24.0, 24.0);
    let m = MixPoint::new(0.2, 0.8, 67.0 / 96.0).unwrap();
    let a = simulate_game2(&params, &m, 50_000, 7).unwrap();
    let b = simulate_game2(&params, &m, 50_000, 7).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert_eq!(a.outcomes.iter().map(|o| o.count).sum::<u64>(), a.rounds);
    assert_eq!(a.outcomes[4].count, 0); // searching validators never challenge honest work
}
