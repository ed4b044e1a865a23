//! The binary end to end: outputs, exit codes and determinism.

use std::path::Path;
use std::process::{Command, Output};

use rollup_game_cli::sweep::read_csv;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rollup-game"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

const REFERENCE: [&str; 8] = ["--sA", "1", "--sV", "1", "--x", "0.041666667", "--z", "24"];

fn with_reference<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut args = extra[..1].to_vec();
    args.extend(REFERENCE);
    args.extend(&extra[1..]);
    args
}

#[test]
fn solve_reference_point() {
    let v = json(&with_reference(&["solve", "--b", "0.2", "--json"]));
    assert!((v["mix"]["g"].as_f64().unwrap() - 0.8).abs() <= 1e-9);
    assert!((v["mix"]["h"].as_f64().unwrap() - 0.697916).abs() <= 1e-6);
    assert!(v["regrets"][0].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["flags"]["above_g_bound"], true);
}

#[test]
fn solve_exact_gives_fractions() {
    let v = json(&[
        "solve", "--sA", "1", "--sV", "1", "--x", "1/24", "--z", "24", "--b", "1/5", "--exact",
        "--json",
    ]);
    assert_eq!(v["g"], "4/5");
    assert_eq!(v["h"], "67/96");
    assert_eq!(v["residual_v"], "0");
}

#[test]
fn non_viable_b_names_the_bound() {
    let o = run(&with_reference(&["solve", "--b", "0.01"]));
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("b below 1/25 bound"));
    let o = run(&with_reference(&["solve", "--b", "1"]));
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        vec!["solve", "--b", "abc"],
        vec!["solve", "--frobnicate"],
        vec!["solve", "--b-grid", "0:2:0.1"],
        vec!["solve", "--sA", "-1", "--b", "0.5"],
        vec!["simulate", "--game", "4", "--b", "0.5"],
        vec!["simulate", "--game", "3", "--h", "0"],
        vec!["simulate", "--b", "0.2", "--g", "0.5"],
        vec!["solve", "--config", "/nonexistent/params.txt", "--b", "0.5"],
        vec![],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    std::fs::write(&path, "s_A=1\nstake=3\n").unwrap();
    let o = run(&["solve", "--config", path.to_str().unwrap(), "--b", "0.2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("stake"));
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, r#"{"s_A": 1, "s_V": "1", "x": "1/24", "z": 10}"#).unwrap();
    let p = path.to_str().unwrap();
    // The flag overrides z from the file.
    let v = json(&[
        "solve", "--config", p, "--z", "24", "--b", "1/5", "--exact", "--json",
    ]);
    assert_eq!(v["h"], "67/96");
}

#[test]
fn grid_writes_twenty_rows_that_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = run(&with_reference(&[
        "solve",
        "--b-grid",
        "0.05:1.0:0.05",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(o.status.code(), Some(0));
    let rows = read_csv(std::fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 20);
    assert_eq!(rows[19].b, 1.0);
    assert!(!rows[19].viable);
    assert!(rows[..19].iter().all(|r| r.viable));
}

#[test]
fn simulate_reference_point_converges() {
    let v = json(&[
        "simulate",
        "--game",
        "2",
        "--b",
        "0.2",
        "--g",
        "0.8",
        "--h",
        "0.6979166",
        "--rounds",
        "1000000",
        "--seed",
        "7",
        "--json",
    ]);
    for p in v["convergence"]["players"].as_array().unwrap() {
        let (mean, se) = (
            p["mean"].as_f64().unwrap(),
            p["std_error"].as_f64().unwrap(),
        );
        assert!(mean.abs() <= 4.0 * se, "{p}");
    }
}

#[test]
fn simulate_random_check_above_threshold() {
    let v = json(&[
        "simulate", "--game", "3", "--p", "0.99", "--h", "0", "--rounds", "20000", "--json",
    ]);
    assert!(v["report"]["means"][0].as_f64().unwrap() < 0.0);
}

#[test]
fn simulate_degenerate_mix_is_exactly_zero() {
    let v = json(&[
        "simulate", "--game", "2", "--b", "1", "--g", "0", "--h", "1", "--rounds", "10", "--json",
    ]);
    assert_eq!(v["report"]["means"], serde_json::json!([0.0, 0.0]));
    assert_eq!(v["report"]["std_errors"], serde_json::json!([0.0, 0.0]));
    assert!(v["convergence"].is_null());
}

#[test]
fn output_is_independent_of_thread_count() {
    let base = [
        "simulate", "--b", "0.3", "--g", "0.5", "--h", "0.4", "--rounds", "30001", "--seed", "11",
        "--json",
    ];
    let outputs: Vec<Vec<u8>> = ["1", "2", "7"]
        .iter()
        .map(|t| {
            let mut args = base.to_vec();
            args.extend(["--threads", t]);
            run(&args).stdout
        })
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn thresholds_report() {
    let v = json(&[
        "thresholds",
        "--sA",
        "1",
        "--z",
        "24",
        "--f",
        "1",
        "--b",
        "0.2",
        "--g",
        "0.8",
        "--h",
        "67/96",
        "--json",
    ]);
    assert!((v["random_check_p"].as_f64().unwrap() - 0.96).abs() <= 1e-12);
    assert!((v["easter_egg_min_y"].as_f64().unwrap() - 1.0 / 24.0).abs() <= 1e-12);
    assert!((v["transactor_min_u_t"].as_f64().unwrap() - 1.01731).abs() <= 1e-5);
    let v = json(&["thresholds", "--x", "1/24", "--exact", "--json"]);
    assert_eq!(v["random_check_p"], "24/25");
    assert_eq!(v["easter_egg_min_y"], "1/24");
    assert_eq!(v["b_lower_from_g"], "1/25");
    assert_eq!(v["h_window_always_satisfied"], true);
}

#[test]
fn verify_passes_and_catches_faults() {
    let v = json(&["verify", "--json"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 7);
    let o = run(&["verify", "--inject-fault", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["failures"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f == "closed form vs tree"));
}

#[test]
fn audit_reports_validator_gain() {
    let v = json(&["audit", "--x", "1/24", "--b", "0.2", "--json"]);
    assert!(
        (v["players"][1]["best_response_value"].as_f64().unwrap() - 21.0 / 192.0).abs() <= 1e-12
    );
    assert!(v["players"][0]["regret"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["epsilon_nash"], false);
}

#[test]
fn tree_json_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tree.json");
    for game in ["1", "2", "3"] {
        let o = run(&[
            "tree",
            "--game",
            game,
            "--p",
            "0.5",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let text = std::fs::read_to_string(Path::new(&out)).unwrap();
        let tree: rollup_game::game::GameTree = serde_json::from_str(&text).unwrap();
        assert_eq!(tree.players().len(), 2);
    }
}

#[test]
fn runs_are_deterministic() {
    let args = with_reference(&["solve", "--b-grid", "0.1:0.9:0.1"]);
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}
