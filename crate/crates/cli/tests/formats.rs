//! Parameter files and output formats.

use num_rational::BigRational;
use rollup_game::equilibria::{solve_point, sweep, EquilibriumPoint};
use rollup_game::montecarlo::{simulate_game2, SimulationReport};
use rollup_game::rollup::{MixPoint, ProtocolParams};
use rollup_game_cli::config::{ConfigError, ParamSet};
use rollup_game_cli::sweep::{
    from_json_rows, parse_grid, read_csv, to_json_rows, write_csv, JsonRow,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn key_value_and_json_files_agree() {
    let kv = ParamSet::parse("f=1\nw=0.25\ns_A=1\ns_V=1\nx=1/24\nz=24\ny=1/24\nu_T=1.5\np=0.5\n")
        .unwrap();
    let js = ParamSet::parse(
        r#"{"f": 1, "w": 0.25, "s_A": 1, "s_V": 1, "x": "1/24", "z": 24, "y": "1/24", "u_T": 1.5, "p": "1/2"}"#,
    )
    .unwrap();
    assert_eq!(kv, js);
    let exact = kv.exact();
    assert_eq!(exact.x, q(1, 24));
    assert_eq!(exact.w, q(1, 4));
    assert_eq!(exact.u_t, Some(q(3, 2)));
    assert_eq!(ParamSet::parse(&kv.to_key_values()).unwrap(), kv);
}

#[test]
fn bad_files_are_rejected() {
    assert!(matches!(
        ParamSet::parse("s_a=1\n"),
        Err(ConfigError::UnknownKey(_))
    ));
    assert!(matches!(
        ParamSet::parse(r#"{"sA": 1}"#),
        Err(ConfigError::UnknownKey(_))
    ));
    assert!(matches!(
        ParamSet::parse("z=1\nz=2\n"),
        Err(ConfigError::DuplicateKey(_))
    ));
    assert!(matches!(
        ParamSet::parse("z=twenty\n"),
        Err(ConfigError::Value { .. })
    ));
    assert!(matches!(
        ParamSet::parse(r#"{"z": true}"#),
        Err(ConfigError::Value { .. })
    ));
    assert!(matches!(
        ParamSet::parse(r#"{"z": 1"#),
        Err(ConfigError::Json(_))
    ));
}

fn same_bits(a: f64, b: f64) -> bool {
    a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan())
}

#[test]
fn sweep_csv_and_json_reproduce_values() {
    let params = ProtocolParams::new(1.0, 1.0, 1.0 / 24.0, 24.0);
    let rows = sweep(&params, &parse_grid("0:1:0.01").unwrap()).unwrap();
    assert!(rows.iter().any(|r| r.g.is_nan() || !r.viable));

    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let csv_back = read_csv(buf.as_slice()).unwrap();

    let text = serde_json::to_string(&to_json_rows(&rows)).unwrap();
    let json_back = from_json_rows(&serde_json::from_str::<Vec<JsonRow>>(&text).unwrap());

    for back in [csv_back, json_back] {
        assert_eq!(back.len(), rows.len());
        for (a, b) in rows.iter().zip(&back) {
            let fields = |r: &rollup_game::equilibria::SweepRow| {
                [
                    r.b,
                    r.g,
                    r.h,
                    r.residual_a,
                    r.residual_v,
                    r.regret_a,
                    r.regret_v,
                ]
            };
            assert!(
                fields(a)
                    .iter()
                    .zip(fields(b))
                    .all(|(x, y)| same_bits(*x, y)),
                "{a:?} vs {b:?}"
            );
            assert_eq!(a.viable, b.viable);
        }
    }
}

#[test]
fn point_and_report_json_reproduce_values() {
    let params = ProtocolParams::new(1.0, 1.0, 1.0 / 24.0, 24.0);
    let point = solve_point(&params, 0.2).unwrap();
    let back: EquilibriumPoint =
        serde_json::from_str(&serde_json::to_string(&point).unwrap()).unwrap();
    assert_eq!(back, point);

    let report = simulate_game2(&params, &MixPoint::new(0.3, 0.1, 0.9).unwrap(), 1000, 5).unwrap();
    let back: SimulationReport =
        serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn csv_header_is_checked() {
    let err = read_csv("b,g,h\n0.1,0.2,0.3\n".as_bytes()).unwrap_err();
    assert!(err.to_string().contains("header"));
}
