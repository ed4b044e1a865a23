use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rollup_game::equilibria::{
    easter_egg_min_reward, random_check_threshold, solve_mix, solve_point, sweep,
    transactor_min_utility, viability_b_lower, LowerBound,
};
use rollup_game::game::{regret_audit, GameTree};
use rollup_game::montecarlo::{
    convergence_check, ConvergenceCheck, SimulationReport, MIN_CONVERGENCE_ROUNDS,
};
use rollup_game::rollup::{
    aggregator_utility, build_game1, build_game2_easter, build_game3, game3_dishonest_payoff,
    mix_profile, validator_utility, MixPoint, ProtocolParams,
};
use rollup_game::{Error, NonViable, Scalar, TOLERANCE};
use serde::Serialize;

use crate::config::{ConfigError, ParamSet};
use crate::number::{display_bound, display_rational, parse_rational, to_f64};
use crate::simulate::{simulate, Scenario};
use crate::sweep::{parse_grid, write_csv, SweepError};
use crate::verify::{self, VerifyOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("non-viable: {0}")]
    NonViable(String),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NonViable(_) => 3,
            CliError::Invalid(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s)
}

#[derive(Debug, Parser)]
#[command(
    name = "rollup-game",
    version,
    about = "Aggregator/validator rollup game: equilibria, thresholds, simulation"
)]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Scenario parameters. Values accept decimals or fractions such as 1/24.
/// Flags override `--config`; unset stakes default to s_A=1, s_V=1,
/// x=1/24, z=24 and everything else to zero.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Parameter file: key=value lines or a JSON object
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Aggregator stake
    #[arg(long = "sA", value_parser = rational)]
    pub s_a: Option<BigRational>,
    /// Validator stake
    #[arg(long = "sV", value_parser = rational)]
    pub s_v: Option<BigRational>,
    /// Validator search cost
    #[arg(long, value_parser = rational)]
    pub x: Option<BigRational>,
    /// Value of an undetected dishonest commitment
    #[arg(long, value_parser = rational)]
    pub z: Option<BigRational>,
    /// Transaction fee
    #[arg(long, value_parser = rational)]
    pub f: Option<BigRational>,
    /// Aggregator computation cost
    #[arg(long, value_parser = rational)]
    pub w: Option<BigRational>,
    /// Expected easter-egg reward
    #[arg(long, value_parser = rational)]
    pub y: Option<BigRational>,
    /// Transactor gross utility
    #[arg(long = "uT", value_parser = rational)]
    pub u_t: Option<BigRational>,
    /// Random-check probability
    #[arg(long, value_parser = rational)]
    pub p: Option<BigRational>,
}

impl ParamArgs {
    pub fn resolve(&self) -> Result<ParamSet, CliError> {
        let mut set = match &self.config {
            Some(path) => ParamSet::load(path)?,
            None => ParamSet::default(),
        };
        let flags = [
            ("s_A", &self.s_a),
            ("s_V", &self.s_v),
            ("x", &self.x),
            ("z", &self.z),
            ("f", &self.f),
            ("w", &self.w),
            ("y", &self.y),
            ("u_T", &self.u_t),
            ("p", &self.p),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                set.set(key, v.clone())?;
            }
        }
        set.float().validate().map_err(invalid)?;
        Ok(set)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Shorthand for --format json
    #[arg(long)]
    pub json: bool,
}

impl OutputArgs {
    fn format(&self, default: Format) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format.unwrap_or(default)
        }
    }
}

/// Mix point `(b, g, h)`: no-search, blind-challenge and honesty
/// probabilities.
#[derive(Debug, Clone, Default, Args)]
pub struct MixArgs {
    #[arg(long, value_parser = rational)]
    pub b: Option<BigRational>,
    #[arg(long, value_parser = rational)]
    pub g: Option<BigRational>,
    #[arg(long, value_parser = rational)]
    pub h: Option<BigRational>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilibrium point for one b, or the CSV curve over a b grid
    Solve {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = rational, conflicts_with = "b_grid")]
        b: Option<BigRational>,
        /// start:stop:step
        #[arg(long = "b-grid", required_unless_present = "b")]
        b_grid: Option<String>,
        /// Solve in exact rational arithmetic
        #[arg(long, conflicts_with = "b_grid")]
        exact: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seeded Monte Carlo of the search game (2) or random-check game (3)
    Simulate {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
        game: u8,
        #[command(flatten)]
        mix: MixArgs,
        #[arg(long, default_value_t = 100_000)]
        rounds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "k-sigma", default_value_t = 4.0)]
        k_sigma: f64,
        /// Worker threads; results do not depend on this
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mechanism thresholds: check probability, easter-egg reward,
    /// transactor bound and the lower bounds on b
    Thresholds {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        mix: MixArgs,
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the self-check suite
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        /// b for the regret audit
        #[arg(long, value_parser = rational)]
        b: Option<BigRational>,
        /// Perturb a leaf payoff; the suite must then fail
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Best responses and regrets at a mix (or at the solved point for b)
    Audit {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        mix: MixArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Game tree as JSON
    Tree {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=3))]
        game: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

/// Maps a core error, naming the violated bound for non-viable inputs.
fn core_error(e: Error, params: &ProtocolParams<BigRational>) -> CliError {
    let Error::NonViable(nv) = e else {
        return invalid(e);
    };
    let bounds = viability_b_lower(params);
    let exact = |bound: &LowerBound<BigRational>, fallback: f64| {
        bound
            .value
            .as_ref()
            .map_or_else(|| display_bound(fallback), display_rational)
    };
    CliError::NonViable(match nv {
        NonViable::BOutsideUnit { b } => format!("b = {b} must lie strictly between 0 and 1"),
        NonViable::BelowGBound { b, bound, g } => format!(
            "b below {} bound (b = {b} gives blind-challenge rate g = {g}, outside (0, 1))",
            exact(&bounds.from_g, bound)
        ),
        NonViable::HOutsideUnit { b, h, bound } if bound.is_finite() && b <= bound => format!(
            "b below {} bound (b = {b} gives honesty rate h = {h}, outside (0, 1))",
            exact(&bounds.from_h_window, bound)
        ),
        NonViable::HOutsideUnit { b, h, .. } => {
            format!("b = {b} gives honesty rate h = {h}, outside (0, 1)")
        }
        NonViable::Degenerate(what) => format!("degenerate parameters ({what})"),
    })
}

fn sink<'a>(
    out: &Option<PathBuf>,
    stdout: &'a mut dyn Write,
) -> Result<Box<dyn Write + 'a>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(stdout),
    })
}

fn emit_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn opt_f64(q: &Option<BigRational>) -> Option<f64> {
    q.as_ref().map(to_f64)
}

/// Runs one command, writing to `stdout` unless `--out` is given. Returns
/// 0, or 1 when a verification step fails.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve {
            params,
            b,
            b_grid,
            exact,
            output,
        } => {
            let set = params.resolve()?;
            let mut out = sink(&output.out, stdout)?;
            match (b, b_grid) {
                (Some(b), _) if exact => {
                    solve_exact(&set, &b, output.format(Format::Table), &mut out)?
                }
                (Some(b), _) => {
                    solve_single(&set, to_f64(&b), output.format(Format::Table), &mut out)?
                }
                (None, Some(grid)) => {
                    solve_grid(&set, &grid, output.format(Format::Csv), &mut out)?
                }
                (None, None) => return Err(invalid("either --b or --b-grid is required")),
            }
            out.flush()?;
            Ok(0)
        }
        Command::Simulate {
            params,
            game,
            mix,
            rounds,
            seed,
            k_sigma,
            threads,
            output,
        } => {
            let set = params.resolve()?;
            let threads = threads
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let code = cmd_simulate(
                &set, game, &mix, rounds, seed, k_sigma, threads, &output, stdout,
            )?;
            Ok(code)
        }
        Command::Thresholds {
            params,
            mix,
            exact,
            output,
        } => {
            let set = params.resolve()?;
            let mut out = sink(&output.out, stdout)?;
            cmd_thresholds(&set, &mix, exact, output.format(Format::Table), &mut out)?;
            out.flush()?;
            Ok(0)
        }
        Command::Verify {
            params,
            b,
            inject_fault,
            output,
        } => {
            let set = params.resolve()?;
            let report = verify::run(
                &set.float(),
                &VerifyOptions {
                    b: opt_f64(&b),
                    inject_fault,
                },
            );
            let mut out = sink(&output.out, stdout)?;
            match output.format(Format::Table) {
                Format::Json => emit_json(&report, &mut out)?,
                Format::Csv => return Err(invalid("verify has no CSV output")),
                Format::Table => {
                    for c in &report.checks {
                        writeln!(
                            out,
                            "{} {:<28} {}",
                            if c.pass { "PASS" } else { "FAIL" },
                            c.name,
                            c.detail
                        )?;
                    }
                    if !report.passed {
                        writeln!(out, "failed: {}", report.failures.join(", "))?;
                    }
                }
            }
            out.flush()?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Audit {
            params,
            mix,
            output,
        } => {
            let set = params.resolve()?;
            let mut out = sink(&output.out, stdout)?;
            cmd_audit(&set, &mix, output.format(Format::Table), &mut out)?;
            out.flush()?;
            Ok(0)
        }
        Command::Tree { params, game, out } => {
            let set = params.resolve()?;
            let params = set.float();
            let tree = match game {
                1 => build_game1(&params),
                2 => build_game2_easter(&params),
                _ => build_game3(&params),
            }
            .map_err(invalid)?;
            let mut out = sink(&out, stdout)?;
            emit_json(&tree, &mut out)?;
            out.flush()?;
            Ok(0)
        }
    }
}

fn solve_single(
    set: &ParamSet,
    b: f64,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let point = solve_point(&set.float(), b).map_err(|e| core_error(e, &set.exact()))?;
    match format {
        Format::Json => emit_json(&point, out),
        Format::Csv => Err(invalid("CSV output needs --b-grid")),
        Format::Table => {
            let m = &point.mix;
            writeln!(out, "b = {}\ng = {}\nh = {}", m.b, m.g, m.h)?;
            writeln!(
                out,
                "residual A = {:.3e}\nresidual V = {:.3e}",
                point.residual_a, point.residual_v
            )?;
            writeln!(
                out,
                "values (A, V) = ({:.3e}, {:.3e})",
                point.values[0], point.values[1]
            )?;
            writeln!(
                out,
                "best responses (A, V) = ({:.12}, {:.12})",
                point.best_response_values[0], point.best_response_values[1]
            )?;
            writeln!(
                out,
                "regrets (A, V) = ({:.3e}, {:.12})",
                point.regrets[0], point.regrets[1]
            )?;
            let fl = &point.flags;
            writeln!(
                out,
                "flags: g bound {}, h window {}, ordinal x < s_V <= s_A < z {}, z >= 10 s_A {}",
                fl.above_g_bound,
                fl.above_h_window_bound,
                fl.ordinal_constraint,
                fl.attack_value_dominates
            )?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ExactPoint {
    b: String,
    g: String,
    h: String,
    residual_a: String,
    residual_v: String,
}

fn solve_exact(
    set: &ParamSet,
    b: &BigRational,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let params = set.exact();
    let solved = solve_mix(&params, b).map_err(|e| core_error(e, &params))?;
    let q = |v: &BigRational| format!("{}", v);
    let point = ExactPoint {
        b: q(&solved.mix.b),
        g: q(&solved.mix.g),
        h: q(&solved.mix.h),
        residual_a: q(&solved.residual_a),
        residual_v: q(&solved.residual_v),
    };
    match format {
        Format::Json => emit_json(&point, out),
        Format::Csv => Err(invalid("CSV output needs --b-grid")),
        Format::Table => {
            writeln!(out, "b = {}\ng = {}\nh = {}", point.b, point.g, point.h)?;
            writeln!(
                out,
                "residual A = {}\nresidual V = {}",
                point.residual_a, point.residual_v
            )?;
            Ok(())
        }
    }
}

fn solve_grid(
    set: &ParamSet,
    grid: &str,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let grid = parse_grid(grid)?;
    let rows = sweep(&set.float(), &grid).map_err(invalid)?;
    match format {
        Format::Csv => Ok(write_csv(&rows, out)?),
        Format::Json => emit_json(&crate::sweep::to_json_rows(&rows), out),
        Format::Table => {
            writeln!(
                out,
                "{:>8} {:>12} {:>12} {:>10} {:>12} viable",
                "b", "g", "h", "regret A", "regret V"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>8.4} {:>12.8} {:>12.8} {:>10.2e} {:>12.8} {}",
                    r.b, r.g, r.h, r.regret_a, r.regret_v, r.viable
                )?;
            }
            Ok(())
        }
    }
}

/// Mix from flags; with only `b` given, `g` and `h` come from the curve.
fn resolve_mix(set: &ParamSet, mix: &MixArgs) -> Result<Option<MixPoint>, CliError> {
    match (opt_f64(&mix.b), opt_f64(&mix.g), opt_f64(&mix.h)) {
        (None, None, None) => Ok(None),
        (Some(b), None, None) => {
            let solved = solve_mix(&set.float(), &b).map_err(|e| core_error(e, &set.exact()))?;
            Ok(Some(solved.mix))
        }
        (Some(b), Some(g), Some(h)) => Ok(Some(MixPoint::new(b, g, h).map_err(invalid)?)),
        _ => Err(invalid(
            "give --b alone (solved point) or all of --b, --g, --h",
        )),
    }
}

#[derive(Serialize)]
struct SimulationOutput {
    report: SimulationReport,
    analytic: Vec<f64>,
    convergence: Option<ConvergenceCheck>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    set: &ParamSet,
    game: u8,
    mix: &MixArgs,
    rounds: u64,
    seed: u64,
    k_sigma: f64,
    threads: usize,
    output: &OutputArgs,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let params = set.float();
    let (scenario, analytic) = if game == 2 {
        let m = resolve_mix(set, mix)?
            .ok_or_else(|| invalid("simulate --game 2 needs --b (and optionally --g, --h)"))?;
        let analytic = vec![
            aggregator_utility(&params, &m),
            validator_utility(&params, &m),
        ];
        (Scenario::Search(m), analytic)
    } else {
        let h = opt_f64(&mix.h)
            .ok_or_else(|| invalid("simulate --game 3 needs --h (honesty probability)"))?;
        if !(0.0..=1.0).contains(&h) {
            return Err(invalid(format!("h = {h} is not a probability")));
        }
        let p = params
            .p
            .ok_or_else(|| invalid("simulate --game 3 needs --p"))?;
        let cheat = if p == 0.0 {
            params.z
        } else if p == 1.0 {
            -params.s_a
        } else {
            game3_dishonest_payoff(&params).map_err(invalid)?
        };
        (
            Scenario::RandomCheck { honest_prob: h },
            vec![(1.0 - h) * cheat, 0.0],
        )
    };
    let report = simulate(&params, &scenario, rounds, seed, threads).map_err(invalid)?;
    let convergence = if rounds >= MIN_CONVERGENCE_ROUNDS {
        Some(convergence_check(&report, &analytic, k_sigma).map_err(invalid)?)
    } else {
        None
    };
    let pass = convergence.as_ref().is_none_or(|c| c.pass());
    let mut out = sink(&output.out, stdout)?;
    match output.format(Format::Table) {
        Format::Json => emit_json(
            &SimulationOutput {
                report,
                analytic,
                convergence,
            },
            &mut out,
        )?,
        Format::Csv => return Err(invalid("simulate has no CSV output")),
        Format::Table => {
            writeln!(
                out,
                "rounds {} seed {} ({})",
                report.rounds, report.seed, report.generator
            )?;
            for (i, player) in report.players.iter().enumerate() {
                writeln!(
                    out,
                    "{player}: mean {:.9} ± {:.3e} (analytic {:.9})",
                    report.means[i], report.std_errors[i], analytic[i]
                )?;
            }
            for o in &report.outcomes {
                writeln!(out, "  {:<28} {:>10}", o.label, o.count)?;
            }
            writeln!(
                out,
                "burned: aggregator stake {}, validator stake {}",
                report.burned_aggregator_stake, report.burned_validator_stake
            )?;
            match &convergence {
                Some(c) => {
                    for p in &c.players {
                        let sigmas = if p.std_error > 0.0 {
                            p.deviation / p.std_error
                        } else {
                            0.0
                        };
                        writeln!(
                            out,
                            "convergence {}: {} ({sigmas:.2} sigma, limit {})",
                            p.player,
                            if p.pass { "pass" } else { "FAIL" },
                            c.k_sigma
                        )?;
                    }
                }
                None => writeln!(
                    out,
                    "convergence check skipped below {MIN_CONVERGENCE_ROUNDS} rounds"
                )?,
            }
        }
    }
    out.flush()?;
    Ok(if pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct Thresholds<T> {
    /// Check probability above which cheating loses money.
    random_check_p: Option<T>,
    easter_egg_min_y: T,
    b_lower_from_g: Option<T>,
    b_lower_from_h_window: Option<T>,
    h_window_always_satisfied: bool,
    mix: Option<MixPoint<T>>,
    transactor_min_u_t: Option<T>,
}

fn thresholds<T: Scalar>(params: &ProtocolParams<T>, mix: Option<MixPoint<T>>) -> Thresholds<T> {
    let bounds = viability_b_lower(params);
    let transactor_min_u_t = mix
        .as_ref()
        .and_then(|m| transactor_min_utility(params, m).ok());
    Thresholds {
        random_check_p: random_check_threshold(params).ok(),
        easter_egg_min_y: easter_egg_min_reward(params),
        b_lower_from_g: bounds.from_g.value,
        h_window_always_satisfied: bounds.from_h_window.always_satisfied,
        b_lower_from_h_window: bounds.from_h_window.value,
        mix,
        transactor_min_u_t,
    }
}

fn map_thresholds<T, U>(t: Thresholds<T>, f: impl Fn(&T) -> U) -> Thresholds<U> {
    Thresholds {
        random_check_p: t.random_check_p.as_ref().map(&f),
        easter_egg_min_y: f(&t.easter_egg_min_y),
        b_lower_from_g: t.b_lower_from_g.as_ref().map(&f),
        b_lower_from_h_window: t.b_lower_from_h_window.as_ref().map(&f),
        h_window_always_satisfied: t.h_window_always_satisfied,
        mix: t.mix.map(|m| MixPoint {
            b: f(&m.b),
            g: f(&m.g),
            h: f(&m.h),
        }),
        transactor_min_u_t: t.transactor_min_u_t.as_ref().map(&f),
    }
}

fn cmd_thresholds(
    set: &ParamSet,
    mix: &MixArgs,
    exact: bool,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let text: Thresholds<String> = if exact {
        let params = set.exact();
        let m = match (&mix.b, &mix.g, &mix.h) {
            (None, None, None) => None,
            (Some(b), None, None) => Some(
                solve_mix(&params, b)
                    .map_err(|e| core_error(e, &params))?
                    .mix,
            ),
            (Some(b), Some(g), Some(h)) => {
                Some(MixPoint::new(b.clone(), g.clone(), h.clone()).map_err(invalid)?)
            }
            _ => {
                return Err(invalid(
                    "give --b alone (solved point) or all of --b, --g, --h",
                ))
            }
        };
        map_thresholds(thresholds(&params, m), display_rational)
    } else {
        let t = thresholds(&set.float(), resolve_mix(set, mix)?);
        if format == Format::Json {
            return emit_json(&t, out);
        }
        map_thresholds(t, |v: &f64| format!("{v}"))
    };
    match format {
        Format::Json => emit_json(&text, out),
        Format::Csv => Err(invalid("thresholds has no CSV output")),
        Format::Table => {
            let show = |v: &Option<String>| v.clone().unwrap_or_else(|| "undefined".into());
            writeln!(
                out,
                "random-check probability p* = {}",
                show(&text.random_check_p)
            )?;
            writeln!(
                out,
                "minimum easter-egg reward y = {}",
                text.easter_egg_min_y
            )?;
            writeln!(
                out,
                "b lower bound (g in (0,1)) = {}",
                show(&text.b_lower_from_g)
            )?;
            let window = show(&text.b_lower_from_h_window);
            let note = if text.h_window_always_satisfied {
                " (always satisfied)"
            } else {
                ""
            };
            writeln!(out, "b lower bound (h < 1) = {window}{note}")?;
            match (&text.mix, &text.transactor_min_u_t) {
                (Some(m), bound) => writeln!(
                    out,
                    "transactor utility bound at (b, g, h) = ({}, {}, {}): u_T > {}",
                    m.b,
                    m.g,
                    m.h,
                    bound.clone().unwrap_or_else(|| "unbounded".into())
                )?,
                (None, _) => writeln!(
                    out,
                    "transactor utility bound: give --b (and --g, --h) for a mix"
                )?,
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct PlayerAudit {
    player: String,
    value: f64,
    best_response_value: f64,
    regret: f64,
    /// Info-set label to action label.
    best_response: Vec<(String, String)>,
    tied_best_responses: usize,
}

#[derive(Serialize)]
struct AuditOutput {
    mix: MixPoint,
    epsilon_nash: bool,
    players: Vec<PlayerAudit>,
}

fn describe_pure(
    tree: &GameTree,
    audit_strategy: &rollup_game::game::BehaviorStrategy,
) -> Vec<(String, String)> {
    audit_strategy
        .distributions()
        .map(|(id, _)| {
            let label = tree.info_set(id).label.clone();
            let action = audit_strategy
                .pure_label(tree, id)
                .unwrap_or("mixed")
                .to_string();
            (label, action)
        })
        .collect()
}

fn cmd_audit(
    set: &ParamSet,
    mix: &MixArgs,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let params = set.float();
    let m = resolve_mix(set, mix)?
        .ok_or_else(|| invalid("audit needs --b (and optionally --g, --h)"))?;
    let tree = build_game2_easter(&params).map_err(invalid)?;
    let audit = regret_audit(&tree, &mix_profile(&tree, &m).map_err(invalid)?).map_err(invalid)?;
    let players = tree
        .players()
        .iter()
        .enumerate()
        .map(|(i, name)| PlayerAudit {
            player: name.to_string(),
            value: audit.values[i],
            best_response_value: audit.best_responses[i].value,
            regret: audit.regrets[i],
            best_response: describe_pure(&tree, &audit.best_responses[i].strategy),
            tied_best_responses: audit.best_responses[i].ties.len(),
        })
        .collect();
    let output = AuditOutput {
        epsilon_nash: audit.is_epsilon_nash(TOLERANCE),
        mix: m,
        players,
    };
    match format {
        Format::Json => emit_json(&output, out),
        Format::Csv => Err(invalid("audit has no CSV output")),
        Format::Table => {
            let m = &output.mix;
            writeln!(out, "mix (b, g, h) = ({}, {}, {})", m.b, m.g, m.h)?;
            for p in &output.players {
                writeln!(
                    out,
                    "{}: value {:.3e}, best response {:.12}, regret {:.12} ({} ties)",
                    p.player, p.value, p.best_response_value, p.regret, p.tied_best_responses
                )?;
                for (set, action) in &p.best_response {
                    writeln!(out, "    {set} -> {action}")?;
                }
            }
            writeln!(
                out,
                "epsilon-Nash at {TOLERANCE:e}: {}",
                output.epsilon_nash
            )?;
            Ok(())
        }
    }
}
