//! `b` grids and the sweep CSV format.

use std::io::{Read, Write};

use rollup_game::equilibria::SweepRow;
use serde::{Deserialize, Serialize};

pub const CSV_HEADER: [&str; 8] = [
    "b",
    "g",
    "h",
    "residual_A",
    "residual_V",
    "regret_A",
    "regret_V",
    "viable",
];

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("grid {0:?}: expected start:stop:step")]
    GridSyntax(String),
    #[error("grid {text:?}: {reason}")]
    Grid { text: String, reason: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv header mismatch: {0:?}")]
    Header(Vec<String>),
    #[error("csv row {row}, column {column}: cannot parse {value:?}")]
    Cell {
        row: usize,
        column: &'static str,
        value: String,
    },
}

/// Parses `start:stop:step` into a strictly increasing grid in [0, 1]
/// that includes `stop` when it lies on the grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, SweepError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(SweepError::GridSyntax(text.to_string()));
    };
    let num = |s: &str| {
        crate::number::parse_rational(s)
            .map(|q| crate::number::to_f64(&q))
            .map_err(|reason| SweepError::Grid {
                text: text.to_string(),
                reason,
            })
    };
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    let fail = |reason: &str| SweepError::Grid {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(fail("values must be finite"));
    }
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) {
        return Err(fail("start and stop must lie in [0, 1]"));
    }
    if step <= 0.0 {
        return Err(fail("step must be positive"));
    }
    if stop < start {
        return Err(fail("stop must not be below start"));
    }
    let intervals = (stop - start) / step;
    let n = (intervals + 1e-9).floor() as usize;
    if n > 10_000_000 {
        return Err(fail("grid has more than 10^7 points"));
    }
    let mut grid: Vec<f64> = (0..=n).map(|i| start + i as f64 * step).collect();
    // Snap the last point onto `stop` when rounding left it just short.
    if let Some(last) = grid.last_mut() {
        if (intervals - n as f64).abs() <= 1e-9 {
            *last = stop;
        }
    }
    Ok(grid)
}

fn fmt(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

pub fn write_csv(rows: &[SweepRow], out: impl Write) -> Result<(), SweepError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            fmt(r.b),
            fmt(r.g),
            fmt(r.h),
            fmt(r.residual_a),
            fmt(r.residual_v),
            fmt(r.regret_a),
            fmt(r.regret_v),
            r.viable.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_csv(input: impl Read) -> Result<Vec<SweepRow>, SweepError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(SweepError::Header(header));
    }
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let cell = |k: usize| -> Result<f64, SweepError> {
            record[k].parse().map_err(|_| SweepError::Cell {
                row: i + 1,
                column: CSV_HEADER[k],
                value: record[k].to_string(),
            })
        };
        let viable = record[7].parse().map_err(|_| SweepError::Cell {
            row: i + 1,
            column: "viable",
            value: record[7].to_string(),
        })?;
        rows.push(SweepRow {
            b: cell(0)?,
            g: cell(1)?,
            h: cell(2)?,
            residual_a: cell(3)?,
            residual_v: cell(4)?,
            regret_a: cell(5)?,
            regret_v: cell(6)?,
            viable,
        });
    }
    Ok(rows)
}

/// JSON form of a sweep row. JSON has no NaN, so undefined values are null.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonRow {
    pub b: f64,
    pub g: Option<f64>,
    pub h: Option<f64>,
    pub residual_a: Option<f64>,
    pub residual_v: Option<f64>,
    pub regret_a: Option<f64>,
    pub regret_v: Option<f64>,
    pub viable: bool,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

pub fn to_json_rows(rows: &[SweepRow]) -> Vec<JsonRow> {
    rows.iter()
        .map(|r| JsonRow {
            b: r.b,
            g: finite(r.g),
            h: finite(r.h),
            residual_a: finite(r.residual_a),
            residual_v: finite(r.residual_v),
            regret_a: finite(r.regret_a),
            regret_v: finite(r.regret_v),
            viable: r.viable,
        })
        .collect()
}

pub fn from_json_rows(rows: &[JsonRow]) -> Vec<SweepRow> {
    let nan = |v: Option<f64>| v.unwrap_or(f64::NAN);
    rows.iter()
        .map(|r| SweepRow {
            b: r.b,
            g: nan(r.g),
            h: nan(r.h),
            residual_a: nan(r.residual_a),
            residual_v: nan(r.residual_v),
            regret_a: nan(r.regret_a),
            regret_v: nan(r.regret_v),
            viable: r.viable,
        })
        .collect()
}
