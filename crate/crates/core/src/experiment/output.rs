//! CSV emission and parsing.
//!
//! Reals are written with 17 significant digits (`{:.16e}`), which
//! round-trips every `f64` exactly.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::engine::{StepRecord, TimeSeries};
use crate::error::{Error, Result};

pub const TIMESERIES_HEADER: [&str; 10] = [
    "cell",
    "network",
    "strategy",
    "s",
    "K",
    "rep",
    "t",
    "mean_payoff",
    "max_payoff",
    "unique_solutions",
];

pub const SUMMARY_HEADER: [&str; 10] = [
    "cell",
    "network",
    "diameter",
    "efficiency",
    "strategy",
    "s",
    "K",
    "final_mean",
    "stderr",
    "reps",
];

/// Real formatted with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Efficiency {
    Efficient,
    Inefficient,
}

impl fmt::Display for Efficiency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Efficiency::Efficient => "efficient",
            Efficiency::Inefficient => "inefficient",
        })
    }
}

impl FromStr for Efficiency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "efficient" => Ok(Efficiency::Efficient),
            "inefficient" => Ok(Efficiency::Inefficient),
            _ => Err(Error::param(format!("unknown efficiency label `{s}`"))),
        }
    }
}

/// Identifies the series of one cell in a time-series file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesKey {
    pub cell: String,
    pub network: String,
    pub strategy: String,
    pub s: usize,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub cell: String,
    pub network: String,
    pub diameter: usize,
    pub efficiency: Efficiency,
    pub strategy: String,
    pub s: usize,
    pub k: usize,
    pub final_mean: f64,
    pub stderr: f64,
    pub reps: usize,
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Format {
            line,
            message: format!("{}: {other:?}", path.display()),
        },
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    Ok(())
}

/// Writes per-repetition series of one cell, ordered by repetition then `t`.
pub fn emit_timeseries_csv(key: &SeriesKey, series: &[TimeSeries], path: &Path) -> Result<()> {
    ensure_parent(path)?;
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(TIMESERIES_HEADER)
        .map_err(|e| csv_err(path, e))?;
    let (s, k) = (key.s.to_string(), key.k.to_string());
    for (rep, ts) in series.iter().enumerate() {
        let rep = rep.to_string();
        for (i, r) in ts.records.iter().enumerate() {
            w.write_record([
                key.cell.as_str(),
                &key.network,
                &key.strategy,
                &s,
                &k,
                &rep,
                &(i + 1).to_string(),
                &fmt_real(r.mean_payoff),
                &fmt_real(r.max_payoff),
                &r.unique_solutions.to_string(),
            ])
            .map_err(|e| csv_err(path, e))?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Deserialize)]
struct RawSeriesRow {
    cell: String,
    network: String,
    strategy: String,
    s: usize,
    #[serde(rename = "K")]
    k: usize,
    rep: usize,
    t: usize,
    mean_payoff: f64,
    max_payoff: f64,
    unique_solutions: usize,
}

/// Reads a time-series file back into per-cell, per-repetition series.
pub fn read_timeseries_csv(path: &Path) -> Result<Vec<(SeriesKey, Vec<TimeSeries>)>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let mut out: Vec<(SeriesKey, Vec<TimeSeries>)> = Vec::new();
    for (i, row) in rdr.deserialize::<RawSeriesRow>().enumerate() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let line = i + 2;
        let key = SeriesKey {
            cell: row.cell,
            network: row.network,
            strategy: row.strategy,
            s: row.s,
            k: row.k,
        };
        if out.last().is_none_or(|(k, _)| k.cell != key.cell) {
            out.push((key, Vec::new()));
        }
        let reps = &mut out.last_mut().expect("pushed above").1;
        if row.rep == reps.len() {
            reps.push(TimeSeries::default());
        }
        if row.rep + 1 != reps.len() {
            return Err(Error::Format {
                line,
                message: format!("repetition {} out of order", row.rep),
            });
        }
        let ts = reps.last_mut().expect("pushed above");
        if row.t != ts.records.len() + 1 {
            return Err(Error::Format {
                line,
                message: format!("step {} out of order", row.t),
            });
        }
        ts.records.push(StepRecord {
            mean_payoff: row.mean_payoff,
            max_payoff: row.max_payoff,
            unique_solutions: row.unique_solutions,
        });
    }
    Ok(out)
}

pub fn emit_summary_csv(rows: &[SummaryRow], path: &Path) -> Result<()> {
    ensure_parent(path)?;
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(SUMMARY_HEADER)
        .map_err(|e| csv_err(path, e))?;
    for r in rows {
        w.write_record([
            r.cell.as_str(),
            &r.network,
            &r.diameter.to_string(),
            &r.efficiency.to_string(),
            &r.strategy,
            &r.s.to_string(),
            &r.k.to_string(),
            &fmt_real(r.final_mean),
            &fmt_real(r.stderr),
            &r.reps.to_string(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Deserialize)]
struct RawSummaryRow {
    cell: String,
    network: String,
    diameter: usize,
    efficiency: String,
    strategy: String,
    s: usize,
    #[serde(rename = "K")]
    k: usize,
    final_mean: f64,
    stderr: f64,
    reps: usize,
}

pub fn read_summary_csv(path: &Path) -> Result<Vec<SummaryRow>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    if headers.iter().ne(SUMMARY_HEADER) {
        return Err(Error::Format {
            line: 1,
            message: format!(
                "{}: expected columns {}",
                path.display(),
                SUMMARY_HEADER.join(",")
            ),
        });
    }
    rdr.deserialize::<RawSummaryRow>()
        .enumerate()
        .map(|(i, row)| {
            let row = row.map_err(|e| csv_err(path, e))?;
            let efficiency = row.efficiency.parse().map_err(|e: Error| Error::Format {
                line: i + 2,
                message: e.to_string(),
            })?;
            Ok(SummaryRow {
                cell: row.cell,
                network: row.network,
                diameter: row.diameter,
                efficiency,
                strategy: row.strategy,
                s: row.s,
                k: row.k,
                final_mean: row.final_mean,
                stderr: row.stderr,
                reps: row.reps,
            })
        })
        .collect()
}
