//! Correlation and ordering checks over a summary CSV.

use crate::error::Result;
use crate::stats::pearson_r;

use super::output::{Efficiency, SummaryRow};
use super::report::{greater, Check, Estimate, Report, Verdict, MIN_REPETITIONS};

/// Expected sign of the diameter correlation for a strategy, if any.
fn expected_sign(strategy: &str) -> Option<f64> {
    match strategy {
        "best_member" => Some(1.0),
        "conformity" => Some(-1.0),
        _ => None,
    }
}

/// `(strategy, s, K)`.
type GroupKey = (String, usize, usize);

/// Groups rows by `(strategy, s, K)` in first-appearance order.
fn groups(rows: &[SummaryRow]) -> Vec<(GroupKey, Vec<&SummaryRow>)> {
    let mut out: Vec<(GroupKey, Vec<&SummaryRow>)> = Vec::new();
    for row in rows {
        let key = (row.strategy.clone(), row.s, row.k);
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(row),
            None => out.push((key, vec![row])),
        }
    }
    out
}

fn estimate(row: &SummaryRow) -> Estimate {
    Estimate::new(row.final_mean, row.stderr)
}

fn pooled(rows: &[&SummaryRow]) -> Estimate {
    let m = rows.len() as f64;
    let mean = rows.iter().map(|r| r.final_mean).sum::<f64>() / m;
    let se = rows.iter().map(|r| r.stderr * r.stderr).sum::<f64>().sqrt() / m;
    Estimate::new(mean, se)
}

/// For every `(strategy, s, K)` group: Pearson r between diameter and final
/// mean, efficient versus inefficient means, and complete versus lattice.
pub fn analyze_summary(rows: &[SummaryRow]) -> Result<Report> {
    let mut report = Report::new(format!("summary analysis ({} rows)", rows.len()));
    for ((strategy, s, k), members) in groups(rows) {
        let name = format!("{strategy} s={s} K={k}");
        let reps = members.iter().map(|r| r.reps).min().unwrap_or(0);
        let sign = expected_sign(&strategy);

        let x: Vec<f64> = members.iter().map(|r| r.diameter as f64).collect();
        let y: Vec<f64> = members.iter().map(|r| r.final_mean).collect();
        match (pearson_r(&x, &y), sign) {
            (Ok(r), Some(sign)) => report.check(Check {
                label: format!(
                    "{name} diameter correlation is {}",
                    if sign > 0.0 { "positive" } else { "negative" }
                ),
                verdict: super::report::gated(reps, sign * r > 0.0),
                detail: format!("r = {r:.4} over {} networks", members.len()),
            }),
            (Ok(r), None) => report.note(format!(
                "{name}: diameter correlation r = {r:.4} over {} networks",
                members.len()
            )),
            (Err(e), _) => report.note(format!("{name}: correlation undefined ({e})")),
        }

        let eff: Vec<&SummaryRow> = members
            .iter()
            .copied()
            .filter(|r| r.efficiency == Efficiency::Efficient)
            .collect();
        let ineff: Vec<&SummaryRow> = members
            .iter()
            .copied()
            .filter(|r| r.efficiency == Efficiency::Inefficient)
            .collect();
        if !eff.is_empty() && !ineff.is_empty() {
            let (e, i) = (pooled(&eff), pooled(&ineff));
            match sign {
                Some(s) if s > 0.0 => report.check(greater(
                    format!("{name} inefficient networks > efficient networks"),
                    i,
                    e,
                    reps,
                )),
                Some(_) => report.check(greater(
                    format!("{name} efficient networks > inefficient networks"),
                    e,
                    i,
                    reps,
                )),
                None => report.note(format!("{name}: efficient {e}, inefficient {i}")),
            }
        }

        let by_name = |n: &str| members.iter().find(|r| r.network == n).copied();
        if let (Some(c), Some(l), Some(sign)) = (by_name("complete"), by_name("lattice"), sign) {
            report.check(if sign > 0.0 {
                greater(
                    format!("{name} lattice final > complete final"),
                    estimate(l),
                    estimate(c),
                    reps,
                )
            } else {
                greater(
                    format!("{name} complete final > lattice final"),
                    estimate(c),
                    estimate(l),
                    reps,
                )
            });
        }
    }
    if rows.iter().any(|r| r.reps < MIN_REPETITIONS) {
        report.note(format!(
            "ordering checks need at least {MIN_REPETITIONS} repetitions per cell"
        ));
    }
    if report.checks.is_empty() && report.notes.is_empty() {
        report.check(Check {
            label: "summary has analyzable rows".into(),
            verdict: Verdict::Fail,
            detail: "no rows".into(),
        });
    }
    Ok(report)
}
