//! Figure replication: fixed plans plus ordering checks.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::engine::{BatchResult, Execution};
use crate::error::{Error, Result};
use crate::graph::{save_edge_list, NetworkKind, NetworkSpec, RewireBudget};
use crate::seed::{derive, TAG_GRAPH};
use crate::stats::{mean_se, pearson_r};
use crate::strategy::{Rule, StrategySpec};

use super::plan::{ExperimentPlan, NetworkSource, PlanNetwork};
use super::report::{gated, greater, separated_below, Check, Estimate, Report, Verdict};
use super::runner::{run_plan, CellOutcome, PlanOutcome, RunOptions};

pub const N_AGENTS: usize = 100;
pub const N_COMPONENTS: usize = 15;
pub const DEGREE: usize = 19;
pub const T_MAX: usize = 200;
pub const DEFAULT_REPETITIONS: usize = 200;
/// Mean payoff counted as having found the optimum.
pub const OPTIMUM_THRESHOLD: f64 = 0.999;
/// Latest step at which the short-run crossover may occur.
pub const CROSSOVER_HORIZON: usize = 20;
pub const UNIQUE_CEILING: f64 = 1.1;
pub const CORRELATION_FLOOR: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }

    fn uses_rewired_networks(self) -> bool {
        matches!(self, Figure::Fig3 | Figure::Fig4)
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::param(format!("unknown figure `{s}`, expected fig1..fig4")))
    }
}

#[derive(Clone, Debug)]
pub struct ReplicateOptions {
    pub out_dir: PathBuf,
    pub seed: u64,
    pub repetitions: usize,
    /// Directory holding `<network>.edges` files; defaults to
    /// `<out_dir>/networks`.
    pub networks_dir: Option<PathBuf>,
    /// Generate and save rewired networks whose files are missing.
    pub generate_missing: bool,
    pub rewire: RewireBudget,
    pub write_series: bool,
}

impl ReplicateOptions {
    pub fn new(out_dir: impl Into<PathBuf>, seed: u64) -> Self {
        ReplicateOptions {
            out_dir: out_dir.into(),
            seed,
            repetitions: DEFAULT_REPETITIONS,
            networks_dir: None,
            generate_missing: false,
            rewire: RewireBudget::default(),
            write_series: true,
        }
    }

    pub fn networks_dir(&self) -> PathBuf {
        self.networks_dir
            .clone()
            .unwrap_or_else(|| self.out_dir.join("networks"))
    }
}

/// Path of a standard network's edge list inside `dir`.
pub fn network_file(dir: &Path, spec: &NetworkSpec) -> PathBuf {
    dir.join(format!("{}.edges", spec.name()))
}

fn strategy_label(spec: &StrategySpec) -> String {
    match spec.rule {
        Rule::BestMember | Rule::Conformity => format!("{} s={}", spec.rule, spec.sample_size()),
        _ => spec.rule.to_string(),
    }
}

/// The fixed plan behind a figure.
pub fn figure_plan(figure: Figure, opts: &ReplicateOptions) -> Result<ExperimentPlan> {
    let (k_values, networks, strategies) = if figure.uses_rewired_networks() {
        let dir = opts.networks_dir();
        let networks = NetworkSpec::standard_ten(N_AGENTS, DEGREE)
            .into_iter()
            .map(|mut spec| {
                if matches!(spec.kind, NetworkKind::Rewired { .. }) {
                    spec.source = Some(network_file(&dir, &spec));
                }
                PlanNetwork {
                    name: spec.name(),
                    source: NetworkSource::Spec(spec),
                }
            })
            .collect();
        let strategies = vec![StrategySpec::best_member(3), StrategySpec::conformity(3)];
        (vec![7], networks, strategies)
    } else {
        let complete = NetworkSpec::new(NetworkKind::Complete, N_AGENTS, N_AGENTS - 1);
        let networks = vec![PlanNetwork {
            name: complete.name(),
            source: NetworkSource::Spec(complete),
        }];
        let strategies = six_strategies().to_vec();
        (vec![0, 7], networks, strategies)
    };
    ExperimentPlan::new(
        N_AGENTS,
        N_COMPONENTS,
        k_values,
        networks,
        strategies,
        T_MAX,
        opts.repetitions,
        opts.seed,
        opts.rewire,
    )
}

/// Generates and saves every rewired network of `plan` whose file is
/// missing, using the seed the runner would use for that network.
pub fn generate_missing_networks(plan: &ExperimentPlan, progress: impl Fn(&str)) -> Result<()> {
    for (index, net) in plan.networks.iter().enumerate() {
        let NetworkSource::Spec(spec) = &net.source else {
            continue;
        };
        let Some(path) = spec.source.as_ref().filter(|p| !p.exists()) else {
            continue;
        };
        progress(&format!("generating {}", net.name));
        let fresh = NetworkSpec {
            source: None,
            ..spec.clone()
        };
        let g = fresh.build(plan.rewire, derive(plan.seed, &[TAG_GRAPH, index as u64]))?;
        save_edge_list(&g, &net.name, path)?;
    }
    Ok(())
}

/// Runs a figure's plan, writes its CSVs and `report.txt` under
/// `<out_dir>/<figure>`, and checks the expected orderings.
pub fn replicate(
    figure: Figure,
    opts: &ReplicateOptions,
    progress: impl Fn(&str) + Sync,
) -> Result<(Report, PlanOutcome)> {
    let plan = figure_plan(figure, opts)?;
    if opts.generate_missing {
        generate_missing_networks(&plan, &progress)?;
    }
    let out = opts.out_dir.join(figure.name());
    let options = RunOptions {
        write_series: opts.write_series,
        execution: Execution::Parallel,
    };
    let outcome = run_plan(&plan, Some(&out), options, progress)?;
    let report = figure_report(figure, &outcome)?;
    let path = out.join("report.txt");
    fs::write(&path, report.to_string()).map_err(|e| Error::io(&path, e))?;
    Ok((report, outcome))
}

/// Checks a finished figure plan.
pub fn figure_report(figure: Figure, outcome: &PlanOutcome) -> Result<Report> {
    let reps = outcome.cells.first().map_or(0, |c| c.batch.series.len());
    let mut report = Report::new(format!("{figure} ({reps} repetitions)"));
    match figure {
        Figure::Fig1 => fig1(outcome, reps, &mut report)?,
        Figure::Fig2 => fig2(outcome, reps, &mut report)?,
        Figure::Fig3 => fig3(outcome, reps, &mut report)?,
        Figure::Fig4 => fig4(outcome, reps, &mut report)?,
    }
    Ok(report)
}

fn cell<'a>(
    outcome: &'a PlanOutcome,
    network: &str,
    spec: StrategySpec,
    k: usize,
) -> Result<&'a CellOutcome> {
    let name = format!("{network}__{}__K{k}", spec.label());
    outcome
        .cell(&name)
        .ok_or_else(|| Error::Analysis(format!("cell `{name}` missing from the outcome")))
}

pub fn final_estimate(batch: &BatchResult) -> Estimate {
    let s = batch.final_summary();
    Estimate::new(s.mean_payoff, s.se_payoff)
}

pub fn unique_estimate(batch: &BatchResult, t: usize) -> Estimate {
    let s = batch.at(t);
    Estimate::new(s.mean_unique, s.se_unique)
}

/// Mean first step at which the mean payoff reaches `threshold`. Runs that
/// never reach it count as `t_max + 1`. Also returns how many runs reached.
pub fn first_passage_estimate(batch: &BatchResult, threshold: f64) -> (Estimate, usize) {
    let mut reached = 0;
    let times: Vec<f64> = batch
        .series
        .iter()
        .map(|s| match s.first_passage(threshold) {
            Some(t) => {
                reached += 1;
                t as f64
            }
            None => (s.len() + 1) as f64,
        })
        .collect();
    let (mean, se) = mean_se(&times);
    (Estimate::new(mean, se), reached)
}

fn six_strategies() -> [StrategySpec; 6] {
    [
        StrategySpec::best_member(3),
        StrategySpec::best_member(9),
        StrategySpec::conformity(3),
        StrategySpec::conformity(9),
        StrategySpec::random_copy(),
        StrategySpec::individual(),
    ]
}

fn fig1(o: &PlanOutcome, reps: usize, report: &mut Report) -> Result<()> {
    let [bm3, bm9, c3, c9, rc, ind] = six_strategies();
    let net = "complete";

    let mut passage = Vec::new();
    for spec in [bm3, bm9, c3, c9, rc, ind] {
        let batch = &cell(o, net, spec, 0)?.batch;
        let fin = final_estimate(batch);
        let (fpt, reached) = first_passage_estimate(batch, OPTIMUM_THRESHOLD);
        report.note(format!(
            "K=0 {}: final {fin}, first passage {fpt} ({reached}/{} runs reached)",
            strategy_label(&spec),
            batch.series.len()
        ));
        report.check(Check {
            label: format!("K=0 {} final >= {OPTIMUM_THRESHOLD}", strategy_label(&spec)),
            verdict: gated(reps, fin.mean >= OPTIMUM_THRESHOLD),
            detail: format!("{fin}"),
        });
        passage.push((spec, fpt));
    }
    let fpt = |spec: StrategySpec| passage.iter().find(|(s, _)| *s == spec).expect("listed").1;
    for (fast, slow) in [
        (bm3, c3),
        (bm9, c9),
        (c3, ind),
        (c3, rc),
        (c9, ind),
        (c9, rc),
    ] {
        report.check(separated_below(
            format!(
                "K=0 first passage {} < {}",
                strategy_label(&fast),
                strategy_label(&slow)
            ),
            fpt(fast),
            fpt(slow),
            reps,
        ));
    }

    let k7 = |spec| cell(o, net, spec, 7).map(|c| final_estimate(&c.batch));
    for spec in [bm3, bm9, c3, c9, rc, ind] {
        report.note(format!(
            "K=7 {}: final {}",
            strategy_label(&spec),
            k7(spec)?
        ));
    }
    for (a, b) in [(c3, c9), (c3, bm3), (bm3, bm9)] {
        report.check(greater(
            format!(
                "{} final > {} final",
                strategy_label(&a),
                strategy_label(&b)
            ),
            k7(a)?,
            k7(b)?,
            reps,
        ));
    }

    let b = &cell(o, net, bm3, 7)?.batch;
    let c = &cell(o, net, c3, 7)?.batch;
    let horizon = CROSSOVER_HORIZON.min(b.summary.len());
    let crossing = (1..=horizon).find(|&t| b.at(t).mean_payoff > c.at(t).mean_payoff);
    report.check(Check {
        label: format!("best_member s=3 > conformity s=3 at some t <= {CROSSOVER_HORIZON}"),
        verdict: gated(reps, crossing.is_some()),
        detail: match crossing {
            Some(t) => format!(
                "t={t}: {:.4} vs {:.4}",
                b.at(t).mean_payoff,
                c.at(t).mean_payoff
            ),
            None => "no crossing".into(),
        },
    });
    Ok(())
}

fn fig2(o: &PlanOutcome, reps: usize, report: &mut Report) -> Result<()> {
    let [bm3, bm9, c3, c9, rc, ind] = six_strategies();
    let net = "complete";
    for k in [0, 7] {
        for spec in [bm3, bm9, c3, c9, rc, ind] {
            let batch = &cell(o, net, spec, k)?.batch;
            report.note(format!(
                "K={k} {}: unique solutions at t=1 {}, at t={} {}",
                strategy_label(&spec),
                unique_estimate(batch, 1),
                batch.summary.len(),
                unique_estimate(batch, batch.summary.len()),
            ));
        }
    }
    let last =
        |spec| cell(o, net, spec, 7).map(|c| unique_estimate(&c.batch, c.batch.summary.len()));
    let u9 = last(bm9)?;
    report.check(Check {
        label: format!("best_member s=9 unique solutions at t=200 <= {UNIQUE_CEILING}"),
        verdict: gated(reps, u9.mean <= UNIQUE_CEILING),
        detail: format!("{u9}"),
    });
    report.check(greater(
        "conformity s=3 unique solutions > best_member s=9 unique solutions",
        last(c3)?,
        u9,
        reps,
    ));
    Ok(())
}

/// Mean over networks of per-network final means, with the standard error
/// propagated from the per-network standard errors.
fn group_estimate(values: &[Estimate]) -> Estimate {
    let m = values.len() as f64;
    let mean = values.iter().map(|e| e.mean).sum::<f64>() / m;
    let se = values.iter().map(|e| e.se * e.se).sum::<f64>().sqrt() / m;
    Estimate::new(mean, se)
}

fn fig3(o: &PlanOutcome, reps: usize, report: &mut Report) -> Result<()> {
    let bm3 = StrategySpec::best_member(3);
    let c3 = StrategySpec::conformity(3);
    for net in &o.networks {
        report.note(format!(
            "{}: diameter {} ({}); best_member s=3 {}; conformity s=3 {}",
            net.name,
            net.diameter,
            net.efficiency,
            final_estimate(&cell(o, &net.name, bm3, 7)?.batch),
            final_estimate(&cell(o, &net.name, c3, 7)?.batch),
        ));
    }
    let fin = |net: &str, spec| cell(o, net, spec, 7).map(|c| final_estimate(&c.batch));
    report.check(greater(
        "best_member s=3 lattice final > complete final",
        fin("lattice", bm3)?,
        fin("complete", bm3)?,
        reps,
    ));
    report.check(greater(
        "conformity s=3 complete final > lattice final",
        fin("complete", c3)?,
        fin("lattice", c3)?,
        reps,
    ));
    for (spec, efficient_wins) in [(bm3, false), (c3, true)] {
        let mut eff = Vec::new();
        let mut ineff = Vec::new();
        for net in &o.networks {
            let e = fin(&net.name, spec)?;
            match net.efficiency {
                super::Efficiency::Efficient => eff.push(e),
                super::Efficiency::Inefficient => ineff.push(e),
            }
        }
        if eff.is_empty() || ineff.is_empty() {
            continue;
        }
        let (e, i) = (group_estimate(&eff), group_estimate(&ineff));
        let name = strategy_label(&spec);
        report.check(if efficient_wins {
            greater(
                format!("{name} efficient networks > inefficient networks"),
                e,
                i,
                reps,
            )
        } else {
            greater(
                format!("{name} inefficient networks > efficient networks"),
                i,
                e,
                reps,
            )
        });
    }
    Ok(())
}

/// Pearson r between network diameter and final mean payoff for one
/// strategy, over the summary rows at `k`.
pub fn diameter_correlation(o: &PlanOutcome, spec: StrategySpec, k: usize) -> Result<f64> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for net in &o.networks {
        x.push(net.diameter as f64);
        y.push(final_estimate(&cell(o, &net.name, spec, k)?.batch).mean);
    }
    pearson_r(&x, &y)
}

fn fig4(o: &PlanOutcome, reps: usize, report: &mut Report) -> Result<()> {
    for net in &o.networks {
        report.note(format!("{}: diameter {}", net.name, net.diameter));
    }
    for (spec, sign) in [
        (StrategySpec::best_member(3), 1.0),
        (StrategySpec::conformity(3), -1.0),
    ] {
        let name = strategy_label(&spec);
        let expected = if sign > 0.0 { "positive" } else { "negative" };
        match diameter_correlation(o, spec, 7) {
            Ok(r) => {
                report.check(Check {
                    label: format!("{name} diameter correlation is {expected}"),
                    verdict: gated(reps, sign * r > 0.0),
                    detail: format!("r = {r:.4}"),
                });
                report.check(Check {
                    label: format!("{name} |r| >= {CORRELATION_FLOOR} with {expected} sign"),
                    verdict: gated(reps, sign * r >= CORRELATION_FLOOR),
                    detail: format!("r = {r:.4}"),
                });
            }
            Err(e) => report.check(Check {
                label: format!("{name} diameter correlation is {expected}"),
                verdict: Verdict::Fail,
                detail: e.to_string(),
            }),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_names_round_trip() {
        for f in Figure::ALL {
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
        }
        assert!("fig5".parse::<Figure>().is_err());
    }

    #[test]
    fn figure_plans_have_expected_cells() {
        let opts = ReplicateOptions::new("/tmp/out", 1);
        assert_eq!(figure_plan(Figure::Fig1, &opts).unwrap().cells.len(), 12);
        let plan = figure_plan(Figure::Fig4, &opts).unwrap();
        assert_eq!(plan.cells.len(), 20);
        let NetworkSource::Spec(spec) = &plan.networks[2].source else {
            panic!("spec expected");
        };
        assert_eq!(
            spec.source.as_deref(),
            Some(Path::new("/tmp/out/networks/min_closeness.edges"))
        );
    }
}
