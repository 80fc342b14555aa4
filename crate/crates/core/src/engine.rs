//! Synchronous population dynamics.
//!
//! Each step, every agent decides from the same snapshot of time-`t`
//! solutions and payoffs; all moves commit together at `t + 1`. Agent `i` at
//! step `t` of a run seeded with `run_seed` draws from the stream
//! `derive(run_seed, [TAG_DYNAMICS, t, i])`, so results do not depend on the
//! order in which agents or repetitions are evaluated.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::landscape::{NkLandscape, Solution};
use crate::seed::{derive, derive_rng, SimRng, TAG_DYNAMICS, TAG_LANDSCAPE, TAG_POPULATION};
use crate::stats::mean_se;
use crate::strategy::{
    decide_best_member, decide_conformity, hill_climb, sample_neighbors_into, Rule, SocialOutcome,
    StrategySpec,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub n_agents: usize,
    pub n_components: usize,
    pub k_interdependence: usize,
    pub strategy: StrategySpec,
    pub t_max: usize,
    pub repetitions: usize,
    pub base_seed: u64,
}

impl SimConfig {
    pub fn new(n_components: usize, k_interdependence: usize, strategy: StrategySpec) -> Self {
        SimConfig {
            n_agents: 100,
            n_components,
            k_interdependence,
            strategy,
            t_max: 200,
            repetitions: 200,
            base_seed: 0,
        }
    }

    pub fn validate(&self, graph: &Graph) -> Result<()> {
        if self.n_agents != graph.n_nodes() {
            return Err(Error::param(format!(
                "{} agents on a network of {} nodes",
                self.n_agents,
                graph.n_nodes()
            )));
        }
        if self.t_max == 0 {
            return Err(Error::param("t_max must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(Error::param("repetitions must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PopulationState {
    solutions: Vec<Solution>,
    payoffs: Vec<f64>,
    t: usize,
}

impl PopulationState {
    pub fn from_solutions(landscape: &NkLandscape, solutions: Vec<Solution>) -> Result<Self> {
        let payoffs = solutions
            .iter()
            .map(|s| landscape.payoff(s))
            .collect::<Result<_>>()?;
        Ok(PopulationState {
            solutions,
            payoffs,
            t: 0,
        })
    }

    pub fn solutions(&self) -> &[Solution] {
        &self.solutions
    }

    pub fn payoffs(&self) -> &[f64] {
        &self.payoffs
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n_agents(&self) -> usize {
        self.solutions.len()
    }

    pub fn unique_solutions(&self) -> usize {
        let mut ids: Vec<u32> = self.solutions.iter().map(Solution::index).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    pub fn record(&self) -> StepRecord {
        let n = self.payoffs.len() as f64;
        StepRecord {
            mean_payoff: self.payoffs.iter().sum::<f64>() / n,
            max_payoff: self.payoffs.iter().copied().fold(0.0, f64::max),
            unique_solutions: self.unique_solutions(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord {
    pub mean_payoff: f64,
    pub max_payoff: f64,
    pub unique_solutions: usize,
}

/// Records for `t = 1..=t_max`; `records[t - 1]` is the state after step `t`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    pub records: Vec<StepRecord>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn at(&self, t: usize) -> &StepRecord {
        &self.records[t - 1]
    }

    pub fn last(&self) -> &StepRecord {
        self.records.last().expect("non-empty series")
    }

    /// First step whose mean payoff reaches `threshold`.
    pub fn first_passage(&self, threshold: f64) -> Option<usize> {
        self.records
            .iter()
            .position(|r| r.mean_payoff >= threshold)
            .map(|i| i + 1)
    }
}

/// Independent uniform random solutions for every agent.
pub fn init_population(
    landscape: &NkLandscape,
    n_agents: usize,
    rng: &mut SimRng,
) -> PopulationState {
    let n = landscape.n_components();
    let solutions: Vec<Solution> = (0..n_agents)
        .map(|_| Solution::random(n, rng).expect("landscape N is a valid length"))
        .collect();
    let payoffs = solutions
        .iter()
        .map(|s| landscape.payoff_unchecked(s))
        .collect();
    PopulationState {
        solutions,
        payoffs,
        t: 0,
    }
}

/// Seed of the stream family used for step `t` (1-based) of a run.
pub fn step_seed(run_seed: u64, t: usize) -> u64 {
    derive(run_seed, &[TAG_DYNAMICS, t as u64])
}

/// Seed of repetition `rep` in a batch.
pub fn repetition_seed(base_seed: u64, rep: usize) -> u64 {
    derive(base_seed, &[rep as u64])
}

struct Scratch {
    neighbors: Vec<usize>,
    sample: Vec<(Solution, f64)>,
}

/// Next solution and payoff of `agent`, computed from the snapshot `state`.
///
/// Individual learners hill-climb. Everyone else samples neighbors and
/// applies their decision rule; a candidate strictly better than the
/// agent's own payoff is adopted. Otherwise random copiers stay put and the
/// remaining strategies hill-climb.
pub fn agent_update(
    state: &PopulationState,
    landscape: &NkLandscape,
    graph: &Graph,
    strategy: &StrategySpec,
    step_seed: u64,
    agent: usize,
) -> (Solution, f64) {
    let mut scratch = Scratch {
        neighbors: Vec::with_capacity(strategy.sample_size()),
        sample: Vec::with_capacity(strategy.sample_size()),
    };
    update_with(
        state,
        landscape,
        graph,
        strategy,
        step_seed,
        agent,
        &mut scratch,
    )
}

fn update_with(
    state: &PopulationState,
    landscape: &NkLandscape,
    graph: &Graph,
    strategy: &StrategySpec,
    step_seed: u64,
    agent: usize,
    scratch: &mut Scratch,
) -> (Solution, f64) {
    let mut rng = derive_rng(step_seed, &[agent as u64]);
    let own = state.solutions[agent];
    let own_payoff = state.payoffs[agent];
    if strategy.rule == Rule::Individual {
        return hill_climb(landscape, own, own_payoff, &mut rng);
    }

    let sampled = sample_neighbors_into(
        graph,
        agent,
        strategy.sample_size(),
        &mut rng,
        &mut scratch.neighbors,
    );
    if sampled {
        scratch.sample.clear();
        scratch.sample.extend(
            scratch
                .neighbors
                .iter()
                .map(|&j| (state.solutions[j], state.payoffs[j])),
        );
        let outcome = match strategy.rule {
            Rule::BestMember => decide_best_member(&scratch.sample, &mut rng),
            Rule::Conformity => {
                decide_conformity(&scratch.sample, strategy.conformity_tie, &mut rng)
            }
            // a single neighbor is its own candidate
            Rule::RandomCopy => Ok(SocialOutcome::Candidate(scratch.sample[0].0)),
            Rule::Individual => unreachable!(),
        }
        .expect("sample is non-empty");
        if let SocialOutcome::Candidate(candidate) = outcome {
            let value = landscape.payoff_unchecked(&candidate);
            if value > own_payoff {
                return (candidate, value);
            }
        }
    }
    if strategy.rule == Rule::RandomCopy {
        return (own, own_payoff);
    }
    hill_climb(landscape, own, own_payoff, &mut rng)
}

/// Advances every agent one step from the same snapshot.
pub fn step(
    state: &PopulationState,
    landscape: &NkLandscape,
    graph: &Graph,
    strategy: &StrategySpec,
    step_seed: u64,
) -> PopulationState {
    let mut scratch = Scratch {
        neighbors: Vec::with_capacity(strategy.sample_size()),
        sample: Vec::with_capacity(strategy.sample_size()),
    };
    let (solutions, payoffs) = (0..state.n_agents())
        .map(|agent| {
            update_with(
                state,
                landscape,
                graph,
                strategy,
                step_seed,
                agent,
                &mut scratch,
            )
        })
        .unzip();
    PopulationState {
        solutions,
        payoffs,
        t: state.t + 1,
    }
}

/// One run from a fresh random population.
pub fn run(
    config: &SimConfig,
    landscape: &NkLandscape,
    graph: &Graph,
    run_seed: u64,
) -> Result<TimeSeries> {
    run_observed(config, landscape, graph, run_seed, |_| {})
}

/// [`run`], calling `observe` with the initial state and after every step.
pub fn run_observed(
    config: &SimConfig,
    landscape: &NkLandscape,
    graph: &Graph,
    run_seed: u64,
    observe: impl FnMut(&PopulationState),
) -> Result<TimeSeries> {
    run_with_hooks(config, landscape, graph, run_seed, |_, _| None, observe)
}

/// [`run_observed`] with a landscape hook. Before step `t`, `replace(t,
/// current)` may return a new landscape of the same N; agents keep their
/// solutions and their payoffs are re-evaluated on it.
pub fn run_with_hooks(
    config: &SimConfig,
    landscape: &NkLandscape,
    graph: &Graph,
    run_seed: u64,
    mut replace: impl FnMut(usize, &NkLandscape) -> Option<NkLandscape>,
    mut observe: impl FnMut(&PopulationState),
) -> Result<TimeSeries> {
    config.validate(graph)?;
    if landscape.n_components() != config.n_components
        || landscape.k_interdependence() != config.k_interdependence
    {
        return Err(Error::param(format!(
            "landscape is N={} K={}, config wants N={} K={}",
            landscape.n_components(),
            landscape.k_interdependence(),
            config.n_components,
            config.k_interdependence
        )));
    }
    let mut rng = derive_rng(run_seed, &[TAG_POPULATION]);
    let mut state = init_population(landscape, config.n_agents, &mut rng);
    observe(&state);
    let mut owned: Option<NkLandscape> = None;
    let mut records = Vec::with_capacity(config.t_max);
    for t in 1..=config.t_max {
        let current = owned.as_ref().unwrap_or(landscape);
        if let Some(next) = replace(t, current) {
            let mut refreshed = PopulationState::from_solutions(&next, state.solutions)?;
            refreshed.t = state.t;
            state = refreshed;
            owned = Some(next);
        }
        let current = owned.as_ref().unwrap_or(landscape);
        state = step(
            &state,
            current,
            graph,
            &config.strategy,
            step_seed(run_seed, t),
        );
        observe(&state);
        records.push(state.record());
    }
    Ok(TimeSeries { records })
}

/// The landscape used by repetition `rep` of a batch.
pub fn repetition_landscape(config: &SimConfig, rep: usize) -> Result<NkLandscape> {
    let seed = repetition_seed(config.base_seed, rep);
    NkLandscape::new(
        config.n_components,
        config.k_interdependence,
        &mut derive_rng(seed, &[TAG_LANDSCAPE]),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepSummary {
    pub t: usize,
    pub mean_payoff: f64,
    pub se_payoff: f64,
    pub mean_max_payoff: f64,
    pub mean_unique: f64,
    pub se_unique: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchResult {
    pub series: Vec<TimeSeries>,
    pub summary: Vec<StepSummary>,
}

impl BatchResult {
    /// Final-step mean payoff of every repetition.
    pub fn finals(&self) -> Vec<f64> {
        self.series.iter().map(|s| s.last().mean_payoff).collect()
    }

    pub fn at(&self, t: usize) -> &StepSummary {
        &self.summary[t - 1]
    }

    pub fn final_summary(&self) -> &StepSummary {
        self.summary.last().expect("t_max >= 1")
    }
}

/// Runs every repetition on a fresh landscape and the shared `graph`.
///
/// Repetition `r` uses seed `derive(base_seed, [r])`; its landscape is drawn
/// from the `TAG_LANDSCAPE` sub-stream of that seed.
pub fn run_batch(config: &SimConfig, graph: &Graph, execution: Execution) -> Result<BatchResult> {
    config.validate(graph)?;
    let one = |rep: usize| -> Result<TimeSeries> {
        let landscape = repetition_landscape(config, rep)?;
        run(
            config,
            &landscape,
            graph,
            repetition_seed(config.base_seed, rep),
        )
    };
    let series: Vec<TimeSeries> = match execution {
        Execution::Sequential => (0..config.repetitions).map(one).collect::<Result<_>>()?,
        Execution::Parallel => (0..config.repetitions)
            .into_par_iter()
            .map(one)
            .collect::<Result<_>>()?,
    };
    Ok(BatchResult {
        summary: summarize(&series),
        series,
    })
}

pub fn summarize(series: &[TimeSeries]) -> Vec<StepSummary> {
    let t_max = series.first().map_or(0, TimeSeries::len);
    let mut payoffs = Vec::with_capacity(series.len());
    let mut uniques = Vec::with_capacity(series.len());
    (1..=t_max)
        .map(|t| {
            payoffs.clear();
            uniques.clear();
            let mut max_sum = 0.0;
            for s in series {
                let r = s.at(t);
                payoffs.push(r.mean_payoff);
                uniques.push(r.unique_solutions as f64);
                max_sum += r.max_payoff;
            }
            let (mean_payoff, se_payoff) = mean_se(&payoffs);
            let (mean_unique, se_unique) = mean_se(&uniques);
            StepSummary {
                t,
                mean_payoff,
                se_payoff,
                mean_max_payoff: max_sum / series.len() as f64,
                mean_unique,
                se_unique,
            }
        })
        .collect()
}
