//! Degree-preserving rewiring and metric-extremizing hill climbing.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use super::{random_regular, Graph, Metric};
use crate::error::{Error, Result};
use crate::seed::{derive, rng_from_seed, TAG_GRAPH};

/// Attempts at drawing a valid swap before reporting none is available.
const SWAP_RETRIES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Min,
    Max,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Min => "min",
            Direction::Max => "max",
        }
    }

    /// Strict improvement of `candidate` over `current`.
    #[inline]
    pub fn improves(self, candidate: f64, current: f64) -> bool {
        match self {
            Direction::Min => candidate < current,
            Direction::Max => candidate > current,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Direction::Min),
            "max" => Ok(Direction::Max),
            _ => Err(Error::param(format!(
                "unknown direction `{s}`, expected min or max"
            ))),
        }
    }
}

/// Replacement of two edges by two others on the same four endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwapProposal {
    pub removed: [(usize, usize); 2],
    pub added: [(usize, usize); 2],
}

impl SwapProposal {
    /// Validates the swap of `(a, b)`, `(c, d)` into `(a, d)`, `(c, b)`, or
    /// into `(a, c)`, `(b, d)` when `crossed` is set. Returns `None` if the
    /// endpoints are not four distinct nodes, either removed edge is absent,
    /// or either new edge already exists.
    pub fn between(
        g: &Graph,
        (a, b): (usize, usize),
        (c, d): (usize, usize),
        crossed: bool,
    ) -> Option<Self> {
        let ends = [a, b, c, d];
        if ends.iter().any(|&x| x >= g.n_nodes()) {
            return None;
        }
        for i in 0..4 {
            if ends[i + 1..].contains(&ends[i]) {
                return None;
            }
        }
        if !g.has_edge(a, b) || !g.has_edge(c, d) {
            return None;
        }
        let added = if crossed {
            [(a, c), (b, d)]
        } else {
            [(a, d), (c, b)]
        };
        if added.iter().any(|&(u, v)| g.has_edge(u, v)) {
            return None;
        }
        Some(SwapProposal {
            removed: [(a, b), (c, d)],
            added,
        })
    }

    pub fn apply(&self, g: &mut Graph) {
        for &(u, v) in &self.removed {
            g.delete_edge(u, v);
        }
        for &(u, v) in &self.added {
            g.insert_edge(u, v);
        }
    }

    pub fn revert(&self, g: &mut Graph) {
        for &(u, v) in &self.added {
            g.delete_edge(u, v);
        }
        for &(u, v) in &self.removed {
            g.insert_edge(u, v);
        }
    }

    /// The proposed graph, leaving `g` untouched.
    pub fn applied_to(&self, g: &Graph) -> Graph {
        let mut out = g.clone();
        self.apply(&mut out);
        out
    }
}

/// Uniform sampling of oriented edges through cumulative degrees. Valid for
/// as long as the degree sequence is unchanged.
struct EdgeSampler {
    cumulative: Vec<usize>,
}

impl EdgeSampler {
    fn new(g: &Graph) -> Self {
        let mut acc = 0;
        let cumulative = (0..g.n_nodes())
            .map(|u| {
                acc += g.degree(u);
                acc
            })
            .collect();
        EdgeSampler { cumulative }
    }

    fn total(&self) -> usize {
        self.cumulative.last().copied().unwrap_or(0)
    }

    fn sample<R: Rng + ?Sized>(&self, g: &Graph, rng: &mut R) -> (usize, usize) {
        let r = rng.random_range(0..self.total());
        let u = self.cumulative.partition_point(|&c| c <= r);
        let offset = r - if u == 0 { 0 } else { self.cumulative[u - 1] };
        (u, g.neighbors(u)[offset])
    }

    fn propose<R: Rng + ?Sized>(&self, g: &Graph, rng: &mut R) -> Option<SwapProposal> {
        if self.total() < 4 {
            return None;
        }
        for _ in 0..SWAP_RETRIES {
            let e1 = self.sample(g, rng);
            let e2 = self.sample(g, rng);
            let crossed = rng.random_bool(0.5);
            if let Some(p) = SwapProposal::between(g, e1, e2, crossed) {
                return Some(p);
            }
        }
        None
    }
}

/// Draws a random valid double-edge swap, or `None` when none was found
/// within a bounded number of attempts.
pub fn double_edge_swap<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Option<SwapProposal> {
    EdgeSampler::new(g).propose(g, rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RewireBudget {
    /// Swap proposals per restart.
    pub iterations: usize,
    pub restarts: usize,
}

impl Default for RewireBudget {
    fn default() -> Self {
        RewireBudget {
            iterations: 50_000,
            restarts: 10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RestartOutcome {
    pub start: Graph,
    pub graph: Graph,
    pub initial_objective: f64,
    pub objective: f64,
    pub proposals: usize,
    /// Objective after each accepted swap, beginning with the start value.
    pub trace: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct RewireOutcome {
    pub graph: Graph,
    pub objective: f64,
    pub best_restart: usize,
    pub restarts: Vec<RestartOutcome>,
}

/// Hill-climbs the node mean of `metric` (see [`Metric::objective`]) over
/// connected, degree-preserving swaps. A swap is kept only if the result
/// stays connected and strictly improves the objective in `direction`.
///
/// Restart 0 climbs from `g0`; every later restart climbs from a fresh
/// random regular graph of the same size and degree drawn from a stream
/// derived from `(seed, restart)`. The best final graph wins, ties going to
/// the lowest restart index.
pub fn rewire_optimize(
    g0: &Graph,
    metric: Metric,
    direction: Direction,
    budget: RewireBudget,
    seed: u64,
) -> Result<RewireOutcome> {
    if !g0.is_connected() {
        return Err(Error::param("rewiring needs a connected starting graph"));
    }
    if budget.restarts == 0 {
        return Err(Error::param("at least one restart is required"));
    }
    let degree = g0.regular_degree();
    if budget.restarts > 1 && degree.is_none() {
        return Err(Error::param(
            "restarts from fresh random regular graphs need a regular starting graph",
        ));
    }

    let restarts: Vec<RestartOutcome> = (0..budget.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_from_seed(derive(seed, &[TAG_GRAPH, r as u64]));
            let start = if r == 0 {
                g0.clone()
            } else {
                random_regular(g0.n_nodes(), degree.expect("checked above"), &mut rng)?
            };
            climb(start, metric, direction, budget.iterations, &mut rng)
        })
        .collect::<Result<_>>()?;

    let best_restart = (0..restarts.len())
        .reduce(|best, r| {
            if direction.improves(restarts[r].objective, restarts[best].objective) {
                r
            } else {
                best
            }
        })
        .expect("at least one restart");
    Ok(RewireOutcome {
        graph: restarts[best_restart].graph.clone(),
        objective: restarts[best_restart].objective,
        best_restart,
        restarts,
    })
}

fn climb<R: Rng + ?Sized>(
    start: Graph,
    metric: Metric,
    direction: Direction,
    iterations: usize,
    rng: &mut R,
) -> Result<RestartOutcome> {
    let mut g = start.clone();
    let sampler = EdgeSampler::new(&g);
    let initial = metric.objective(&g)?;
    let mut current = initial;
    let mut trace = vec![initial];
    let mut proposals = 0;
    for _ in 0..iterations {
        let Some(swap) = sampler.propose(&g, rng) else {
            break;
        };
        proposals += 1;
        swap.apply(&mut g);
        if g.is_connected() {
            let value = metric.objective(&g)?;
            if direction.improves(value, current) {
                current = value;
                trace.push(value);
                continue;
            }
        }
        swap.revert(&mut g);
    }
    Ok(RestartOutcome {
        start,
        graph: g,
        initial_objective: initial,
        objective: current,
        proposals,
        trace,
    })
}
