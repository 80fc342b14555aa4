//! Social-learning strategies as search, stopping, and decision rules, plus
//! the individual hill-climbing step.
//!
//! Search and stopping are shared: an agent looks up `s` distinct random
//! neighbors. Strategies differ in the decision rule applied to that sample.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::landscape::{NkLandscape, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// Copy the highest-payoff solution in the sample.
    BestMember,
    /// Copy the most frequent solution in the sample.
    Conformity,
    /// Copy one random neighbor if better; never learn individually.
    RandomCopy,
    /// Hill-climb only.
    Individual,
}

impl Rule {
    pub const ALL: [Rule; 4] = [
        Rule::BestMember,
        Rule::Conformity,
        Rule::RandomCopy,
        Rule::Individual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::BestMember => "best_member",
            Rule::Conformity => "conformity",
            Rule::RandomCopy => "random_copy",
            Rule::Individual => "individual",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| {
            Error::param(format!(
                "unknown strategy `{s}`, expected one of best_member, conformity, random_copy, individual"
            ))
        })
    }
}

/// What conformity does when several solutions share the highest frequency
/// (and at least one solution is less frequent).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ConformityTie {
    /// Pick uniformly among the modal solutions.
    #[default]
    Modes,
    /// Fall back to individual learning.
    Fallback,
}

impl FromStr for ConformityTie {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "modes" => Ok(ConformityTie::Modes),
            "fallback" => Ok(ConformityTie::Fallback),
            _ => Err(Error::param(format!(
                "unknown conformity tie rule `{s}`, expected modes or fallback"
            ))),
        }
    }
}

impl fmt::Display for ConformityTie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConformityTie::Modes => "modes",
            ConformityTie::Fallback => "fallback",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StrategySpec {
    pub rule: Rule,
    sample_size: usize,
    pub conformity_tie: ConformityTie,
}

impl StrategySpec {
    /// `sample_size` must be positive for the sampling rules; it is ignored
    /// (and normalized) for `random_copy` (always 1) and `individual` (0).
    pub fn new(rule: Rule, sample_size: usize) -> Result<Self> {
        let sample_size = match rule {
            Rule::RandomCopy => 1,
            Rule::Individual => 0,
            _ if sample_size == 0 => {
                return Err(Error::param(format!(
                    "{rule} needs a sample size of at least 1"
                )))
            }
            _ => sample_size,
        };
        Ok(StrategySpec {
            rule,
            sample_size,
            conformity_tie: ConformityTie::default(),
        })
    }

    pub fn with_conformity_tie(mut self, tie: ConformityTie) -> Self {
        self.conformity_tie = tie;
        self
    }

    pub fn best_member(s: usize) -> Self {
        Self::new(Rule::BestMember, s).expect("positive sample size")
    }

    pub fn conformity(s: usize) -> Self {
        Self::new(Rule::Conformity, s).expect("positive sample size")
    }

    pub fn random_copy() -> Self {
        Self::new(Rule::RandomCopy, 1).expect("valid")
    }

    pub fn individual() -> Self {
        Self::new(Rule::Individual, 0).expect("valid")
    }

    /// Number of neighbors looked up per step.
    #[inline]
    pub fn sample_size(&self) -> usize {
        self.sample_size
    }

    /// Short label such as `conformity_s3` or `individual`.
    pub fn label(&self) -> String {
        match self.rule {
            Rule::BestMember | Rule::Conformity => format!("{}_s{}", self.rule, self.sample_size),
            _ => self.rule.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SocialOutcome {
    Candidate(Solution),
    FallbackIndividual,
}

/// Uniform sample without replacement of `min(s, degree)` neighbors of
/// `agent`. `None` when the agent has no neighbors.
pub fn sample_neighbors<R: Rng + ?Sized>(
    g: &Graph,
    agent: usize,
    s: usize,
    rng: &mut R,
) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(s);
    sample_neighbors_into(g, agent, s, rng, &mut out).then_some(out)
}

pub(crate) fn sample_neighbors_into<R: Rng + ?Sized>(
    g: &Graph,
    agent: usize,
    s: usize,
    rng: &mut R,
    out: &mut Vec<usize>,
) -> bool {
    out.clear();
    let adj = g.neighbors(agent);
    if adj.is_empty() {
        return false;
    }
    let amount = s.min(adj.len());
    if amount == adj.len() {
        out.extend_from_slice(adj);
    } else {
        out.extend(
            rand::seq::index::sample(rng, adj.len(), amount)
                .into_iter()
                .map(|i| adj[i]),
        );
    }
    true
}

fn require_nonempty(sample: &[(Solution, f64)]) -> Result<()> {
    if sample.is_empty() {
        Err(Error::param("decision rule applied to an empty sample"))
    } else {
        Ok(())
    }
}

/// Candidate with the highest payoff; ties broken uniformly.
pub fn decide_best_member<R: Rng + ?Sized>(
    sample: &[(Solution, f64)],
    rng: &mut R,
) -> Result<SocialOutcome> {
    require_nonempty(sample)?;
    let best = sample.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
    let ties = sample.iter().filter(|e| e.1 == best).count();
    let pick = if ties == 1 {
        0
    } else {
        rng.random_range(0..ties)
    };
    let chosen = sample
        .iter()
        .filter(|e| e.1 == best)
        .nth(pick)
        .expect("pick below tie count");
    Ok(SocialOutcome::Candidate(chosen.0))
}

/// Most frequent solution in the sample.
///
/// When the sample holds two or more distinct solutions that are all equally
/// frequent, no solution stands out and the agent falls back to individual
/// learning. A unanimous sample always yields its solution.
pub fn decide_conformity<R: Rng + ?Sized>(
    sample: &[(Solution, f64)],
    tie: ConformityTie,
    rng: &mut R,
) -> Result<SocialOutcome> {
    require_nonempty(sample)?;
    // (solution, count), in order of first appearance
    let mut counts: Vec<(Solution, usize)> = Vec::with_capacity(sample.len());
    for (sol, _) in sample {
        match counts.iter_mut().find(|(s, _)| s == sol) {
            Some(entry) => entry.1 += 1,
            None => counts.push((*sol, 1)),
        }
    }
    let top = counts.iter().map(|c| c.1).max().expect("nonempty");
    let modes = counts.iter().filter(|c| c.1 == top).count();
    if counts.len() > 1 && modes == counts.len() {
        return Ok(SocialOutcome::FallbackIndividual);
    }
    if modes > 1 && tie == ConformityTie::Fallback {
        return Ok(SocialOutcome::FallbackIndividual);
    }
    let pick = if modes == 1 {
        0
    } else {
        rng.random_range(0..modes)
    };
    let chosen = counts
        .iter()
        .filter(|c| c.1 == top)
        .nth(pick)
        .expect("pick below mode count");
    Ok(SocialOutcome::Candidate(chosen.0))
}

/// The single sampled solution.
pub fn decide_random_copy(sample: &[(Solution, f64)]) -> Result<SocialOutcome> {
    match sample {
        [(sol, _)] => Ok(SocialOutcome::Candidate(*sol)),
        _ => Err(Error::param(format!(
            "random copying looks at exactly one neighbor, got {}",
            sample.len()
        ))),
    }
}

/// Flips one uniformly chosen component; keeps the flip only if the payoff
/// strictly increases.
pub fn individual_step<R: Rng + ?Sized>(
    landscape: &NkLandscape,
    sol: &Solution,
    rng: &mut R,
) -> Result<Solution> {
    let current = landscape.payoff(sol)?;
    Ok(hill_climb(landscape, *sol, current, rng).0)
}

#[inline]
pub(crate) fn hill_climb<R: Rng + ?Sized>(
    landscape: &NkLandscape,
    sol: Solution,
    payoff: f64,
    rng: &mut R,
) -> (Solution, f64) {
    let flipped = sol.flipped(rng.random_range(0..sol.len()));
    let value = landscape.payoff_unchecked(&flipped);
    if value > payoff {
        (flipped, value)
    } else {
        (sol, payoff)
    }
}
