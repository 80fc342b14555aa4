//! Declarative experiment plans (TOML).
//!
//! ```toml
//! [landscape]
//! N = 15
//! K = [0, 7]
//!
//! [networks]
//! complete = { kind = "complete" }
//! lattice = { kind = "lattice", degree = 19 }
//! max_clustering = { kind = "rewired", metric = "clustering", direction = "max", file = "nets/max_clustering.edges" }
//! mine = "nets/some_graph.edges"
//!
//! [strategies]
//! rules = ["best_member", "conformity"]
//! s = [3, 9]
//! conformity_tie = "modes"   # optional: modes | fallback
//!
//! [run]
//! t_max = 200
//! reps = 200
//! seed = 1
//! agents = 100               # optional
//!
//! [rewire]                   # optional budget for rewired networks without a file
//! iterations = 50000
//! restarts = 10
//! ```
//!
//! Cells expand in the order K, then network, then rule, then sample size.

use std::fs;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::Deserialize;

use crate::engine::SimConfig;
use crate::error::{Error, Result};
use crate::graph::{Direction, Metric, NetworkKind, NetworkSpec, RewireBudget};
use crate::strategy::{ConformityTie, Rule, StrategySpec};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlan {
    landscape: RawLandscape,
    networks: IndexMap<String, toml::Value>,
    strategies: RawStrategies,
    run: RawRun,
    #[serde(default)]
    rewire: Option<RawRewire>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLandscape {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "K")]
    k: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStrategies {
    rules: Vec<RawRule>,
    #[serde(default)]
    s: Vec<usize>,
    #[serde(default)]
    conformity_tie: Option<RawTie>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawRule {
    BestMember,
    Conformity,
    RandomCopy,
    Individual,
}

impl From<RawRule> for Rule {
    fn from(r: RawRule) -> Rule {
        match r {
            RawRule::BestMember => Rule::BestMember,
            RawRule::Conformity => Rule::Conformity,
            RawRule::RandomCopy => Rule::RandomCopy,
            RawRule::Individual => Rule::Individual,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawTie {
    Modes,
    Fallback,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    t_max: usize,
    reps: usize,
    seed: u64,
    #[serde(default)]
    agents: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRewire {
    iterations: usize,
    restarts: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetwork {
    kind: RawKind,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    degree: Option<usize>,
    #[serde(default)]
    metric: Option<RawMetric>,
    #[serde(default)]
    direction: Option<RawDirection>,
    #[serde(default)]
    file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum RawKind {
    Complete,
    Lattice,
    RandomRegular,
    Rewired,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawMetric {
    Closeness,
    Betweenness,
    Clustering,
    Constraint,
}

impl From<RawMetric> for Metric {
    fn from(m: RawMetric) -> Metric {
        match m {
            RawMetric::Closeness => Metric::Closeness,
            RawMetric::Betweenness => Metric::Betweenness,
            RawMetric::Clustering => Metric::Clustering,
            RawMetric::Constraint => Metric::Constraint,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawDirection {
    Min,
    Max,
}

/// Where a plan network comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NetworkSource {
    Spec(NetworkSpec),
    /// Edge-list file of unknown provenance.
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanNetwork {
    pub name: String,
    pub source: NetworkSource,
}

impl PlanNetwork {
    pub fn kind(&self) -> Option<NetworkKind> {
        match &self.source {
            NetworkSource::Spec(spec) => Some(spec.kind),
            NetworkSource::File(_) => None,
        }
    }
}

/// One experiment cell: a network, a K value, and a strategy.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub name: String,
    /// Index into [`ExperimentPlan::networks`].
    pub network: usize,
    pub config: SimConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentPlan {
    pub n_agents: usize,
    pub n_components: usize,
    pub k_values: Vec<usize>,
    pub networks: Vec<PlanNetwork>,
    pub strategies: Vec<StrategySpec>,
    pub t_max: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub rewire: RewireBudget,
    pub cells: Vec<Cell>,
}

impl ExperimentPlan {
    /// Builds the cross product of `k_values × networks × strategies`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n_agents: usize,
        n_components: usize,
        k_values: Vec<usize>,
        networks: Vec<PlanNetwork>,
        strategies: Vec<StrategySpec>,
        t_max: usize,
        repetitions: usize,
        seed: u64,
        rewire: RewireBudget,
    ) -> Result<Self> {
        let mut plan = ExperimentPlan {
            n_agents,
            n_components,
            k_values,
            networks,
            strategies,
            t_max,
            repetitions,
            seed,
            rewire,
            cells: Vec::new(),
        };
        plan.expand()?;
        Ok(plan)
    }

    fn expand(&mut self) -> Result<()> {
        let mut cells = Vec::new();
        for &k in &self.k_values {
            for (idx, net) in self.networks.iter().enumerate() {
                for strategy in &self.strategies {
                    let config = SimConfig {
                        n_agents: self.n_agents,
                        n_components: self.n_components,
                        k_interdependence: k,
                        strategy: *strategy,
                        t_max: self.t_max,
                        repetitions: self.repetitions,
                        base_seed: self.seed,
                    };
                    cells.push(Cell {
                        name: format!("{}__{}__K{}", net.name, strategy.label(), k),
                        network: idx,
                        config,
                    });
                }
            }
        }
        let mut names: Vec<&str> = cells.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Config {
                key: "networks".into(),
                message: format!("duplicate cell name `{}`", w[0]),
            });
        }
        self.cells = cells;
        Ok(())
    }

    /// Replaces the repetition count and/or seed in every cell.
    pub fn with_overrides(mut self, reps: Option<usize>, seed: Option<u64>) -> Result<Self> {
        if let Some(r) = reps {
            if r == 0 {
                return Err(Error::Config {
                    key: "run.reps".into(),
                    message: "must be at least 1".into(),
                });
            }
            self.repetitions = r;
        }
        if let Some(s) = seed {
            self.seed = s;
        }
        self.expand()?;
        Ok(self)
    }
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<ExperimentPlan> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    parse_plan_str(&text, base)
}

/// Parses a plan; relative network file paths resolve against `base_dir`.
pub fn parse_plan_str(text: &str, base_dir: &Path) -> Result<ExperimentPlan> {
    let de = toml::Deserializer::new(text);
    let raw: RawPlan = serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
        key: path_or_root(e.path().to_string()),
        message: e.into_inner().message().trim().to_string(),
    })?;

    let landscape = raw.landscape;
    if landscape.k.is_empty() {
        return cfg_err("landscape.K", "needs at least one value");
    }
    if let Some(&k) = landscape.k.iter().find(|&&k| k >= landscape.n) {
        return cfg_err(
            "landscape.K",
            format!("K={k} must be below N={}", landscape.n),
        );
    }
    if landscape.n == 0 || landscape.n > crate::landscape::ENUMERATION_LIMIT {
        return cfg_err(
            "landscape.N",
            format!(
                "must be in 1..={}, got {}",
                crate::landscape::ENUMERATION_LIMIT,
                landscape.n
            ),
        );
    }

    let run = raw.run;
    let n_agents = run.agents.unwrap_or(100);
    if run.t_max == 0 {
        return cfg_err("run.t_max", "must be at least 1");
    }
    if run.reps == 0 {
        return cfg_err("run.reps", "must be at least 1");
    }

    let strategies = expand_strategies(&raw.strategies)?;

    if raw.networks.is_empty() {
        return cfg_err("networks", "needs at least one network");
    }
    let mut networks = Vec::with_capacity(raw.networks.len());
    for (name, value) in raw.networks {
        let key = format!("networks.{name}");
        if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == ',' || c == '/') {
            return cfg_err(
                &key,
                "network names may not contain spaces, commas or slashes",
            );
        }
        let source = match value {
            toml::Value::String(p) => NetworkSource::File(base_dir.join(p)),
            other => {
                let raw_net: RawNetwork =
                    serde_path_to_error::deserialize(other).map_err(|e| Error::Config {
                        key: join_key(&key, &e.path().to_string()),
                        message: e.into_inner().message().trim().to_string(),
                    })?;
                NetworkSource::Spec(network_spec(&key, raw_net, n_agents, base_dir)?)
            }
        };
        networks.push(PlanNetwork { name, source });
    }

    let rewire = raw
        .rewire
        .map(|r| RewireBudget {
            iterations: r.iterations,
            restarts: r.restarts,
        })
        .unwrap_or_default();
    if rewire.restarts == 0 {
        return cfg_err("rewire.restarts", "must be at least 1");
    }

    ExperimentPlan::new(
        n_agents,
        landscape.n,
        landscape.k,
        networks,
        strategies,
        run.t_max,
        run.reps,
        run.seed,
        rewire,
    )
}

fn expand_strategies(raw: &RawStrategies) -> Result<Vec<StrategySpec>> {
    if raw.rules.is_empty() {
        return cfg_err("strategies.rules", "needs at least one rule");
    }
    let tie = match raw.conformity_tie {
        Some(RawTie::Fallback) => ConformityTie::Fallback,
        _ => ConformityTie::Modes,
    };
    let mut out: Vec<StrategySpec> = Vec::new();
    for &rule in &raw.rules {
        let rule = Rule::from(rule);
        let sizes: Vec<usize> = match rule {
            Rule::BestMember | Rule::Conformity => {
                if raw.s.is_empty() {
                    return cfg_err("strategies.s", format!("{rule} needs sample sizes"));
                }
                raw.s.clone()
            }
            Rule::RandomCopy | Rule::Individual => vec![1],
        };
        for s in sizes {
            let spec = StrategySpec::new(rule, s)
                .map_err(|e| Error::Config {
                    key: "strategies.s".into(),
                    message: e.to_string(),
                })?
                .with_conformity_tie(tie);
            if !out.contains(&spec) {
                out.push(spec);
            }
        }
    }
    Ok(out)
}

fn network_spec(
    key: &str,
    raw: RawNetwork,
    n_agents: usize,
    base_dir: &Path,
) -> Result<NetworkSpec> {
    let n = raw.n.unwrap_or(n_agents);
    if n != n_agents {
        return cfg_err(
            &format!("{key}.n"),
            format!("network has {n} nodes but the run has {n_agents} agents"),
        );
    }
    let kind = match raw.kind {
        RawKind::Complete => NetworkKind::Complete,
        RawKind::Lattice => NetworkKind::Lattice,
        RawKind::RandomRegular => NetworkKind::RandomRegular,
        RawKind::Rewired => {
            let metric = raw.metric.ok_or_else(|| {
                missing(&format!("{key}.metric"), "rewired networks need a metric")
            })?;
            let direction = raw.direction.ok_or_else(|| {
                missing(
                    &format!("{key}.direction"),
                    "rewired networks need a direction",
                )
            })?;
            NetworkKind::Rewired {
                metric: metric.into(),
                direction: match direction {
                    RawDirection::Min => Direction::Min,
                    RawDirection::Max => Direction::Max,
                },
            }
        }
    };
    let degree = match kind {
        NetworkKind::Complete => n.saturating_sub(1),
        _ => raw
            .degree
            .ok_or_else(|| missing(&format!("{key}.degree"), "missing field `degree`"))?,
    };
    let spec = NetworkSpec {
        kind,
        n_nodes: n,
        degree,
        source: raw.file.map(|f| base_dir.join(f)),
    };
    spec.validate().map_err(|e| Error::Config {
        key: format!("{key}.degree"),
        message: e.to_string(),
    })?;
    Ok(spec)
}

fn missing(key: &str, message: &str) -> Error {
    Error::Config {
        key: key.into(),
        message: message.into(),
    }
}

fn cfg_err<T>(key: &str, message: impl Into<String>) -> Result<T> {
    Err(Error::Config {
        key: key.into(),
        message: message.into(),
    })
}

fn path_or_root(p: String) -> String {
    if p == "." || p.is_empty() {
        "<root>".into()
    } else {
        p
    }
}

fn join_key(prefix: &str, inner: &str) -> String {
    if inner == "." || inner.is_empty() {
        prefix.to_string()
    } else {
        format!("{prefix}.{inner}")
    }
}
