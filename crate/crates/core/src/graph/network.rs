use std::fmt;
use std::path::PathBuf;

use super::{
    complete_graph, load_edge_list, random_regular, rewire_optimize, ring_lattice, Direction,
    Graph, Metric, RewireBudget,
};
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NetworkKind {
    Complete,
    Lattice,
    RandomRegular,
    Rewired {
        metric: Metric,
        direction: Direction,
    },
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkKind::Complete => f.write_str("complete"),
            NetworkKind::Lattice => f.write_str("lattice"),
            NetworkKind::RandomRegular => f.write_str("random-regular"),
            NetworkKind::Rewired { metric, direction } => write!(f, "{direction}_{metric}"),
        }
    }
}

/// Recipe for one network topology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkSpec {
    pub kind: NetworkKind,
    pub n_nodes: usize,
    /// Ignored for the complete graph.
    pub degree: usize,
    /// Precomputed edge list to load instead of generating.
    pub source: Option<PathBuf>,
}

impl NetworkSpec {
    pub fn new(kind: NetworkKind, n_nodes: usize, degree: usize) -> Self {
        NetworkSpec {
            kind,
            n_nodes,
            degree,
            source: None,
        }
    }

    /// The ten topologies: complete, lattice, and min/max of each metric.
    pub fn standard_ten(n_nodes: usize, degree: usize) -> Vec<NetworkSpec> {
        let mut specs = vec![
            NetworkSpec::new(NetworkKind::Complete, n_nodes, n_nodes - 1),
            NetworkSpec::new(NetworkKind::Lattice, n_nodes, degree),
        ];
        for metric in Metric::ALL {
            for direction in [Direction::Min, Direction::Max] {
                specs.push(NetworkSpec::new(
                    NetworkKind::Rewired { metric, direction },
                    n_nodes,
                    degree,
                ));
            }
        }
        specs
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_nodes;
        match self.kind {
            NetworkKind::Complete => {
                if n < 2 {
                    return Err(Error::param("complete graph needs at least 2 nodes"));
                }
            }
            _ => {
                if self.degree == 0 || self.degree >= n {
                    return Err(Error::param(format!(
                        "degree must be in 1..{n}, got {}",
                        self.degree
                    )));
                }
                if !(n * self.degree).is_multiple_of(2) {
                    return Err(Error::param(format!(
                        "n * d must be even, got n = {n}, d = {}",
                        self.degree
                    )));
                }
            }
        }
        Ok(())
    }

    /// Loads `source` when set, otherwise generates the topology. Rewired
    /// networks climb from a random regular graph drawn from `seed`.
    pub fn build(&self, budget: RewireBudget, seed: u64) -> Result<Graph> {
        self.validate()?;
        if let Some(path) = &self.source {
            let g = load_edge_list(path)?;
            if g.n_nodes() != self.n_nodes {
                return Err(Error::param(format!(
                    "{}: has {} nodes, expected {}",
                    path.display(),
                    g.n_nodes(),
                    self.n_nodes
                )));
            }
            return Ok(g);
        }
        match self.kind {
            NetworkKind::Complete => complete_graph(self.n_nodes),
            NetworkKind::Lattice => ring_lattice(self.n_nodes, self.degree),
            NetworkKind::RandomRegular => {
                random_regular(self.n_nodes, self.degree, &mut rng_from_seed(seed))
            }
            NetworkKind::Rewired { metric, direction } => {
                let g0 = random_regular(self.n_nodes, self.degree, &mut rng_from_seed(seed))?;
                Ok(rewire_optimize(&g0, metric, direction, budget, seed)?.graph)
            }
        }
    }
}
