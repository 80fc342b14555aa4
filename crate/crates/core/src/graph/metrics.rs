//! Node-level structural measures and their node means.
//!
//! Conventions (unweighted, undirected):
//! - closeness: `(n - 1) / Σ_j dist(i, j)`
//! - betweenness: unnormalized, endpoints excluded, each unordered pair counted once
//! - clustering: `2 t_i / (d_i (d_i - 1))`, zero when `d_i < 2`
//! - constraint: Burt's `Σ_j (p_ij + Σ_q p_iq p_qj)^2` with `p_ij = 1 / d_i`

use std::fmt;
use std::str::FromStr;

use super::{for_each_bit, Bfs, Graph};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Closeness,
    Betweenness,
    Clustering,
    Constraint,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Closeness,
        Metric::Betweenness,
        Metric::Clustering,
        Metric::Constraint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Closeness => "closeness",
            Metric::Betweenness => "betweenness",
            Metric::Clustering => "clustering",
            Metric::Constraint => "constraint",
        }
    }

    /// Value minimized or maximized by rewiring; equal to [`Metric::mean`]
    /// up to rounding. Mean betweenness is taken from the pair-distance
    /// identity `Σ_v B(v) = Σ_{s<t} (dist(s, t) - 1)`, which holds on
    /// connected graphs and needs only breadth-first distances.
    pub fn objective(self, g: &Graph) -> Result<f64> {
        match self {
            Metric::Betweenness => {
                require_connected(g, "betweenness")?;
                let n = g.n_nodes() as u64;
                let interior = total_pair_distance(g) - n * (n - 1) / 2;
                Ok(interior as f64 / n as f64)
            }
            other => other.mean(g),
        }
    }

    /// Node mean of the metric.
    pub fn mean(self, g: &Graph) -> Result<f64> {
        match self {
            Metric::Closeness => mean_closeness(g),
            Metric::Betweenness => mean_betweenness(g),
            Metric::Clustering => Ok(mean_clustering(g)),
            Metric::Constraint => mean_constraint(g),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::param(format!(
                    "unknown metric `{s}`, expected one of closeness, betweenness, clustering, constraint"
                ))
            })
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn require_connected(g: &Graph, what: &str) -> Result<()> {
    if g.n_nodes() == 0 {
        return Err(Error::MetricUndefined(format!("{what} of an empty graph")));
    }
    if !g.is_connected() {
        return Err(Error::MetricUndefined(format!(
            "{what} requires a connected graph"
        )));
    }
    Ok(())
}

pub fn closeness(g: &Graph) -> Result<Vec<f64>> {
    require_connected(g, "closeness")?;
    let n = g.n_nodes();
    if n == 1 {
        return Ok(vec![0.0]);
    }
    let mut bfs = Bfs::new(g);
    Ok((0..n)
        .map(|s| {
            let mut total = 0usize;
            bfs.run(g, s, |depth, level| {
                total += depth * level.iter().map(|w| w.count_ones() as usize).sum::<usize>();
            });
            (n - 1) as f64 / total as f64
        })
        .collect())
}

pub fn mean_closeness(g: &Graph) -> Result<f64> {
    closeness(g).map(|c| mean(&c))
}

/// Sum of hop distances over unordered pairs of a connected graph.
fn total_pair_distance(g: &Graph) -> u64 {
    let mut bfs = Bfs::new(g);
    let ordered: u64 = (0..g.n_nodes())
        .map(|s| {
            let mut total = 0u64;
            bfs.run(g, s, |depth, level| {
                total += depth as u64 * level.iter().map(|w| w.count_ones() as u64).sum::<u64>();
            });
            total
        })
        .sum();
    ordered / 2
}

/// Eccentricity maximum over all nodes.
pub fn diameter(g: &Graph) -> Result<usize> {
    require_connected(g, "diameter")?;
    let mut bfs = Bfs::new(g);
    Ok((0..g.n_nodes())
        .map(|s| bfs.run(g, s, |_, _| {}))
        .max()
        .unwrap_or(0))
}

/// All-pairs hop distances; `usize::MAX` marks unreachable pairs.
pub fn distance_matrix(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n_nodes();
    let mut bfs = Bfs::new(g);
    (0..n)
        .map(|s| {
            let mut row = vec![usize::MAX; n];
            row[s] = 0;
            bfs.run(g, s, |depth, level| for_each_bit(level, |v| row[v] = depth));
            row
        })
        .collect()
}

/// Brandes accumulation over shortest-path DAGs built level by level.
pub fn betweenness(g: &Graph) -> Result<Vec<f64>> {
    require_connected(g, "betweenness")?;
    let n = g.n_nodes();
    let words = g.words();
    let mut bc = vec![0.0; n];
    let mut bfs = Bfs::new(g);
    let mut sigma = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    // level bitsets, flattened; level 0 holds only the source
    let mut levels: Vec<u64> = Vec::new();
    let mut order: Vec<(usize, usize)> = Vec::with_capacity(n);
    let mut preds = vec![0u64; words];

    for s in 0..n {
        levels.clear();
        levels.resize(words, 0);
        levels[s / 64] |= 1 << (s % 64);
        order.clear();
        bfs.run(g, s, |depth, level| {
            levels.extend_from_slice(level);
            for_each_bit(level, |v| order.push((depth, v)));
        });

        sigma.fill(0.0);
        delta.fill(0.0);
        sigma[s] = 1.0;
        for &(depth, w) in &order {
            let prev = &levels[(depth - 1) * words..depth * words];
            let mut total = 0.0;
            for ((p, r), l) in preds.iter_mut().zip(g.row(w)).zip(prev) {
                *p = r & l;
            }
            for_each_bit(&preds, |v| total += sigma[v]);
            sigma[w] = total;
        }
        for &(depth, w) in order.iter().rev() {
            let prev = &levels[(depth - 1) * words..depth * words];
            for ((p, r), l) in preds.iter_mut().zip(g.row(w)).zip(prev) {
                *p = r & l;
            }
            let coeff = (1.0 + delta[w]) / sigma[w];
            for_each_bit(&preds, |v| delta[v] += sigma[v] * coeff);
            bc[w] += delta[w];
        }
    }
    for b in &mut bc {
        *b /= 2.0;
    }
    Ok(bc)
}

pub fn mean_betweenness(g: &Graph) -> Result<f64> {
    betweenness(g).map(|b| mean(&b))
}

pub fn clustering(g: &Graph) -> Vec<f64> {
    (0..g.n_nodes())
        .map(|i| {
            let d = g.degree(i);
            if d < 2 {
                return 0.0;
            }
            let row = g.row(i);
            let closed: u32 = g
                .neighbors(i)
                .iter()
                .map(|&j| {
                    row.iter()
                        .zip(g.row(j))
                        .map(|(a, b)| (a & b).count_ones())
                        .sum::<u32>()
                })
                .sum();
            // each triangle edge is seen from both endpoints
            closed as f64 / (d * (d - 1)) as f64
        })
        .collect()
}

pub fn mean_clustering(g: &Graph) -> f64 {
    if g.n_nodes() == 0 {
        return 0.0;
    }
    mean(&clustering(g))
}

pub fn constraint(g: &Graph) -> Result<Vec<f64>> {
    if let Some(i) = (0..g.n_nodes()).find(|&i| g.degree(i) == 0) {
        return Err(Error::MetricUndefined(format!(
            "constraint of isolated node {i}"
        )));
    }
    let words = g.words();
    let mut common = vec![0u64; words];
    Ok((0..g.n_nodes())
        .map(|i| {
            let p = 1.0 / g.degree(i) as f64;
            g.neighbors(i)
                .iter()
                .map(|&j| {
                    for ((c, a), b) in common.iter_mut().zip(g.row(i)).zip(g.row(j)) {
                        *c = a & b;
                    }
                    let mut indirect = 0.0;
                    for_each_bit(&common, |q| indirect += p / g.degree(q) as f64);
                    (p + indirect).powi(2)
                })
                .sum()
        })
        .collect())
}

pub fn mean_constraint(g: &Graph) -> Result<f64> {
    if g.n_nodes() == 0 {
        return Err(Error::MetricUndefined(
            "constraint of an empty graph".into(),
        ));
    }
    constraint(g).map(|c| mean(&c))
}
