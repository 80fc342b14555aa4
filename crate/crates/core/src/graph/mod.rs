//! Simple undirected graphs with fixed node sets.
//!
//! Adjacency is kept twice: as sorted neighbor lists (for sampling and
//! iteration) and as a dense bit matrix (for O(1) edge tests and word-parallel
//! breadth-first search). Both views are updated together.

mod generate;
mod io;
mod metrics;
mod network;
mod rewire;

pub use generate::{complete_graph, random_regular, ring_lattice};
pub use io::{load_edge_list, parse_edge_list, save_edge_list, write_edge_list};
pub use metrics::{
    betweenness, closeness, clustering, constraint, diameter, distance_matrix, mean_betweenness,
    mean_closeness, mean_clustering, mean_constraint, Metric,
};
pub use network::{NetworkKind, NetworkSpec};
pub use rewire::{
    double_edge_swap, rewire_optimize, Direction, RestartOutcome, RewireBudget, RewireOutcome,
    SwapProposal,
};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// `n` isolated nodes.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
            neighbors: vec![Vec::new(); n],
        }
    }

    /// Builds a graph, rejecting self-loops, duplicates and out-of-range nodes.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::param(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                return Err(Error::param(format!("self-loop at node {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::param(format!("duplicate edge ({u}, {v})")));
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn degree(&self, node: usize) -> usize {
        self.neighbors[node].len()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    /// Common degree of every node, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.neighbors.first().map(Vec::len)?;
        self.neighbors.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Sorted neighbor list.
    #[inline]
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    #[inline]
    pub(crate) fn row(&self, node: usize) -> &[u64] {
        &self.rows[node * self.words..(node + 1) * self.words]
    }

    #[inline]
    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && !self.has_edge(u, v));
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.neighbors[a];
            let pos = list.binary_search(&b).unwrap_err();
            list.insert(pos, b);
        }
    }

    pub(crate) fn delete_edge(&mut self, u: usize, v: usize) {
        debug_assert!(self.has_edge(u, v));
        self.rows[u * self.words + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.words + u / 64] &= !(1 << (u % 64));
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.neighbors[a];
            let pos = list.binary_search(&b).expect("edge present");
            list.remove(pos);
        }
    }

    /// True for the empty graph and any graph whose nodes are all reachable
    /// from node 0.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut bfs = Bfs::new(self);
        bfs.run(self, 0, |_, _| {});
        bfs.reached == self.n
    }
}

/// Word-parallel breadth-first search scratch space.
pub(crate) struct Bfs {
    visited: Vec<u64>,
    frontier: Vec<u64>,
    next: Vec<u64>,
    pub(crate) reached: usize,
}

impl Bfs {
    pub(crate) fn new(g: &Graph) -> Self {
        Bfs {
            visited: vec![0; g.words],
            frontier: vec![0; g.words],
            next: vec![0; g.words],
            reached: 0,
        }
    }

    /// Calls `on_level(depth, frontier_bits)` for every non-empty level at
    /// depth ≥ 1; returns the eccentricity of `source` within its component.
    pub(crate) fn run(
        &mut self,
        g: &Graph,
        source: usize,
        mut on_level: impl FnMut(usize, &[u64]),
    ) -> usize {
        self.visited.fill(0);
        self.frontier.fill(0);
        self.visited[source / 64] |= 1 << (source % 64);
        self.frontier[source / 64] |= 1 << (source % 64);
        self.reached = 1;
        let mut depth = 0;
        loop {
            self.next.fill(0);
            for_each_bit(&self.frontier, |u| {
                for (nw, rw) in self.next.iter_mut().zip(g.row(u)) {
                    *nw |= rw;
                }
            });
            let mut count = 0;
            for (nw, vw) in self.next.iter_mut().zip(self.visited.iter_mut()) {
                *nw &= !*vw;
                *vw |= *nw;
                count += nw.count_ones() as usize;
            }
            if count == 0 {
                return depth;
            }
            depth += 1;
            self.reached += count;
            on_level(depth, &self.next);
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
    }
}

#[inline]
pub(crate) fn for_each_bit(words: &[u64], mut f: impl FnMut(usize)) {
    for (w, &word) in words.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let tz = bits.trailing_zeros() as usize;
            f(w * 64 + tz);
            bits &= bits - 1;
        }
    }
}
