use rand::seq::SliceRandom;
use rand::Rng;

use super::Graph;
use crate::error::{Error, Result};

/// Attempts at the stub-matching procedure before giving up.
const RANDOM_REGULAR_ATTEMPTS: usize = 1000;

pub fn complete_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::param(format!(
            "complete graph needs n >= 2, got {n}"
        )));
    }
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            g.insert_edge(u, v);
        }
    }
    Ok(g)
}

/// Ring lattice where node `i` links to `i±1, .., i±⌊d/2⌋`; odd `d` adds
/// the antipode `i + n/2`.
pub fn ring_lattice(n: usize, d: usize) -> Result<Graph> {
    if d == 0 || d >= n {
        return Err(Error::param(format!(
            "lattice degree must be in 1..{n}, got {d}"
        )));
    }
    if d % 2 == 1 && n % 2 == 1 {
        return Err(Error::param(format!(
            "odd degree {d} needs an even node count, got {n}"
        )));
    }
    let mut g = Graph::empty(n);
    for i in 0..n {
        for off in 1..=d / 2 {
            let j = (i + off) % n;
            if !g.has_edge(i, j) {
                g.insert_edge(i, j);
            }
        }
        if d % 2 == 1 {
            let j = (i + n / 2) % n;
            if !g.has_edge(i, j) {
                g.insert_edge(i, j);
            }
        }
    }
    debug_assert_eq!(g.regular_degree(), Some(d));
    Ok(g)
}

/// Connected simple `d`-regular graph on `n` nodes.
///
/// Stubs are paired at random; a pair that would form a self-loop or a
/// parallel edge is rejected and its stubs go back into the pool. When the
/// pool can no longer be paired, or the finished graph is disconnected, the
/// attempt is discarded and matching starts over.
pub fn random_regular<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Graph> {
    if d >= n {
        return Err(Error::param(format!("degree {d} must be below n = {n}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(Error::param(format!(
            "n * d must be even, got n = {n}, d = {d}"
        )));
    }
    for _ in 0..RANDOM_REGULAR_ATTEMPTS {
        if let Some(g) = try_pairing(n, d, rng) {
            if g.is_connected() {
                return Ok(g);
            }
        }
    }
    Err(Error::Generation(format!(
        "no connected {d}-regular graph on {n} nodes after {RANDOM_REGULAR_ATTEMPTS} attempts"
    )))
}

fn try_pairing<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Option<Graph> {
    let mut g = Graph::empty(n);
    let mut stubs: Vec<usize> = (0..n).flat_map(|u| std::iter::repeat_n(u, d)).collect();
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover = Vec::new();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u != v && !g.has_edge(u, v) {
                g.insert_edge(u, v);
            } else {
                leftover.extend_from_slice(pair);
            }
        }
        if !leftover.is_empty() && !pairable(&g, &leftover) {
            return None;
        }
        stubs = leftover;
    }
    Some(g)
}

/// True if some two remaining stubs could still be joined.
fn pairable(g: &Graph, stubs: &[usize]) -> bool {
    let mut nodes = stubs.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    nodes
        .iter()
        .enumerate()
        .any(|(i, &u)| nodes[i + 1..].iter().any(|&v| !g.has_edge(u, v)))
}
