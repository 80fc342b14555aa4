//! Brute-force graph oracles shared by the integration suites.
#![allow(dead_code)]

use netlearn::graph::Graph;
use netlearn::seed::SimRng;
use rand::Rng;

pub const INF: usize = usize::MAX / 4;

/// All-pairs distances by Floyd–Warshall on the adjacency matrix.
pub fn floyd(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n_nodes();
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
        for &j in g.neighbors(i) {
            row[j] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Every shortest path from `s` to `t`, found by walking edges that
/// decrease the distance to `t` by one.
pub fn shortest_paths(g: &Graph, d: &[Vec<usize>], s: usize, t: usize) -> Vec<Vec<usize>> {
    if s == t {
        return vec![vec![t]];
    }
    let mut out = Vec::new();
    for v in 0..g.n_nodes() {
        if g.has_edge(s, v) && d[v][t] + 1 == d[s][t] {
            for mut p in shortest_paths(g, d, v, t) {
                p.insert(0, s);
                out.push(p);
            }
        }
    }
    out
}

pub fn oracle_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.n_nodes();
    let d = floyd(g);
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let paths = shortest_paths(g, &d, s, t);
            for (v, bv) in b.iter_mut().enumerate() {
                let through = paths
                    .iter()
                    .filter(|p| p[1..p.len() - 1].contains(&v))
                    .count();
                *bv += through as f64 / paths.len() as f64;
            }
        }
    }
    b
}

pub fn oracle_constraint(g: &Graph) -> Vec<f64> {
    let n = g.n_nodes();
    let p = |i: usize, j: usize| {
        if g.has_edge(i, j) {
            1.0 / g.degree(i) as f64
        } else {
            0.0
        }
    };
    (0..n)
        .map(|i| {
            let mut c = 0.0;
            for j in 0..n {
                if j == i || !g.has_edge(i, j) {
                    continue;
                }
                let mut indirect = 0.0;
                for q in 0..n {
                    if q != i && q != j {
                        indirect += p(i, q) * p(q, j);
                    }
                }
                c += (p(i, j) + indirect).powi(2);
            }
            c
        })
        .collect()
}

pub fn oracle_clustering(g: &Graph) -> Vec<f64> {
    let n = g.n_nodes();
    (0..n)
        .map(|i| {
            let nb: Vec<usize> = (0..n).filter(|&j| g.has_edge(i, j)).collect();
            if nb.len() < 2 {
                return 0.0;
            }
            let mut links = 0;
            for a in 0..nb.len() {
                for b in a + 1..nb.len() {
                    if g.has_edge(nb[a], nb[b]) {
                        links += 1;
                    }
                }
            }
            2.0 * links as f64 / (nb.len() * (nb.len() - 1)) as f64
        })
        .collect()
}

pub fn random_connected(rng: &mut SimRng) -> Graph {
    loop {
        let n = rng.random_range(3..=12);
        let p = rng.random_range(0.2..0.7);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}
