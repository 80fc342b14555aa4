//! Executes an [`ExperimentPlan`] and writes its CSV outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::engine::{run_batch, BatchResult, Execution};
use crate::error::{Error, Result};
use crate::graph::{
    diameter, mean_betweenness, mean_closeness, mean_clustering, mean_constraint, Graph,
    NetworkKind, NetworkSpec,
};
use crate::seed::{derive, TAG_GRAPH};

use super::output::{
    emit_summary_csv, emit_timeseries_csv, fmt_real, Efficiency, SeriesKey, SummaryRow,
};
use super::plan::{Cell, ExperimentPlan, NetworkSource, PlanNetwork};

/// A plan network after loading or generation.
#[derive(Clone, Debug)]
pub struct BuiltNetwork {
    pub name: String,
    pub kind: Option<NetworkKind>,
    pub graph: Graph,
    pub diameter: usize,
    pub efficiency: Efficiency,
}

#[derive(Clone, Debug)]
pub struct CellOutcome {
    pub cell: Cell,
    pub batch: BatchResult,
}

#[derive(Clone, Debug)]
pub struct PlanOutcome {
    pub networks: Vec<BuiltNetwork>,
    pub cells: Vec<CellOutcome>,
    pub summary: Vec<SummaryRow>,
}

impl PlanOutcome {
    pub fn cell(&self, name: &str) -> Option<&CellOutcome> {
        self.cells.iter().find(|c| c.cell.name == name)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Write one per-repetition time-series file per cell.
    pub write_series: bool,
    pub execution: Execution,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            write_series: true,
            execution: Execution::Parallel,
        }
    }
}

/// Efficient iff the diameter is at most the median diameter of the set.
/// The complete graph is always efficient and the lattice always
/// inefficient.
pub fn label_efficiency(networks: &[(Option<NetworkKind>, usize)]) -> Vec<Efficiency> {
    let mut d: Vec<usize> = networks.iter().map(|&(_, d)| d).collect();
    d.sort_unstable();
    let median = match d.len() {
        0 => 0.0,
        n if n % 2 == 1 => d[n / 2] as f64,
        n => (d[n / 2 - 1] + d[n / 2]) as f64 / 2.0,
    };
    networks
        .iter()
        .map(|&(kind, diam)| match kind {
            Some(NetworkKind::Complete) => Efficiency::Efficient,
            Some(NetworkKind::Lattice) => Efficiency::Inefficient,
            _ if diam as f64 <= median => Efficiency::Efficient,
            _ => Efficiency::Inefficient,
        })
        .collect()
}

/// The `gen-net` arguments that produce the file a spec expects.
pub fn gen_net_hint(spec: &NetworkSpec, path: &Path) -> String {
    let shape = match spec.kind {
        NetworkKind::Rewired { metric, direction } => format!(
            "--metric {metric} --dir {direction} --n {} --d {}",
            spec.n_nodes, spec.degree
        ),
        NetworkKind::Complete => format!("--kind complete --n {}", spec.n_nodes),
        kind => format!("--kind {kind} --n {} --d {}", spec.n_nodes, spec.degree),
    };
    format!("{shape} --out {}", path.display())
}

fn require_file(path: &Path, hint: impl FnOnce() -> String) -> Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(Error::MissingNetwork {
            path: path.to_path_buf(),
            hint: hint(),
        })
    }
}

/// Loads or generates network `index` of a plan. Generated topologies use
/// seed `derive(plan_seed, [TAG_GRAPH, index])`.
pub fn build_network(plan: &ExperimentPlan, index: usize) -> Result<Graph> {
    let net: &PlanNetwork = &plan.networks[index];
    match &net.source {
        NetworkSource::File(path) => {
            require_file(path, || {
                format!(
                    "--metric <metric> --dir <min|max> --n {} --d <degree> --out {}",
                    plan.n_agents,
                    path.display()
                )
            })?;
            crate::graph::load_edge_list(path)
        }
        NetworkSource::Spec(spec) => {
            if let Some(path) = &spec.source {
                require_file(path, || gen_net_hint(spec, path))?;
            }
            spec.build(plan.rewire, derive(plan.seed, &[TAG_GRAPH, index as u64]))
        }
    }
}

pub fn build_networks(plan: &ExperimentPlan) -> Result<Vec<BuiltNetwork>> {
    let mut built = Vec::with_capacity(plan.networks.len());
    for (index, net) in plan.networks.iter().enumerate() {
        let graph = build_network(plan, index)?;
        if graph.n_nodes() != plan.n_agents {
            return Err(Error::param(format!(
                "network `{}` has {} nodes but the run has {} agents",
                net.name,
                graph.n_nodes(),
                plan.n_agents
            )));
        }
        let diameter = diameter(&graph)?;
        built.push((net, graph, diameter));
    }
    let labels = label_efficiency(
        &built
            .iter()
            .map(|(net, _, d)| (net.kind(), *d))
            .collect::<Vec<_>>(),
    );
    Ok(built
        .into_iter()
        .zip(labels)
        .map(|((net, graph, diameter), efficiency)| BuiltNetwork {
            name: net.name.clone(),
            kind: net.kind(),
            graph,
            diameter,
            efficiency,
        })
        .collect())
}

fn summary_row(cell: &Cell, net: &BuiltNetwork, batch: &BatchResult) -> SummaryRow {
    let fin = batch.final_summary();
    SummaryRow {
        cell: cell.name.clone(),
        network: net.name.clone(),
        diameter: net.diameter,
        efficiency: net.efficiency,
        strategy: cell.config.strategy.rule.to_string(),
        s: cell.config.strategy.sample_size(),
        k: cell.config.k_interdependence,
        final_mean: fin.mean_payoff,
        stderr: fin.se_payoff,
        reps: batch.series.len(),
    }
}

fn series_key(cell: &Cell, net: &BuiltNetwork) -> SeriesKey {
    SeriesKey {
        cell: cell.name.clone(),
        network: net.name.clone(),
        strategy: cell.config.strategy.rule.to_string(),
        s: cell.config.strategy.sample_size(),
        k: cell.config.k_interdependence,
    }
}

/// Runs every cell of `plan`. With an output directory, writes
/// `summary.csv`, `series_mean.csv`, `networks.csv` and, unless disabled,
/// `series/<cell>.csv`. Cells run concurrently and each writes only its own
/// series file; `progress` receives one line per finished stage.
pub fn run_plan(
    plan: &ExperimentPlan,
    out_dir: Option<&Path>,
    options: RunOptions,
    progress: impl Fn(&str) + Sync,
) -> Result<PlanOutcome> {
    let networks = build_networks(plan)?;
    for net in &networks {
        progress(&format!(
            "network {}: diameter {} ({})",
            net.name, net.diameter, net.efficiency
        ));
    }
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_networks_csv(&networks, &dir.join("networks.csv"))?;
    }

    let done = AtomicUsize::new(0);
    let results: Vec<(CellOutcome, SummaryRow)> = plan
        .cells
        .par_iter()
        .map(|cell| {
            let net = &networks[cell.network];
            let batch = run_batch(&cell.config, &net.graph, options.execution)?;
            let row = summary_row(cell, net, &batch);
            if let (Some(dir), true) = (out_dir, options.write_series) {
                let path = series_path(dir, &cell.name);
                emit_timeseries_csv(&series_key(cell, net), &batch.series, &path)?;
            }
            progress(&format!(
                "[{}/{}] {}: final {:.4} ± {:.4}",
                done.fetch_add(1, Ordering::Relaxed) + 1,
                plan.cells.len(),
                cell.name,
                row.final_mean,
                2.0 * row.stderr
            ));
            let cell = cell.clone();
            Ok((CellOutcome { cell, batch }, row))
        })
        .collect::<Result<_>>()?;
    let (cells, summary) = results.into_iter().unzip();

    let outcome = PlanOutcome {
        networks,
        cells,
        summary,
    };
    if let Some(dir) = out_dir {
        emit_summary_csv(&outcome.summary, &dir.join("summary.csv"))?;
        write_series_mean_csv(&outcome, &dir.join("series_mean.csv"))?;
    }
    Ok(outcome)
}

pub fn series_path(out_dir: &Path, cell: &str) -> PathBuf {
    out_dir.join("series").join(format!("{cell}.csv"))
}

fn write_series_mean_csv(outcome: &PlanOutcome, path: &Path) -> Result<()> {
    let io = |e: csv::Error| Error::Format {
        line: 0,
        message: format!("{}: {e}", path.display()),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record([
        "cell",
        "network",
        "strategy",
        "s",
        "K",
        "t",
        "mean_payoff",
        "se_payoff",
        "mean_max_payoff",
        "mean_unique",
        "se_unique",
    ])
    .map_err(io)?;
    for c in &outcome.cells {
        let net = &outcome.networks[c.cell.network];
        let key = series_key(&c.cell, net);
        let (s, k) = (key.s.to_string(), key.k.to_string());
        for st in &c.batch.summary {
            w.write_record([
                key.cell.as_str(),
                &key.network,
                &key.strategy,
                &s,
                &k,
                &st.t.to_string(),
                &fmt_real(st.mean_payoff),
                &fmt_real(st.se_payoff),
                &fmt_real(st.mean_max_payoff),
                &fmt_real(st.mean_unique),
                &fmt_real(st.se_unique),
            ])
            .map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_networks_csv(networks: &[BuiltNetwork], path: &Path) -> Result<()> {
    let io = |e: csv::Error| Error::Format {
        line: 0,
        message: format!("{}: {e}", path.display()),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record([
        "network",
        "nodes",
        "edges",
        "diameter",
        "efficiency",
        "closeness",
        "betweenness",
        "clustering",
        "constraint",
    ])
    .map_err(io)?;
    for net in networks {
        let g = &net.graph;
        w.write_record([
            net.name.as_str(),
            &g.n_nodes().to_string(),
            &g.n_edges().to_string(),
            &net.diameter.to_string(),
            &net.efficiency.to_string(),
            &fmt_real(mean_closeness(g)?),
            &fmt_real(mean_betweenness(g)?),
            &fmt_real(mean_clustering(g)),
            &fmt_real(mean_constraint(g)?),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Direction, Metric};

    #[test]
    fn efficiency_uses_median_and_fixed_anchors() {
        let rewired = |m| {
            Some(NetworkKind::Rewired {
                metric: m,
                direction: Direction::Min,
            })
        };
        let labels = label_efficiency(&[
            (Some(NetworkKind::Complete), 1),
            (Some(NetworkKind::Lattice), 2),
            (rewired(Metric::Closeness), 2),
            (rewired(Metric::Clustering), 3),
            (None, 4),
        ]);
        assert_eq!(
            labels,
            [
                Efficiency::Efficient,
                Efficiency::Inefficient,
                Efficiency::Efficient,
                Efficiency::Inefficient,
                Efficiency::Inefficient,
            ]
        );
    }
}
