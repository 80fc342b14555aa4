//! Plans, CSV outputs, figure replication and summary analysis.

mod analyze;
mod output;
mod plan;
mod replicate;
mod report;
mod runner;

pub use analyze::analyze_summary;
pub use output::{
    emit_summary_csv, emit_timeseries_csv, fmt_real, read_summary_csv, read_timeseries_csv,
    Efficiency, SeriesKey, SummaryRow, SUMMARY_HEADER, TIMESERIES_HEADER,
};
pub use plan::{parse_config, parse_plan_str, Cell, ExperimentPlan, NetworkSource, PlanNetwork};
pub use replicate::{
    diameter_correlation, figure_plan, figure_report, final_estimate, first_passage_estimate,
    generate_missing_networks, network_file, replicate, unique_estimate, Figure, ReplicateOptions,
    CORRELATION_FLOOR, CROSSOVER_HORIZON, DEFAULT_REPETITIONS, DEGREE, N_AGENTS, N_COMPONENTS,
    OPTIMUM_THRESHOLD, T_MAX, UNIQUE_CEILING,
};
pub use report::{greater, separated_below, Check, Estimate, Report, Verdict, MIN_REPETITIONS};
pub use runner::{
    build_network, build_networks, gen_net_hint, label_efficiency, run_plan, series_path,
    BuiltNetwork, CellOutcome, PlanOutcome, RunOptions,
};

pub use crate::stats::pearson_r;
