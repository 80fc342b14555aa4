use std::fs;
use std::path::Path;

use approx::assert_relative_eq;
use netlearn::experiment::{
    analyze_summary, emit_summary_csv, emit_timeseries_csv, figure_plan, parse_plan_str, pearson_r,
    read_summary_csv, read_timeseries_csv, replicate, run_plan, series_path, Figure,
    ReplicateOptions, RunOptions, SeriesKey, Verdict, SUMMARY_HEADER, TIMESERIES_HEADER,
};
use netlearn::graph::NetworkSpec;
use netlearn::Error;
use proptest::prelude::*;

const FULL_PLAN: &str = r#"
[landscape]
N = 15
K = [0, 7]

[networks]
complete = { kind = "complete" }
lattice = { kind = "lattice", degree = 19 }
max_closeness = { kind = "rewired", metric = "closeness", direction = "max", degree = 19, file = "n/a.edges" }
min_closeness = { kind = "rewired", metric = "closeness", direction = "min", degree = 19, file = "n/b.edges" }
max_betweenness = { kind = "rewired", metric = "betweenness", direction = "max", degree = 19, file = "n/c.edges" }
min_betweenness = { kind = "rewired", metric = "betweenness", direction = "min", degree = 19, file = "n/d.edges" }
max_clustering = { kind = "rewired", metric = "clustering", direction = "max", degree = 19, file = "n/e.edges" }
min_clustering = { kind = "rewired", metric = "clustering", direction = "min", degree = 19, file = "n/f.edges" }
max_constraint = { kind = "rewired", metric = "constraint", direction = "max", degree = 19, file = "n/g.edges" }
min_constraint = { kind = "rewired", metric = "constraint", direction = "min", degree = 19, file = "n/h.edges" }

[strategies]
rules = ["best_member", "conformity"]
s = [3]

[run]
t_max = 200
reps = 200
seed = 1
"#;

/// Ten cheap networks on 30 agents: complete, lattice and eight random-regular graphs.
fn small_plan(reps: usize) -> String {
    let mut nets = String::from(
        "complete = { kind = \"complete\" }\nlattice = { kind = \"lattice\", degree = 4 }\n",
    );
    for d in [3, 4, 5, 6, 7, 8, 9, 10] {
        nets.push_str(&format!(
            "rr{d} = {{ kind = \"random-regular\", degree = {d} }}\n"
        ));
    }
    format!(
        "[landscape]\nN = 8\nK = [2]\n\n[networks]\n{nets}\n[strategies]\nrules = [\"best_member\", \"conformity\"]\ns = [3]\n\n[run]\nt_max = 12\nreps = {reps}\nseed = 9\nagents = 30\n"
    )
}

fn quiet(_: &str) {}

#[test]
fn replication_plan_expands_to_forty_cells() {
    let plan = parse_plan_str(FULL_PLAN, Path::new("/tmp")).unwrap();
    assert_eq!(plan.networks.len(), 10);
    assert_eq!(plan.cells.len(), 40);
    assert_eq!(plan.cells[0].name, "complete__best_member_s3__K0");
    assert_eq!(plan.cells[39].name, "min_constraint__conformity_s3__K7");
    let again = parse_plan_str(FULL_PLAN, Path::new("/tmp")).unwrap();
    assert_eq!(plan, again);
}

#[test]
fn misspelled_rule_is_a_keyed_error() {
    let text = FULL_PLAN.replace("\"best_member\"", "\"bestmember\"");
    let err = parse_plan_str(&text, Path::new(".")).unwrap_err();
    let Error::Config { key, message } = &err else {
        panic!("unexpected {err:?}");
    };
    assert!(key.starts_with("strategies.rules"), "{key}");
    assert!(
        message.contains("best_member") && message.contains("conformity"),
        "{message}"
    );
}

#[test]
fn unknown_keys_are_rejected() {
    let text = FULL_PLAN.replace("seed = 1", "seed = 1\ncolour = 3");
    let err = parse_plan_str(&text, Path::new(".")).unwrap_err();
    assert!(err.to_string().contains("run"), "{err}");
}

#[test]
fn plan_run_writes_consistent_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let plan = parse_plan_str(&small_plan(3), dir.path()).unwrap();
    let outcome = run_plan(&plan, Some(dir.path()), RunOptions::default(), quiet).unwrap();
    assert_eq!(outcome.cells.len(), 20);

    let summary = read_summary_csv(&dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.len(), 20);
    let text = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), SUMMARY_HEADER.join(","));

    for (row, cell) in summary.iter().zip(&outcome.cells) {
        assert_eq!(row.cell, cell.cell.name);
        assert_eq!(row.reps, 3);
        let fin = cell.batch.final_summary();
        assert_eq!(row.final_mean, fin.mean_payoff);
        assert_eq!(row.stderr, fin.se_payoff);

        let path = series_path(dir.path(), &cell.cell.name);
        let parsed = read_timeseries_csv(&path).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0].0.cell, cell.cell.name);
        assert_eq!(parsed[0].1, cell.batch.series);
        let lines = fs::read_to_string(&path).unwrap().lines().count();
        assert_eq!(lines, 1 + 3 * 12);
    }
    let complete = summary.iter().find(|r| r.network == "complete").unwrap();
    assert_eq!(complete.diameter, 1);
}

#[test]
fn equal_seeds_give_byte_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let text = small_plan(2);
    for dir in [&a, &b] {
        let plan = parse_plan_str(&text, dir.path()).unwrap();
        run_plan(&plan, Some(dir.path()), RunOptions::default(), quiet).unwrap();
    }
    let plan = parse_plan_str(&text, a.path()).unwrap();
    let mut files = vec![
        "summary.csv".to_string(),
        "series_mean.csv".to_string(),
        "networks.csv".to_string(),
    ];
    files.extend(plan.cells.iter().map(|c| {
        series_path(Path::new(""), &c.name)
            .to_string_lossy()
            .into_owned()
    }));
    for f in files {
        let x = fs::read(a.path().join(&f)).unwrap();
        let y = fs::read(b.path().join(&f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}

#[test]
fn sequential_and_parallel_plans_agree() {
    let plan = parse_plan_str(&small_plan(2), Path::new(".")).unwrap();
    let par = run_plan(&plan, None, RunOptions::default(), quiet).unwrap();
    let seq = run_plan(
        &plan,
        None,
        RunOptions {
            execution: netlearn::engine::Execution::Sequential,
            ..RunOptions::default()
        },
        quiet,
    )
    .unwrap();
    assert_eq!(par.summary, seq.summary);
}

#[test]
fn csv_emitters_round_trip() {
    let plan = parse_plan_str(&small_plan(2), Path::new(".")).unwrap();
    let outcome = run_plan(&plan, None, RunOptions::default(), quiet).unwrap();
    let dir = tempfile::tempdir().unwrap();

    let cell = &outcome.cells[5];
    let key = SeriesKey {
        cell: cell.cell.name.clone(),
        network: "x".into(),
        strategy: "conformity".into(),
        s: 3,
        k: 2,
    };
    let path = dir.path().join("series.csv");
    emit_timeseries_csv(&key, &cell.batch.series, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), TIMESERIES_HEADER.join(","));
    let back = read_timeseries_csv(&path).unwrap();
    assert_eq!(back, vec![(key, cell.batch.series.clone())]);

    let path = dir.path().join("summary.csv");
    emit_summary_csv(&outcome.summary, &path).unwrap();
    assert_eq!(read_summary_csv(&path).unwrap(), outcome.summary);

    let blocker = dir.path().join("nope");
    fs::write(&blocker, "").unwrap();
    let missing = blocker.join("x.csv");
    let err = emit_summary_csv(&outcome.summary, &missing).unwrap_err();
    assert!(err.to_string().contains("nope"), "{err}");
}

#[test]
fn analyze_reads_a_summary() {
    let plan = parse_plan_str(&small_plan(2), Path::new(".")).unwrap();
    let outcome = run_plan(&plan, None, RunOptions::default(), quiet).unwrap();
    let report = analyze_summary(&outcome.summary).unwrap();
    let text = report.to_string();
    assert!(text.contains("best_member"), "{text}");
    assert!(text.contains("conformity"), "{text}");
    assert!(text.contains("r ="), "{text}");
}

#[test]
fn pearson_examples() {
    let x = [1.0, 2.0, 3.0, 4.0, 5.0];
    let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
    assert_relative_eq!(pearson_r(&x, &y).unwrap(), 1.0, epsilon = 1e-12);
    let neg: Vec<f64> = x.iter().map(|v| -v).collect();
    assert_relative_eq!(pearson_r(&x, &neg).unwrap(), -1.0, epsilon = 1e-12);
    let r = pearson_r(&[1.0, 2.0, 3.0, 4.0], &[2.0, 1.0, 4.0, 3.0]).unwrap();
    assert_relative_eq!(r, 0.6, epsilon = 1e-12);
    assert!(matches!(pearson_r(&x, &[3.0; 5]), Err(Error::Analysis(_))));
    assert!(pearson_r(&[1.0, 2.0], &[1.0, 2.0]).is_err());
    assert!(pearson_r(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
}

fn arb_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (3usize..20).prop_flat_map(|n| {
        (
            prop::collection::vec(-100.0f64..100.0, n),
            prop::collection::vec(-100.0f64..100.0, n),
        )
    })
}

proptest! {
    #[test]
    fn pearson_is_symmetric_bounded_and_affine_invariant(
        (x, y) in arb_pair(),
        a in 0.01f64..50.0,
        b in -50.0f64..50.0,
    ) {
        let spread = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
        prop_assume!(spread(&x) > 1e-6 && spread(&y) > 1e-6);
        let r = pearson_r(&x, &y).unwrap();
        prop_assert!((-1.0..=1.0).contains(&r));
        prop_assert_eq!(r, pearson_r(&y, &x).unwrap());
        let xt: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let r2 = pearson_r(&xt, &y).unwrap();
        prop_assert!((r - r2).abs() < 1e-9, "{} vs {}", r, r2);
    }
}

#[test]
fn single_repetition_marks_checks_insufficient() {
    let dir = tempfile::tempdir().unwrap();
    let mut opts = ReplicateOptions::new(dir.path(), 3);
    opts.repetitions = 1;
    opts.write_series = false;
    let (report, _) = replicate(Figure::Fig1, &opts, quiet).unwrap();
    let text = report.to_string();
    assert!(
        text.contains("conformity s=3 final > best_member s=3 final: insufficient repetitions"),
        "{text}"
    );
    assert!(report
        .checks
        .iter()
        .all(|c| c.verdict == Verdict::Insufficient));
    assert!(dir.path().join("fig1").join("report.txt").exists());
    assert!(dir.path().join("fig1").join("summary.csv").exists());
}

#[test]
fn missing_network_files_point_to_gen_net() {
    let dir = tempfile::tempdir().unwrap();
    let mut opts = ReplicateOptions::new(dir.path(), 0);
    opts.repetitions = 1;
    let err = replicate(Figure::Fig3, &opts, quiet).unwrap_err();
    let text = err.to_string();
    assert!(matches!(err, Error::MissingNetwork { .. }));
    assert!(text.contains("netlearn gen-net --metric"), "{text}");

    let plan = figure_plan(Figure::Fig4, &opts).unwrap();
    assert_eq!(plan.networks.len(), 10);
    assert_eq!(plan.cells.len(), 20);
    assert_eq!(NetworkSpec::standard_ten(100, 19).len(), 10);
}
