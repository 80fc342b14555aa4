use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn netlearn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netlearn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_net_writes_a_loadable_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lattice.edges");
    let o = netlearn(&[
        "gen-net",
        "--kind",
        "lattice",
        "--n",
        "20",
        "--d",
        "4",
        "--out",
        p(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("20 nodes, 40 edges, diameter 5"),
        "{}",
        stdout(&o)
    );
    let g = netlearn::graph::load_edge_list(&out).unwrap();
    assert_eq!(g.n_nodes(), 20);
    assert_eq!(g.n_edges(), 40);
}

#[test]
fn gen_net_rewires_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.edges");
    let b = dir.path().join("b.edges");
    for out in [&a, &b] {
        let o = netlearn(&[
            "gen-net",
            "--metric",
            "clustering",
            "--dir",
            "max",
            "--n",
            "30",
            "--d",
            "4",
            "--iters",
            "300",
            "--restarts",
            "2",
            "--seed",
            "5",
            "--out",
            p(out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn run_writes_summary_and_series() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("plan.toml");
    fs::write(
        &config,
        "[landscape]\nN = 6\nK = [1]\n\n[networks]\nring = { kind = \"lattice\", degree = 2 }\n\n\
         [strategies]\nrules = [\"conformity\"]\ns = [2]\n\n[run]\nt_max = 5\nreps = 2\nseed = 3\nagents = 10\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = netlearn(&[
        "run",
        "--config",
        p(&config),
        "--out",
        p(&out),
        "--reps",
        "3",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("1 cells written"), "{}", stdout(&o));
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 2);
    assert!(summary.lines().nth(1).unwrap().ends_with(",3"), "{summary}");

    let analyzed = netlearn(&["analyze", "--summary", p(&out.join("summary.csv"))]);
    assert!(analyzed.status.success(), "{}", stderr(&analyzed));
}

#[test]
fn bad_plans_fail_with_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("plan.toml");
    fs::write(
        &config,
        "[landscape]\nN = 6\nK = [1]\n\n[networks]\nring = { kind = \"lattice\", degree = 2 }\n\n\
         [strategies]\nrules = [\"bestmember\"]\ns = [2]\n\n[run]\nt_max = 5\nreps = 2\nseed = 3\n",
    )
    .unwrap();
    let o = netlearn(&["run", "--config", p(&config), "--out", p(dir.path())]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.starts_with("error: "), "{err}");
    assert!(err.contains("strategies.rules"), "{err}");
}

#[test]
fn replicate_without_networks_explains_how_to_create_them() {
    let dir = tempfile::tempdir().unwrap();
    let o = netlearn(&[
        "replicate",
        "--figure",
        "fig4",
        "--out",
        p(dir.path()),
        "--reps",
        "1",
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("netlearn gen-net"), "{}", stderr(&o));
}

#[test]
fn replicate_reports_insufficient_repetitions() {
    let dir = tempfile::tempdir().unwrap();
    let o = netlearn(&[
        "replicate",
        "--figure",
        "fig2",
        "--out",
        p(dir.path()),
        "--reps",
        "2",
        "--skip-series",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("insufficient repetitions"), "{text}");
    assert!(!text.contains("PASS") && !text.contains("FAIL"), "{text}");
}

#[test]
fn unknown_figure_is_rejected() {
    let o = netlearn(&["replicate", "--figure", "fig9", "--out", "x"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("fig9"));
}
