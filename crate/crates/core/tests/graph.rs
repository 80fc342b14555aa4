use approx::assert_relative_eq;
use netlearn::graph::{
    betweenness, closeness, clustering, complete_graph, constraint, diameter, double_edge_swap,
    load_edge_list, mean_betweenness, mean_closeness, mean_clustering, mean_constraint,
    parse_edge_list, random_regular, rewire_optimize, ring_lattice, save_edge_list, Direction,
    Graph, Metric, RewireBudget,
};
use netlearn::seed::rng_from_seed;
use netlearn::Error;

mod common;
use common::{
    floyd, mean, oracle_betweenness, oracle_clustering, oracle_constraint, random_connected, INF,
};

#[test]
fn metrics_match_brute_force_on_random_graphs() {
    let mut rng = rng_from_seed(2024);
    for _ in 0..50 {
        let g = random_connected(&mut rng);
        let n = g.n_nodes();
        let d = floyd(&g);

        let diam = d.iter().flatten().copied().max().unwrap();
        assert_eq!(diameter(&g).unwrap(), diam);

        let close: Vec<f64> = (0..n)
            .map(|i| (n - 1) as f64 / d[i].iter().sum::<usize>() as f64)
            .collect();
        for (a, b) in closeness(&g).unwrap().iter().zip(&close) {
            assert_relative_eq!(*a, *b, max_relative = 1e-12);
        }
        assert_relative_eq!(
            mean_closeness(&g).unwrap(),
            mean(&close),
            max_relative = 1e-12
        );

        let bet = oracle_betweenness(&g);
        for (a, b) in betweenness(&g).unwrap().iter().zip(&bet) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        assert!((mean_betweenness(&g).unwrap() - mean(&bet)).abs() < 1e-9);
        assert!((Metric::Betweenness.objective(&g).unwrap() - mean(&bet)).abs() < 1e-9);

        let cl = oracle_clustering(&g);
        assert_eq!(clustering(&g), cl);
        assert_relative_eq!(mean_clustering(&g), mean(&cl), max_relative = 1e-12);

        let con = oracle_constraint(&g);
        for (a, b) in constraint(&g).unwrap().iter().zip(&con) {
            assert_relative_eq!(*a, *b, max_relative = 1e-12);
        }
    }
}

#[test]
fn complete_graph_examples() {
    let g = complete_graph(100).unwrap();
    assert!((0..100).all(|i| g.degree(i) == 99));
    assert_eq!(complete_graph(2).unwrap().edges(), vec![(0, 1)]);
    assert_eq!(complete_graph(5).unwrap().n_edges(), 10);
    assert!(matches!(complete_graph(1), Err(Error::Parameter(_))));
    let g = complete_graph(7).unwrap();
    assert_eq!(mean_closeness(&g).unwrap(), 1.0);
    assert_eq!(mean_betweenness(&g).unwrap(), 0.0);
    assert_eq!(mean_clustering(&g), 1.0);
    assert_eq!(diameter(&g).unwrap(), 1);
}

#[test]
fn lattice_matches_oracles() {
    let g = ring_lattice(100, 19).unwrap();
    assert!((0..100).all(|i| g.degree(i) == 19));
    assert!(g.is_connected());
    let d = floyd(&g);
    assert_eq!(
        diameter(&g).unwrap(),
        d.iter().flatten().copied().max().unwrap()
    );
    let close: Vec<f64> = (0..100)
        .map(|i| 99.0 / d[i].iter().sum::<usize>() as f64)
        .collect();
    assert_relative_eq!(
        mean_closeness(&g).unwrap(),
        mean(&close),
        max_relative = 1e-12
    );
    let con = oracle_constraint(&g);
    assert_relative_eq!(
        mean_constraint(&g).unwrap(),
        mean(&con),
        max_relative = 1e-12
    );
    assert_relative_eq!(
        mean_clustering(&g),
        mean(&oracle_clustering(&g)),
        max_relative = 1e-12
    );

    let cycle = ring_lattice(6, 2).unwrap();
    assert_eq!(
        cycle.edges(),
        vec![(0, 1), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5)]
    );
    assert!(matches!(ring_lattice(99, 19), Err(Error::Parameter(_))));
}

#[test]
fn random_regular_examples() {
    for seed in 0..5 {
        let g = random_regular(100, 19, &mut rng_from_seed(seed)).unwrap();
        assert!((0..100).all(|i| g.degree(i) == 19));
        assert!(g.is_connected());
    }
    let k4 = random_regular(4, 3, &mut rng_from_seed(1)).unwrap();
    assert_eq!(k4, complete_graph(4).unwrap());
    let g = random_regular(20, 3, &mut rng_from_seed(7)).unwrap();
    for i in 0..20 {
        assert_eq!((0..20).filter(|&j| g.has_edge(i, j)).count(), 3);
    }
    let d = floyd(&g);
    assert!(d.iter().flatten().all(|&x| x < INF));
    assert!(matches!(
        random_regular(11, 3, &mut rng_from_seed(0)),
        Err(Error::Parameter(_))
    ));
    let a = random_regular(30, 5, &mut rng_from_seed(9)).unwrap();
    let b = random_regular(30, 5, &mut rng_from_seed(9)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn ten_thousand_accepted_swaps_preserve_degrees_and_connectivity() {
    let mut g = random_regular(40, 4, &mut rng_from_seed(3)).unwrap();
    let degrees = g.degree_sequence();
    let mut rng = rng_from_seed(4);
    let mut accepted = 0;
    while accepted < 10_000 {
        let swap = double_edge_swap(&g, &mut rng).expect("swap available");
        swap.apply(&mut g);
        if !g.is_connected() {
            swap.revert(&mut g);
            continue;
        }
        accepted += 1;
        assert_eq!(g.degree_sequence(), degrees);
        if accepted % 500 == 0 {
            for u in 0..g.n_nodes() {
                assert!(!g.has_edge(u, u));
                for &v in g.neighbors(u) {
                    assert!(g.has_edge(v, u));
                }
            }
        }
    }
    assert!(g.is_connected());
}

#[test]
fn rewiring_is_deterministic_and_monotone() {
    let g0 = random_regular(100, 19, &mut rng_from_seed(11)).unwrap();
    let budget = RewireBudget {
        iterations: 300,
        restarts: 3,
    };
    for metric in Metric::ALL {
        for direction in [Direction::Min, Direction::Max] {
            let a = rewire_optimize(&g0, metric, direction, budget, 5).unwrap();
            let b = rewire_optimize(&g0, metric, direction, budget, 5).unwrap();
            assert_eq!(a.graph, b.graph);
            assert_eq!(a.objective, b.objective);
            assert!(a.graph.is_connected());
            assert_eq!(a.graph.degree_sequence(), g0.degree_sequence());
            for r in &a.restarts {
                for w in r.trace.windows(2) {
                    assert!(direction.improves(w[1], w[0]));
                }
            }
            assert_relative_eq!(
                a.objective,
                metric.mean(&a.graph).unwrap(),
                max_relative = 1e-9
            );
        }
    }
}

#[test]
fn min_clustering_never_exceeds_any_start() {
    let g0 = random_regular(100, 19, &mut rng_from_seed(12)).unwrap();
    let budget = RewireBudget {
        iterations: 2_000,
        restarts: 3,
    };
    let out = rewire_optimize(&g0, Metric::Clustering, Direction::Min, budget, 6).unwrap();
    let best = mean_clustering(&out.graph);
    for r in &out.restarts {
        assert!(best <= mean_clustering(&r.start));
    }
}

#[test]
fn max_clustering_beats_random_regular_baseline() {
    let baseline: Vec<f64> = (0..20)
        .map(|s| mean_clustering(&random_regular(100, 19, &mut rng_from_seed(s)).unwrap()))
        .collect();
    let baseline = mean(&baseline);
    let budget = RewireBudget {
        iterations: 10_000,
        restarts: 3,
    };
    for seed in 0..20 {
        let g0 = random_regular(100, 19, &mut rng_from_seed(seed)).unwrap();
        let out = rewire_optimize(&g0, Metric::Clustering, Direction::Max, budget, seed).unwrap();
        assert!(
            out.objective > baseline,
            "seed {seed}: {} <= {baseline}",
            out.objective
        );
    }
}

#[test]
fn edge_list_round_trip_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let path = dir.path().join("tri.edges");
    save_edge_list(&tri, "complete", &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body, ["0 1", "0 2", "1 2"]);
    assert!(text.starts_with("# n=3 d=2 kind=complete"));

    let g0 = random_regular(100, 19, &mut rng_from_seed(1)).unwrap();
    let budget = RewireBudget {
        iterations: 200,
        restarts: 1,
    };
    let g = rewire_optimize(&g0, Metric::Closeness, Direction::Max, budget, 1)
        .unwrap()
        .graph;
    let path = dir.path().join("nested/max_closeness.edges");
    save_edge_list(&g, "max_closeness", &path).unwrap();
    assert_eq!(load_edge_list(&path).unwrap(), g);

    match parse_edge_list("# n=4\n0 1\n3 3\n") {
        Err(Error::Format { line, message }) => {
            assert_eq!(line, 3);
            assert!(message.contains("self-loop"), "{message}");
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse_edge_list("0 1\n1 0\n"),
        Err(Error::Format { line: 2, .. })
    ));
    assert!(matches!(
        parse_edge_list("# n=3\n0 5\n"),
        Err(Error::Format { line: 2, .. })
    ));
    assert!(matches!(
        parse_edge_list("0 x\n"),
        Err(Error::Format { line: 1, .. })
    ));
    let missing = load_edge_list(dir.path().join("nope.edges"));
    assert!(matches!(missing, Err(Error::Io { .. })));
}

#[test]
fn disconnected_graphs_have_undefined_metrics() {
    let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
    assert!(matches!(diameter(&g), Err(Error::MetricUndefined(_))));
    assert!(matches!(mean_closeness(&g), Err(Error::MetricUndefined(_))));
    assert!(matches!(
        mean_betweenness(&g),
        Err(Error::MetricUndefined(_))
    ));
    let isolated = Graph::from_edges(3, &[(0, 1)]).unwrap();
    assert!(matches!(
        mean_constraint(&isolated),
        Err(Error::MetricUndefined(_))
    ));
}
