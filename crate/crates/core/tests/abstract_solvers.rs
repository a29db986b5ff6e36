use cliquesep::graph::Graph;
use cliquesep::oracle::AbstractOracle;
use cliquesep::solvers::{brute_coloring, brute_mif, brute_mis, is_forest, is_proper_coloring, solve_mif, solve_mis, solve_qcoloring};
use proptest::prelude::*;

fn graph(n: usize, bits: &[bool]) -> Graph {
    let mut e = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if bits[k] {
                e.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &e).unwrap()
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..13).prop_flat_map(|n| prop::collection::vec(prop::bool::weighted(0.3), n * (n - 1) / 2).prop_map(move |b| graph(n, &b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solvers_match_brute_force(g in arb_graph()) {
        let o = AbstractOracle::new(g.clone());
        let mis = solve_mis(&g, &o, 3).unwrap();
        prop_assert!(g.is_independent(&mis.nodes));
        prop_assert_eq!(mis.nodes.len(), brute_mis(&g).unwrap().len());
        let mif = solve_mif(&g, &o, 3).unwrap();
        prop_assert!(is_forest(&g, &mif.nodes));
        prop_assert_eq!(mif.nodes.len(), brute_mif(&g).unwrap().len());
        for q in 1..4 {
            let c = solve_qcoloring(&g, &o, q, 3).unwrap();
            prop_assert_eq!(c.coloring.is_some(), brute_coloring(&g, q).unwrap().is_some());
            if let Some(col) = c.coloring {
                prop_assert!(is_proper_coloring(&g, &col, q));
            }
        }
    }
}

#[test]
fn grid_graph_mis() {
    let k = 6;
    let mut e = Vec::new();
    for v in 0..k * k {
        if v % k + 1 < k {
            e.push((v, v + 1));
        }
        if v + k < k * k {
            e.push((v, v + k));
        }
    }
    let g = Graph::from_edges(k * k, &e).unwrap();
    let o = AbstractOracle::new(g.clone());
    let s = solve_mis(&g, &o, 6).unwrap();
    assert_eq!(s.nodes.len(), 18);
    assert!(s.stats.oracle_calls > 0);
}
