mod common;

use num_rational::Ratio;
use proptest::prelude::*;

use matchstab::engines::{max_cardinality_bipartite, max_cardinality_general, max_weight_general, Graph};
use matchstab::{IntGraph, RationalGraph};

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

// A graph on n vertices from a bit per possible edge.
fn graph_strategy(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1..=max_n).prop_flat_map(|n| {
        let all = pairs(n);
        proptest::collection::vec(any::<bool>(), all.len())
            .prop_map(move |keep| (n, all.iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| *e).collect()))
    })
}

proptest! {
    #[test]
    fn general_engine_is_maximum((n, edges) in graph_strategy(10)) {
        let mut g = IntGraph::new(n);
        for &(u, v) in &edges {
            g.add_edge(u, v).unwrap();
        }
        let m = max_cardinality_general(&g);
        prop_assert!(m.is_valid_for(&g));
        prop_assert_eq!(m.size() as i64, common::brute_max_cardinality(n, &edges));
    }

    #[test]
    fn bipartite_engine_is_maximum(left in 1usize..6, right in 1usize..6, bits in any::<u64>()) {
        let mut g = IntGraph::bipartite(left, right);
        let mut edges = Vec::new();
        for u in 0..left {
            for v in 0..right {
                if bits >> (u * 6 + v) & 1 == 1 {
                    g.add_edge(u, left + v).unwrap();
                    edges.push((u, left + v));
                }
            }
        }
        let m = max_cardinality_bipartite(&g).unwrap();
        prop_assert!(m.is_valid_for(&g));
        prop_assert_eq!(m.size() as i64, common::brute_max_cardinality(left + right, &edges));
    }

    #[test]
    fn weighted_engine_is_maximum((n, edges) in graph_strategy(9), weights in proptest::collection::vec(0i64..6, 36)) {
        let mut g = IntGraph::new(n);
        let weighted: Vec<(usize, usize, i64)> = edges.iter().zip(&weights).map(|(&(u, v), &w)| (u, v, w)).collect();
        for &(u, v, w) in &weighted {
            g.add_weighted_edge(u, v, w).unwrap();
        }
        let m = max_weight_general(&g);
        prop_assert!(m.is_valid_for(&g));
        prop_assert_eq!(m.weight(&g), common::brute_max_weight(n, &weighted));
    }

    // Halves scale every weight uniformly, so the optimum scales too.
    #[test]
    fn rational_weights_scale((n, edges) in graph_strategy(8), weights in proptest::collection::vec(0i64..6, 28)) {
        let mut g = RationalGraph::new(n);
        let weighted: Vec<(usize, usize, i64)> = edges.iter().zip(&weights).map(|(&(u, v), &w)| (u, v, w)).collect();
        for &(u, v, w) in &weighted {
            g.add_weighted_edge(u, v, Ratio::new(w, 2)).unwrap();
        }
        let m = max_weight_general(&g);
        prop_assert!(m.is_valid_for(&g));
        prop_assert_eq!(m.weight(&g), Ratio::new(common::brute_max_weight(n, &weighted), 2));
    }
}

#[test]
fn class_counts_of_small_connected_graphs() {
    // Connected graphs up to isomorphism on 1..=6 vertices.
    let counts: Vec<usize> = (1..=6).map(|n| common::connected_graphs(n).len()).collect();
    assert_eq!(counts, [1, 1, 2, 6, 21, 112]);
}

#[test]
fn empty_graph_has_empty_matchings() {
    let g: Graph<i64> = Graph::new(4);
    assert_eq!(max_cardinality_general(&g).size(), 0);
    assert_eq!(max_cardinality_bipartite(&g).unwrap().size(), 0);
    assert_eq!(max_weight_general(&g).size(), 0);
}
