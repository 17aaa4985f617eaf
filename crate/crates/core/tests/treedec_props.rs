mod common;

use proptest::prelude::*;

use csp_extform::csp::ConstraintGraph;
use csp_extform::treedec::{heuristic_tree_decomposition, make_nice};

fn graph() -> impl Strategy<Value = ConstraintGraph> {
    (1usize..=7).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
            .collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len())
            .prop_map(move |e| ConstraintGraph::new(n, e))
    })
}

fn tree() -> impl Strategy<Value = ConstraintGraph> {
    (2usize..=12).prop_flat_map(|n| {
        proptest::collection::vec(any::<prop::sample::Index>(), n - 1).prop_map(move |parents| {
            let edges = parents
                .iter()
                .enumerate()
                .map(|(i, p)| (p.index(i + 1) + 1, i + 2));
            ConstraintGraph::new(n, edges)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn nicing_preserves_validity_and_width(g in graph()) {
        let td = heuristic_tree_decomposition(&g);
        prop_assert_eq!(td.validate(&g), Ok(()));
        let ntd = make_nice(&td);
        prop_assert_eq!(ntd.validate(&g), Ok(()));
        prop_assert_eq!(ntd.width(), td.width());
        prop_assert!(ntd.len() <= 4 * (ntd.width() + 2) * g.n());
        for bag in td.bags.iter().filter(|b| !b.is_empty()) {
            prop_assert!(ntd.nodes.iter().any(|node| &node.bag == bag));
        }
    }

    #[test]
    fn heuristic_width_is_at_least_treewidth(g in graph()) {
        prop_assert!(heuristic_tree_decomposition(&g).width() >= common::exact_treewidth(&g));
    }

    #[test]
    fn trees_have_width_one(g in tree()) {
        prop_assert_eq!(heuristic_tree_decomposition(&g).width(), 1);
    }

    #[test]
    fn any_elimination_order_gives_a_valid_decomposition(g in graph(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut order: Vec<usize> = (1..=g.n()).collect();
        order.shuffle(&mut csp_extform::random::case_rng(seed, 0));
        let td = common::td_from_order(&g, &order);
        prop_assert_eq!(td.validate(&g), Ok(()));
        prop_assert_eq!(make_nice(&td).validate(&g), Ok(()));
    }
}

#[test]
fn cliques_have_width_t_minus_one() {
    for t in 1..=7 {
        let edges = (1..=t).flat_map(|u| (u + 1..=t).map(move |v| (u, v)));
        let g = ConstraintGraph::new(t, edges);
        assert_eq!(heuristic_tree_decomposition(&g).width(), t - 1);
    }
}
