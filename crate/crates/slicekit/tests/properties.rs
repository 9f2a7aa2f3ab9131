//! Randomized invariants over small DAGs, slice graphs and nets.

mod common;

use std::ops::ControlFlow;

use common::*;
use proptest::prelude::*;
use slicekit::reduction::{is_hasse_generator, transitive_reduce};
use slicekit::universe::has_c_flow;
use slicekit::{json, Dag, Slice};

/// A DAG on 1..=max vertices over {a, b}, numbered topologically.
fn arb_dag(max: usize) -> impl Strategy<Value = Dag> {
    (1..=max).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            proptest::collection::vec(prop_oneof!["a", "b"], n),
            proptest::collection::vec(any::<bool>(), pairs),
        )
            .prop_map(move |(labels, bits)| {
                let edges = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .zip(bits)
                    .filter_map(|(p, b)| b.then_some(p))
                    .collect();
                Dag::new(labels.into_iter().collect(), edges).unwrap()
            })
    })
}

/// Adds a unique source and sink so every vertex lies between them.
fn rooted(d: &Dag) -> Dag {
    let n = d.len();
    let mut labels = vec!["a".to_string()];
    labels.extend(d.labels().iter().cloned());
    labels.push("b".to_string());
    let mut edges: Vec<(usize, usize)> = d.edges().iter().map(|&(u, v)| (u + 1, v + 1)).collect();
    edges.extend((1..=n).map(|v| (0, v)));
    edges.extend((1..=n).map(|v| (v, n + 1)));
    Dag::new(labels, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduction_keeps_closure_and_is_idempotent(d in arb_dag(6)) {
        let r = d.transitive_reduction();
        prop_assert_eq!(r.transitive_closure(), d.transitive_closure());
        prop_assert!(r.is_transitive_reduced());
        prop_assert_eq!(r.transitive_reduction().edges().to_vec(), r.edges().to_vec());
        prop_assert_eq!(d.transitive_closure().hasse().canonical(), r.canonical());
    }

    #[test]
    fn first_decomposition_of_each_order_composes_back(d in arb_dag(4)) {
        let h = rooted(&d);
        let mut orders = 0;
        h.for_each_topological_order(|order| {
            let _ = h.cuttings_of_order(order, &mut |c| {
                let composed = Slice::compose_units(&c.slices(&h)).unwrap().to_dag().unwrap();
                let mut back: Vec<(usize, usize)> =
                    composed.edges().iter().map(|&(u, v)| (c.order[u], c.order[v])).collect();
                let mut want = h.edges().to_vec();
                back.sort_unstable();
                want.sort_unstable();
                assert_eq!(back, want);
                ControlFlow::Break(())
            });
            orders += 1;
            if orders < 50 { ControlFlow::Continue(()) } else { ControlFlow::Break(()) }
        });
        prop_assert!(orders > 0);
    }

    #[test]
    fn flow_exists_iff_global_width_fits(d in arb_dag(4), c in 1u32..=4) {
        let h = rooted(&d);
        let w = h.global_width().unwrap();
        let flow = has_c_flow(&h, c).unwrap();
        prop_assert_eq!(flow.is_some(), w <= c as usize);
        if let Some(f) = flow {
            prop_assert!(f.is_valid(&h, c));
        }
    }

    #[test]
    fn slice_graph_reduction_keeps_orders(seed in any::<u64>()) {
        let sg = random_slice_graph(&mut rng(seed), 5, 3);
        let r = transitive_reduce(&sg);
        let before: Vec<_> = sg.enumerate_po_language(6).into_keys().collect();
        let after: Vec<_> = r.enumerate_po_language(6).into_keys().collect();
        prop_assert_eq!(before, after);
        prop_assert!(is_hasse_generator(&r));
    }

    #[test]
    fn slice_graph_json_round_trips(seed in any::<u64>()) {
        let sg = random_slice_graph(&mut rng(seed), 5, 3);
        let text = json::to_canonical_string(&json::slice_graph_to_value(&sg));
        let back = json::parse_slice_graph(&text).unwrap();
        prop_assert_eq!(json::to_canonical_string(&json::slice_graph_to_value(&back)), text);
        prop_assert_eq!(
            back.enumerate_graph_language(6).into_keys().collect::<Vec<_>>(),
            sg.enumerate_graph_language(6).into_keys().collect::<Vec<_>>()
        );
    }

    #[test]
    fn firing_respects_the_token_bound(word in proptest::collection::vec(prop_oneof!["a", "b", "c"], 0..20)) {
        for net in [mutex_net(), starving_net()] {
            let k = net.token_bound(100).unwrap();
            let mut m = net.initial_marking();
            for t in word.iter().filter(|t| net.transitions().contains(t)) {
                if net.enabled(&m, t).unwrap() {
                    m = net.fire(&m, t).unwrap();
                } else {
                    prop_assert!(net.fire(&m, t).is_err());
                }
                prop_assert!(m.iter().all(|&x| x <= k));
            }
            prop_assert_eq!(m, net.initial_marking());
        }
    }
}
