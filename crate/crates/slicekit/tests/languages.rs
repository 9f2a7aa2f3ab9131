//! Language operations and decisions against enumerated languages.

mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use slicekit::{json, ops, Dag, SliceGraph, UnitSlice, FINAL_EVENT, INITIAL_EVENT};

const MAX_LEN: usize = 6;

/// A saturated slice graph: all unit decompositions of a few wrapped DAGs
/// with at most two inner events.
fn saturated_family(seed: u64) -> (SliceGraph, Vec<Dag>) {
    let mut r = rng(seed);
    let count = r.gen_range(1..=3);
    let dags: Vec<Dag> = (0..count)
        .map(|_| {
            let n = r.gen_range(1..=2);
            let d = random_dag(&mut r, n, &["a", "b"], 0.5);
            let mut labels = vec![INITIAL_EVENT.to_string()];
            labels.extend(d.labels().iter().cloned());
            labels.push(FINAL_EVENT.to_string());
            let mut edges: Vec<(usize, usize)> =
                d.edges().iter().map(|&(u, v)| (u + 1, v + 1)).collect();
            edges.extend((1..=n).map(|v| (0, v)));
            edges.extend((1..=n).map(|v| (v, n + 1)));
            Dag::new(labels, edges).unwrap()
        })
        .collect();
    let strings: Vec<Vec<UnitSlice>> = dags
        .iter()
        .flat_map(|d| d.unit_decompositions().unwrap())
        .collect();
    (SliceGraph::from_strings(&strings).unwrap(), dags)
}

fn graphs(sg: &SliceGraph) -> BTreeSet<String> {
    sg.enumerate_graph_language(MAX_LEN)
        .into_keys()
        .map(|k| format!("{k:?}"))
        .collect()
}

fn orders(sg: &SliceGraph) -> BTreeSet<String> {
    sg.enumerate_po_language(MAX_LEN)
        .into_keys()
        .map(|k| format!("{k:?}"))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn boolean_operations_match_sets(s1 in any::<u64>(), s2 in any::<u64>()) {
        let ((a, _), (b, _)) = (saturated_family(s1), saturated_family(s2));
        let (ga, gb) = (graphs(&a), graphs(&b));
        let union = graphs(&ops::union(&a, &b).unwrap());
        prop_assert_eq!(union, ga.union(&gb).cloned().collect::<BTreeSet<_>>());
        let meet = graphs(&ops::intersection(&a, &b).unwrap());
        prop_assert_eq!(meet, ga.intersection(&gb).cloned().collect::<BTreeSet<_>>());
        let diff = graphs(&ops::difference(&a, &b).unwrap());
        prop_assert_eq!(diff, ga.difference(&gb).cloned().collect::<BTreeSet<_>>());
    }

    #[test]
    fn decisions_match_sets(s1 in any::<u64>(), s2 in any::<u64>()) {
        let ((a, _), (b, _)) = (saturated_family(s1), saturated_family(s2));
        let (ga, gb) = (graphs(&a), graphs(&b));
        prop_assert_eq!(ops::graph_inclusion(&a, &b).unwrap(), ga.is_subset(&gb));
        prop_assert_eq!(ops::graph_intersect_empty(&a, &b).unwrap(), ga.is_disjoint(&gb));
        let (pa, pb) = (orders(&a), orders(&b));
        prop_assert_eq!(ops::po_inclusion(&a, &b).unwrap(), pa.is_subset(&pb));
        prop_assert_eq!(ops::po_intersect_empty(&a, &b).unwrap(), pa.is_disjoint(&pb));
    }

    #[test]
    fn canonical_forms_depend_only_on_the_language(seed in any::<u64>()) {
        let (a, dags) = saturated_family(seed);
        let reversed: Vec<Vec<UnitSlice>> = dags
            .iter()
            .rev()
            .flat_map(|d| d.unit_decompositions().unwrap())
            .collect();
        let b = SliceGraph::from_strings(&reversed).unwrap();
        let (ca, cb) = (ops::canonical_graph(&a).unwrap(), ops::canonical_graph(&b).unwrap());
        prop_assert_eq!(json::slice_graph_to_value(&ca), json::slice_graph_to_value(&cb));
        prop_assert_eq!(graphs(&ca), graphs(&a));
        let pa = ops::canonical_po(&a).unwrap();
        prop_assert_eq!(orders(&pa), orders(&a));
        let again = ops::canonical_po(&pa).unwrap();
        prop_assert_eq!(json::slice_graph_to_value(&again), json::slice_graph_to_value(&pa));
    }
}
