mod common;

use std::collections::BTreeSet;

use common::*;
use slicekit::petri::{
    build_net_causal_hdg, build_net_execution_hdg, check_interlaced_flow, executions_of,
    filter_causal, filter_execution, filter_expanded, h_family, language, verify, PtNet, Query,
    Semantics,
};
use slicekit::universe::build_bounded_hdg;
use slicekit::{Dag, SliceGraph};

fn closes(d: &Dag) -> slicekit::canon::CanonicalForm<String> {
    d.transitive_closure().canonical()
}

fn flow_agrees_with_oracle(net: &PtNet, alphabet: &[&str], max_events: usize) {
    let causal = language(net, Semantics::Causal, max_events);
    let executions = language(net, Semantics::Execution, max_events);
    for n in 0..=max_events {
        for h in wrapped_hasse_diagrams(n, alphabet) {
            let key = closes(&h);
            for (mode, oracle) in [
                (Semantics::Causal, &causal),
                (Semantics::Execution, &executions),
            ] {
                let w = check_interlaced_flow(&h, net, mode).unwrap();
                assert_eq!(w.is_some(), oracle.contains_key(&key), "{mode:?} on {h:?}");
                if let Some(f) = w {
                    assert!(f.is_valid(&h, net, mode));
                }
            }
        }
    }
}

#[test]
fn interlaced_flows_match_processes_on_loops() {
    flow_agrees_with_oracle(&loops_net(), &["a", "b"], 4);
}

#[test]
fn interlaced_flows_match_processes_on_producer() {
    flow_agrees_with_oracle(&producer_net(), &["a", "b"], 4);
}

#[test]
fn interlaced_flows_match_processes_on_mutex() {
    flow_agrees_with_oracle(&mutex_net(), &["a", "b", "c"], 3);
}

#[test]
fn executions_of_diamond() {
    let ex = executions_of(&diamond().transitive_closure());
    let expected: BTreeSet<_> = [
        diamond(),
        chain_ab(),
        dag(&["ι", "b", "a", "ε"], &[(0, 1), (1, 2), (2, 3)]),
    ]
    .iter()
    .map(closes)
    .collect();
    assert_eq!(ex.keys().cloned().collect::<BTreeSet<_>>(), expected);
}

#[test]
fn causal_filter_of_bounded_universe_matches_oracle() {
    let net = loops_net();
    let hdg = build_bounded_hdg(2, net.transitions());
    let f = filter_causal(&hdg, &net, 2).unwrap();
    let got = f.enumerate_po_language(6);
    let expected: BTreeSet<_> = language(&net, Semantics::Causal, 4)
        .into_iter()
        .filter(|(_, p)| p.hasse().global_width().unwrap() <= 2)
        .map(|(k, _)| k)
        .collect();
    assert_eq!(got.keys().cloned().collect::<BTreeSet<_>>(), expected);
    let ex = filter_execution(&hdg, &net, 2)
        .unwrap()
        .enumerate_po_language(6);
    assert!(ex.contains_key(&closes(&chain_ab())));
    assert!(!got.contains_key(&closes(&chain_ab())));
    assert!(got.keys().all(|k| ex.contains_key(k)));
}

#[test]
fn impossible_net_filters_to_empty() {
    let net = starving_net();
    let spec = ud(&chain_ab());
    assert!(filter_execution(&spec, &net, 2).unwrap().is_empty());
}

#[test]
fn filter_paths_follow_markings_and_frontier_bound() {
    for net in [loops_net(), mutex_net()] {
        let k = net.token_bound(1000).unwrap();
        let alphabet: Vec<&str> = net.transitions().iter().map(String::as_str).collect();
        for n in 1..=3 {
            for h in wrapped_hasse_diagrams(n, &alphabet) {
                for mode in [Semantics::Causal, Semantics::Execution] {
                    let fr = filter_expanded(&ud(&h), &net, k * net.places().len() as u32, mode);
                    let g = &fr.graph;
                    if mode == Semantics::Causal {
                        let bound = k as usize * net.places().len();
                        assert!(g.labels().iter().all(|s| s.out_width() <= bound));
                    }
                    let mut stack: Vec<(usize, Vec<u32>)> = g
                        .initial()
                        .iter()
                        .map(|&v| (v, net.initial_marking()))
                        .collect();
                    while let Some((v, m)) = stack.pop() {
                        let s = g.label(v);
                        let m = if s.is_initial() || s.is_final() {
                            m
                        } else {
                            net.fire(&m, s.event()).unwrap()
                        };
                        if !s.is_final() {
                            let sums: Vec<u32> = fr.outputs[v]
                                .iter()
                                .map(|ports| ports.iter().flatten().sum())
                                .collect();
                            assert_eq!(sums, m);
                        }
                        stack.extend(g.successors(v).iter().map(|&w| (w, m.clone())));
                    }
                }
            }
        }
    }
}

#[test]
fn verification_recipe_matches_oracles() {
    let net = loops_net();
    assert!(verify(
        &ud(&diamond()),
        &net,
        Semantics::Causal,
        Query::Inclusion,
        None
    )
    .unwrap());
    assert!(verify(
        &ud(&chain_ab()),
        &net,
        Semantics::Causal,
        Query::EmptyIntersect,
        None
    )
    .unwrap());
    assert!(!verify(
        &ud(&chain_ab()),
        &net,
        Semantics::Execution,
        Query::EmptyIntersect,
        None
    )
    .unwrap());
    let empty = SliceGraph::new(Vec::new(), Vec::new(), Vec::new(), Vec::new()).unwrap();
    assert!(verify(&empty, &net, Semantics::Causal, Query::EmptyIntersect, None).unwrap());
    assert!(verify(&empty, &net, Semantics::Causal, Query::Inclusion, None).unwrap());
}

#[test]
fn causal_generator_stabilizes_in_c() {
    let net = loops_net();
    let k = 1;
    let c = k as usize * net.places().len();
    let a = build_net_causal_hdg(&net, k, c).unwrap();
    let b = build_net_causal_hdg(&net, k, c + 1).unwrap();
    assert_eq!(
        a.enumerate_po_language(6).keys().collect::<Vec<_>>(),
        b.enumerate_po_language(6).keys().collect::<Vec<_>>()
    );
}

#[test]
fn duplicated_place_keeps_execution_generator() {
    let net = loops_net();
    let mut places = net.places().to_vec();
    places.push(places[0].clone());
    let dup = PtNet::new(net.transitions().to_vec(), places).unwrap();
    assert_eq!(
        build_net_execution_hdg(&net, 1, 2).unwrap(),
        build_net_execution_hdg(&dup, 1, 2).unwrap()
    );
}

#[test]
fn single_loop_yields_chains() {
    let g = build_net_causal_hdg(&single_loop_net(), 1, 2).unwrap();
    let orders = g.enumerate_po_language(6);
    assert_eq!(orders.len(), 5);
    assert!(orders
        .values()
        .all(|p| p.hasse().edges().len() + 1 == p.len()));
}

#[test]
fn non_safe_net_is_rejected() {
    let net = producer_net();
    assert_eq!(
        build_net_causal_hdg(&net, 1, 2),
        Err(slicekit::Error::NotKSafe(1))
    );
}

#[test]
fn family_widths_grow_and_execute() {
    let net = loops_net();
    let widths: Vec<usize> = (1..=3)
        .map(|n| h_family(n).existential_width().unwrap())
        .collect();
    assert!(widths.windows(2).all(|w| w[0] < w[1]), "{widths:?}");
    for n in 1..=3 {
        assert!(
            check_interlaced_flow(&h_family(n), &net, Semantics::Execution)
                .unwrap()
                .is_some()
        );
    }
}
