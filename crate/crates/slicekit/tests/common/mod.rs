//! Brute-force generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use slicekit::petri::{Place, PtNet};
use slicekit::{Dag, SliceGraph, UnitSlice, FINAL_EVENT, INITIAL_EVENT};

pub fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

pub fn dag(xs: &[&str], edges: &[(usize, usize)]) -> Dag {
    Dag::new(labels(xs), edges.to_vec()).unwrap()
}

pub fn diamond() -> Dag {
    dag(&["ι", "a", "b", "ε"], &[(0, 1), (0, 2), (1, 3), (2, 3)])
}

pub fn diamond_closed() -> Dag {
    dag(
        &["ι", "a", "b", "ε"],
        &[(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)],
    )
}

pub fn chain_ab() -> Dag {
    dag(&["ι", "a", "b", "ε"], &[(0, 1), (1, 2), (2, 3)])
}

/// The slice graph of all unit decompositions of `d`.
pub fn ud(d: &Dag) -> SliceGraph {
    SliceGraph::from_strings(&d.unit_decompositions().unwrap()).unwrap()
}

/// Every labeling of `n` slots over `alphabet`.
pub fn labelings(n: usize, alphabet: &[&str]) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|l: Vec<String>| {
                alphabet.iter().map(move |a| {
                    let mut l = l.clone();
                    l.push(a.to_string());
                    l
                })
            })
            .collect();
    }
    out
}

/// All DAGs on `n` vertices numbered topologically, given as edge lists.
pub fn forward_edge_sets(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    (0u64..1 << pairs.len())
        .map(|m| {
            pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| m >> k & 1 == 1)
                .map(|(_, &p)| p)
                .collect()
        })
        .collect()
}

/// Labeled Hasse diagrams wrapped by `ι` and `ε`, with `n` inner events,
/// up to isomorphism.
pub fn wrapped_hasse_diagrams(n: usize, alphabet: &[&str]) -> Vec<Dag> {
    let mut shapes = BTreeMap::new();
    for edges in forward_edge_sets(n) {
        let d = Dag::new(vec![String::new(); n], edges).unwrap();
        let h = d.transitive_reduction();
        shapes.entry(h.canonical()).or_insert(h);
    }
    let mut out = BTreeMap::new();
    for shape in shapes.values() {
        for l in labelings(n, alphabet) {
            let mut labels = vec![INITIAL_EVENT.to_string()];
            labels.extend(l);
            labels.push(FINAL_EVENT.to_string());
            let mut edges: Vec<(usize, usize)> =
                shape.edges().iter().map(|&(u, v)| (u + 1, v + 1)).collect();
            edges.extend((0..n).map(|v| (0, v + 1)));
            edges.extend((0..n).map(|v| (v + 1, n + 1)));
            if n == 0 {
                edges.push((0, 1));
            }
            let h = Dag::new(labels, edges).unwrap().transitive_reduction();
            out.entry(h.canonical()).or_insert(h);
        }
    }
    out.into_values().collect()
}

/// A random DAG on `n` vertices with the given edge probability.
pub fn random_dag(rng: &mut StdRng, n: usize, alphabet: &[&str], p: f64) -> Dag {
    let labels = (0..n)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())].to_string())
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Dag::new(labels, edges).unwrap()
}

/// One unit decomposition of `d` along a random topological order.
pub fn random_decomposition(rng: &mut StdRng, d: &Dag) -> Vec<UnitSlice> {
    let mut orders = Vec::new();
    d.for_each_topological_order(|o| {
        orders.push(o.to_vec());
        if orders.len() < 64 {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    });
    let order = &orders[rng.gen_range(0..orders.len())];
    let mut out = Vec::new();
    let _ = d.cuttings_of_order(order, &mut |c| {
        out = c.slices(d);
        ControlFlow::Break(())
    });
    out
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A random slice graph whose labels come from unit decompositions of
/// small random DAGs, with extra edges between compatible vertices.
pub fn random_slice_graph(rng: &mut StdRng, max_vertices: usize, max_width: usize) -> SliceGraph {
    loop {
        let pool: Vec<UnitSlice> = (0..3)
            .flat_map(|_| {
                let n = rng.gen_range(2..=4);
                let d = random_dag(rng, n, &["a", "b"], 0.5);
                let mut labels = vec![INITIAL_EVENT.to_string()];
                labels.extend(d.labels().iter().cloned());
                labels.push(FINAL_EVENT.to_string());
                let mut edges: Vec<(usize, usize)> =
                    d.edges().iter().map(|&(u, v)| (u + 1, v + 1)).collect();
                let has_in = |v: usize| d.edges().iter().any(|&(_, w)| w == v);
                let has_out = |v: usize| d.edges().iter().any(|&(u, _)| u == v);
                edges.extend((0..n).filter(|&v| !has_in(v)).map(|v| (0, v + 1)));
                edges.extend((0..n).filter(|&v| !has_out(v)).map(|v| (v + 1, n + 1)));
                let w = Dag::new(labels, edges).unwrap();
                let mut picked = random_decomposition(rng, &w);
                picked.extend(random_decomposition(rng, &w));
                picked
            })
            .filter(|s| s.width() <= max_width)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if pool.is_empty() {
            continue;
        }
        let k = rng.gen_range(2..=max_vertices.min(pool.len()).max(2));
        let chosen: Vec<UnitSlice> = (0..k)
            .map(|_| pool[rng.gen_range(0..pool.len())].clone())
            .collect();
        let mut edges = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if slicekit::slice_graph::can_follow(&chosen[i], &chosen[j]) && rng.gen_bool(0.7) {
                    edges.push((i, j));
                }
            }
        }
        let initial: Vec<usize> = (0..k).filter(|&i| chosen[i].is_initial()).collect();
        let finals: Vec<usize> = (0..k).filter(|&i| chosen[i].is_final()).collect();
        let sg = SliceGraph::new(chosen, edges, initial, finals)
            .unwrap()
            .trim();
        if !sg.is_empty() && sg.check().is_ok() {
            return sg;
        }
    }
}

fn place(initial: u32, take: &[(&str, u32)], put: &[(&str, u32)]) -> Place {
    Place {
        initial,
        take: take.iter().map(|&(t, n)| (t.to_string(), n)).collect(),
        put: put.iter().map(|&(t, n)| (t.to_string(), n)).collect(),
    }
}

/// Two independent single-token self loops for `a` and `b`.
pub fn loops_net() -> PtNet {
    slicekit::petri::independent_loops_net()
}

/// `a` feeds `b` through an unbounded buffer.
pub fn producer_net() -> PtNet {
    PtNet::new(
        labels(&["a", "b"]),
        vec![
            place(1, &[("a", 1)], &[("a", 1)]),
            place(0, &[("b", 1)], &[("a", 1)]),
            place(1, &[("b", 1)], &[("b", 1)]),
        ],
    )
    .unwrap()
}

/// `a` and `b` share a mutex; two copies of `c` run concurrently.
pub fn mutex_net() -> PtNet {
    PtNet::new(
        labels(&["a", "b", "c"]),
        vec![
            place(1, &[("a", 1), ("b", 1)], &[("a", 1), ("b", 1)]),
            place(2, &[("c", 1)], &[("c", 1)]),
        ],
    )
    .unwrap()
}

/// A net whose `b` needs a token nobody produces.
pub fn starving_net() -> PtNet {
    PtNet::new(
        labels(&["a", "b"]),
        vec![
            place(1, &[("a", 1)], &[("a", 1)]),
            place(0, &[("b", 1)], &[("b", 1)]),
        ],
    )
    .unwrap()
}

pub fn single_loop_net() -> PtNet {
    PtNet::new(labels(&["a"]), vec![place(1, &[("a", 1)], &[("a", 1)])]).unwrap()
}

/// A looping generator whose DAGs carry transitive edges along the
/// pass-through wire and parallel edges out of `b`.
pub fn looping_transitive_graph() -> SliceGraph {
    use slicekit::Link;
    let i = UnitSlice::initial(INITIAL_EVENT, 2);
    let a = UnitSlice::new("a", vec![Link::Center, Link::Out(1)], 2).unwrap();
    let b = UnitSlice::new("b", vec![Link::Center, Link::Center], 2).unwrap();
    let e = UnitSlice::terminal(FINAL_EVENT, 2);
    let edges = [
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 1),
        (1, 2),
        (2, 1),
        (2, 2),
        (1, 3),
        (2, 3),
    ];
    SliceGraph::checked(vec![i, a, b, e], edges, [0], [3]).unwrap()
}
