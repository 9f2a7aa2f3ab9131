//! Saturation: slice languages closed under re-decomposition.
//!
//! Two slice strings are similar when they differ in one adjacent pair
//! `S1 S2` replaced by another unit decomposition `S1' S2'` of `S1 ∘ S2`.
//! A language is saturated when it is closed under similarity, i.e. it holds
//! every unit decomposition of each DAG it generates.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::ops::ControlFlow;

use crate::automaton::SliceAutomaton;
use crate::dag::{all_permutations, permutations, Dag};
use crate::error::{Error, Result};
use crate::slice::{End, Link, Slice, UnitSlice};
use crate::slice_graph::SliceGraph;

/// Checks that a string is a legal full slice string and composes it.
pub fn compose_legal(u: &[UnitSlice]) -> Result<Dag> {
    SliceGraph::from_string(u).map_err(|e| match e {
        Error::IllegalSliceString(m) | Error::InvalidGraph(m) => Error::IllegalSliceString(m),
        other => other,
    })?;
    Ok(Slice::compose_units(u)?
        .to_dag()
        .expect("legal strings close both frontiers"))
}

/// Whether two legal strings compose to isomorphic DAGs.
pub fn equivalent(u: &[UnitSlice], w: &[UnitSlice]) -> Result<bool> {
    Ok(compose_legal(u)?.is_isomorphic(&compose_legal(w)?))
}

/// A chain of strings, consecutive ones differing in one adjacent pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceStringEquivalence {
    pub chain: Vec<Vec<UnitSlice>>,
}

/// Searches a rewriting chain from `u` to `w` by breadth-first search over
/// adjacent re-decompositions.
pub fn equivalence_witness(
    u: &[UnitSlice],
    w: &[UnitSlice],
) -> Result<Option<SliceStringEquivalence>> {
    if !equivalent(u, w)? {
        return Ok(None);
    }
    let mut parent: HashMap<Vec<UnitSlice>, Option<Vec<UnitSlice>>> =
        HashMap::from([(u.to_vec(), None)]);
    let mut queue = VecDeque::from([u.to_vec()]);
    while let Some(x) = queue.pop_front() {
        if x == w {
            let mut chain = vec![x.clone()];
            let mut cur = x;
            while let Some(Some(p)) = parent.get(&cur) {
                chain.push(p.clone());
                cur = p.clone();
            }
            chain.reverse();
            return Ok(Some(SliceStringEquivalence { chain }));
        }
        for i in 0..x.len().saturating_sub(1) {
            for (a, b) in two_decompositions(&x[i], &x[i + 1]) {
                let mut y = x.clone();
                y[i] = a;
                y[i + 1] = b;
                if !parent.contains_key(&y) {
                    parent.insert(y.clone(), Some(x.clone()));
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(None)
}

/// All pairs `(S1', S2')` of unit slices with `S1' ∘ S2' = s1 ∘ s2`,
/// frontier numbers of the outer frontiers preserved.
pub fn two_decompositions(s1: &UnitSlice, s2: &UnitSlice) -> Vec<(UnitSlice, UnitSlice)> {
    let Ok(c) = s1.to_slice().compose(&s2.to_slice()) else {
        return Vec::new();
    };
    let linked = c.edges.contains(&(End::Center(0), End::Center(1)));
    let mut orders = vec![(0usize, 1usize)];
    if !linked {
        orders.push((1, 0));
    }
    let mut out = BTreeSet::new();
    for (first, second) in orders {
        let cut: Vec<usize> = (0..c.edges.len())
            .filter(|&e| {
                let (a, b) = c.edges[e];
                matches!(a, End::In(_)) && b != End::Center(first) || a == End::Center(first)
            })
            .collect();
        let mut items = cut.clone();
        let _ = permutations(&mut items, 0, &mut |numbering: &[usize]| {
            let pos = |e: usize| numbering.iter().position(|&x| x == e).unwrap();
            let mut inputs = vec![Link::Center; c.in_width];
            for (e, &(a, b)) in c.edges.iter().enumerate() {
                if let End::In(i) = a {
                    inputs[i] = if b == End::Center(first) {
                        Link::Center
                    } else {
                        Link::Out(pos(e))
                    };
                }
            }
            let x = UnitSlice::new(c.center[first].clone(), inputs, numbering.len())
                .expect("cut numbering is a bijection");
            let inputs2 = numbering
                .iter()
                .map(|&e| match c.edges[e].1 {
                    End::Out(j) => Link::Out(j),
                    _ => Link::Center,
                })
                .collect();
            let y = UnitSlice::new(c.center[second].clone(), inputs2, c.out_width)
                .expect("outer frontier preserved");
            out.insert((x, y));
            ControlFlow::Continue(())
        });
    }
    out.into_iter().collect()
}

fn dfa_of(sg: &SliceGraph) -> (SliceAutomaton, HashMap<(usize, UnitSlice), usize>) {
    let dfa = sg.to_automaton().minimize();
    let delta = dfa
        .labeled_transitions()
        .map(|(p, s, q)| ((p, s.clone()), q))
        .collect();
    (dfa, delta)
}

/// Decides saturation on the minimal DFA: every two-step path `q S1 r S2 q'`
/// must be matched by `q S1' r' S2' q'` for every re-decomposition.
pub fn is_saturated(sg: &SliceGraph) -> bool {
    let (dfa, delta) = dfa_of(sg);
    let mut by_source: BTreeMap<usize, Vec<(&UnitSlice, usize)>> = BTreeMap::new();
    for (p, s, q) in dfa.labeled_transitions() {
        by_source.entry(p).or_default().push((s, q));
    }
    let mut cache: HashMap<(UnitSlice, UnitSlice), Vec<(UnitSlice, UnitSlice)>> = HashMap::new();
    for (q, s1, r) in dfa.labeled_transitions() {
        for &(s2, q2) in by_source.get(&r).map(Vec::as_slice).unwrap_or(&[]) {
            let decs = cache
                .entry((s1.clone(), s2.clone()))
                .or_insert_with(|| two_decompositions(s1, s2));
            let ok = decs.iter().all(|(a, b)| {
                delta
                    .get(&(q, a.clone()))
                    .and_then(|&r2| delta.get(&(r2, b.clone())))
                    == Some(&q2)
            });
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Whether some numbering along `order` spells a word accepted by `dfa`.
fn order_accepted(
    dfa: &SliceAutomaton,
    delta: &HashMap<(usize, UnitSlice), usize>,
    dag: &Dag,
    order: &[usize],
) -> bool {
    let n = order.len();
    let mut pos = vec![0usize; dag.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let edges = dag.edges();
    let cuts: Vec<Vec<usize>> = (0..n)
        .map(|k| {
            (0..edges.len())
                .filter(|&e| pos[edges[e].0] <= k && pos[edges[e].1] > k)
                .collect()
        })
        .collect();
    type Walk<'a> = (
        &'a SliceAutomaton,
        &'a HashMap<(usize, UnitSlice), usize>,
        &'a Dag,
        &'a [usize],
        &'a [Vec<usize>],
    );
    fn rec(k: usize, state: usize, prev: &[usize], ctx: &Walk) -> bool {
        let (dfa, delta, dag, order, cuts) = *ctx;
        if k == order.len() {
            return dfa.accepting().contains(&state);
        }
        let v = order[k];
        let mut items = cuts[k].clone();
        let mut found = false;
        let _ = permutations(&mut items, 0, &mut |numbering: &[usize]| {
            let inputs = prev
                .iter()
                .map(|&e| {
                    if dag.edges()[e].1 == v {
                        Link::Center
                    } else {
                        Link::Out(numbering.iter().position(|&x| x == e).unwrap())
                    }
                })
                .collect();
            let s = UnitSlice::new(dag.labels()[v].clone(), inputs, numbering.len()).unwrap();
            if let Some(&next) = delta.get(&(state, s)) {
                if rec(k + 1, next, numbering, ctx) {
                    found = true;
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        found
    }
    rec(0, dfa.start(), &[], &(dfa, delta, dag, order, &cuts))
}

/// Bounded weak-saturation test: every DAG of at most `max_len` vertices
/// in the graph language has, for each topological order, a decomposition
/// along that order in the slice language.
pub fn is_weakly_saturated_bounded(sg: &SliceGraph, max_len: usize) -> bool {
    let (dfa, delta) = dfa_of(sg);
    sg.enumerate_graph_language(max_len).values().all(|dag| {
        let mut ok = true;
        dag.for_each_topological_order(|order| {
            if order_accepted(&dfa, &delta, dag, order) {
                ControlFlow::Continue(())
            } else {
                ok = false;
                ControlFlow::Break(())
            }
        });
        ok
    })
}

/// Turns a weakly saturated slice graph into a saturated one generating the
/// same DAGs, by closing every frontier under all renumberings.
pub fn saturate_weak(sg: &SliceGraph) -> SliceGraph {
    let sg = sg.trim();
    type Key = (usize, usize, usize);
    let perms: Vec<Vec<Vec<usize>>> = (0..=sg.width()).map(all_permutations).collect();
    let mut index: BTreeMap<Key, usize> = BTreeMap::new();
    let mut labels = Vec::new();
    let mut keys = Vec::new();
    for v in 0..sg.len() {
        let s = sg.label(v);
        for (pi_id, pi) in perms[s.in_width()].iter().enumerate() {
            for (si_id, sigma) in perms[s.out_width()].iter().enumerate() {
                index.insert((v, pi_id, si_id), labels.len());
                labels.push(s.permuted(pi, sigma));
                keys.push((v, pi_id, si_id));
            }
        }
    }
    let mut edges = Vec::new();
    for (id, &(v, _, sigma)) in keys.iter().enumerate() {
        for &w in sg.successors(v) {
            for s2 in 0..perms[sg.label(w).out_width()].len() {
                edges.push((id, index[&(w, sigma, s2)]));
            }
        }
    }
    let initial: Vec<usize> = keys
        .iter()
        .enumerate()
        .filter(|(_, k)| sg.initial().contains(&k.0))
        .map(|(i, _)| i)
        .collect();
    let finals: Vec<usize> = keys
        .iter()
        .enumerate()
        .filter(|(_, k)| sg.finals().contains(&k.0))
        .map(|(i, _)| i)
        .collect();
    SliceGraph::new(labels, edges, initial, finals)
        .expect("ids in range")
        .trim()
}

/// Glues the out-frontier of a composed cycle slice to its in-frontier and
/// tests strong connectivity of the center vertices. Wires that never meet
/// a center vertex are not vertices and are ignored.
pub fn glued_strongly_connected(c: &Slice) -> bool {
    let n = c.center.len();
    if n == 0 {
        return true;
    }
    let mut from_in = vec![End::Center(0); c.in_width];
    for &(a, b) in &c.edges {
        if let End::In(i) = a {
            from_in[i] = b;
        }
    }
    let resolve = |mut j: usize| -> Option<usize> {
        for _ in 0..=c.in_width {
            match from_in[j] {
                End::Center(y) => return Some(y),
                End::Out(j2) => j = j2,
                End::In(_) => return None,
            }
        }
        None
    };
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &c.edges {
        if let End::Center(x) = a {
            match b {
                End::Center(y) => adj[x].push(y),
                End::Out(j) => {
                    if let Some(y) = resolve(j) {
                        adj[x].push(y);
                    }
                }
                End::In(_) => {}
            }
        }
    }
    let reach = |adj: &Vec<Vec<usize>>| -> usize {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().filter(|&&s| s).count()
    };
    let mut radj = vec![Vec::new(); n];
    for (x, ys) in adj.iter().enumerate() {
        for &y in ys {
            radj[y].push(x);
        }
    }
    reach(&adj) == n && reach(&radj) == n
}

/// Visits every closed walk of length at most `max_len` in the digraph
/// `succ` on `0..n`, each rotation class once (walks start at their
/// smallest vertex). Stops when `f` returns false and reports whether all
/// visits returned true.
pub fn for_each_closed_walk<'a, S, F>(n: usize, succ: S, max_len: usize, mut f: F) -> bool
where
    S: Fn(usize) -> &'a [usize],
    F: FnMut(&[usize]) -> bool,
{
    fn rec<'a, S: Fn(usize) -> &'a [usize], F: FnMut(&[usize]) -> bool>(
        succ: &S,
        max_len: usize,
        walk: &mut Vec<usize>,
        f: &mut F,
    ) -> bool {
        let start = walk[0];
        let last = *walk.last().unwrap();
        for &w in succ(last) {
            if w == start && !f(walk) {
                return false;
            }
            if w > start && walk.len() < max_len {
                walk.push(w);
                let ok = rec(succ, max_len, walk, f);
                walk.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    max_len == 0 || (0..n).all(|s| rec(&succ, max_len, &mut vec![s], &mut f))
}

/// Bounded loop-connectivity: every closed walk of length at most
/// `max_cycle_len` glues to a strongly connected graph.
pub fn is_loop_connected_bounded(sg: &SliceGraph, max_cycle_len: usize) -> bool {
    let sg = sg.trim();
    for_each_closed_walk(
        sg.len(),
        |v| sg.successors(v),
        max_cycle_len,
        |walk| {
            let c = Slice::compose_units(walk.iter().map(|&v| sg.label(v))).expect("edges compose");
            glued_strongly_connected(&c)
        },
    )
}

/// Adds missing re-decomposition witnesses to the minimal DFA, repeating as
/// many times as it has states. New states are keyed by
/// `(q1, S1', S2', q3)`, so the result does not depend on iteration order.
pub fn saturate_loop_connected(sg: &SliceGraph) -> Result<SliceGraph> {
    Ok(saturate_loop_connected_with_stats(sg)?.0)
}

/// As [`saturate_loop_connected`], also returning the number of rounds that
/// added states.
pub fn saturate_loop_connected_with_stats(sg: &SliceGraph) -> Result<(SliceGraph, usize)> {
    let dfa = sg.to_automaton().minimize();
    let n = dfa.num_states();
    let mut trans: BTreeSet<(usize, UnitSlice, usize)> = dfa
        .labeled_transitions()
        .map(|(p, s, q)| (p, s.clone(), q))
        .collect();
    let mut fresh: BTreeMap<(usize, UnitSlice, UnitSlice, usize), usize> = BTreeMap::new();
    let mut num_states = n;
    let mut cache: HashMap<(UnitSlice, UnitSlice), Vec<(UnitSlice, UnitSlice)>> = HashMap::new();
    let mut rounds = 0;
    for _ in 0..n {
        let snapshot: Vec<(usize, UnitSlice, usize)> = trans.iter().cloned().collect();
        let mut out_of: BTreeMap<usize, Vec<(UnitSlice, usize)>> = BTreeMap::new();
        for (p, s, q) in &snapshot {
            out_of.entry(*p).or_default().push((s.clone(), *q));
        }
        let mut added = false;
        for (q1, s1, q2) in &snapshot {
            for (s2, q3) in out_of.get(q2).cloned().unwrap_or_default() {
                let decs = cache
                    .entry((s1.clone(), s2.clone()))
                    .or_insert_with(|| two_decompositions(s1, &s2))
                    .clone();
                for (a, b) in decs {
                    let present = trans
                        .range((*q1, a.clone(), 0)..=(*q1, a.clone(), usize::MAX))
                        .any(|(_, _, r)| trans.contains(&(*r, b.clone(), q3)));
                    if present {
                        continue;
                    }
                    let key = (*q1, a.clone(), b.clone(), q3);
                    let r = *fresh.entry(key).or_insert_with(|| {
                        num_states += 1;
                        num_states - 1
                    });
                    trans.insert((*q1, a, r));
                    trans.insert((r, b, q3));
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
        rounds += 1;
    }
    let a = SliceAutomaton::new(
        num_states,
        dfa.start(),
        dfa.accepting().iter().copied(),
        trans,
    );
    Ok((SliceGraph::from_automaton(&a)?, rounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slice::{FINAL_EVENT, INITIAL_EVENT};

    fn diamond() -> Dag {
        Dag::new(
            vec!["ι".into(), "a".into(), "b".into(), "ε".into()],
            vec![(0, 1), (0, 2), (1, 3), (2, 3)],
        )
        .unwrap()
    }

    fn diamond_plus() -> Dag {
        Dag::new(
            vec!["ι".into(), "a".into(), "b".into(), "ε".into()],
            vec![(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)],
        )
        .unwrap()
    }

    fn single_decomposition() -> Vec<UnitSlice> {
        vec![
            UnitSlice::initial(INITIAL_EVENT, 2),
            UnitSlice::new("a", vec![Link::Center, Link::Out(1)], 2).unwrap(),
            UnitSlice::new("b", vec![Link::Out(0), Link::Center], 2).unwrap(),
            UnitSlice::terminal(FINAL_EVENT, 2),
        ]
    }

    #[test]
    fn equivalence_of_decompositions() {
        let all = diamond().unit_decompositions().unwrap();
        let swapped = all.iter().find(|d| d[1].event() == "b").unwrap();
        assert!(equivalent(&all[0], swapped).unwrap());
        assert!(equivalent(&all[0], &all[0]).unwrap());
        let plus = &diamond_plus().unit_decompositions().unwrap()[0];
        assert!(!equivalent(&all[0], plus).unwrap());
        let w = equivalence_witness(&all[0], swapped).unwrap().unwrap();
        assert_eq!(w.chain.first().unwrap(), &all[0]);
        assert_eq!(w.chain.last().unwrap(), swapped);
        assert!(equivalent(&all[0][..2], &all[0]).is_err());
    }

    #[test]
    fn two_decompositions_of_independent_pair() {
        let s = single_decomposition();
        // Both orders, two numberings of the middle cut each.
        assert_eq!(two_decompositions(&s[1], &s[2]).len(), 4);
        assert!(two_decompositions(&s[1], &s[2]).contains(&(s[1].clone(), s[2].clone())));
    }

    #[test]
    fn saturation_decisions() {
        let ud = SliceGraph::from_strings(&diamond().unit_decompositions().unwrap()).unwrap();
        assert!(is_saturated(&ud));
        let single = SliceGraph::from_string(&single_decomposition()).unwrap();
        assert!(!is_saturated(&single));
        assert!(!is_weakly_saturated_bounded(&single, 4));
        assert!(is_weakly_saturated_bounded(&ud, 6));
    }

    #[test]
    fn weak_saturation_lifts_to_saturation() {
        let s = single_decomposition();
        let other = vec![
            s[0].clone(),
            UnitSlice::new("b", vec![Link::Out(0), Link::Center], 2).unwrap(),
            UnitSlice::new("a", vec![Link::Center, Link::Out(1)], 2).unwrap(),
            s[3].clone(),
        ];
        let weak = SliceGraph::from_strings(&[s, other]).unwrap();
        assert!(is_weakly_saturated_bounded(&weak, 4));
        assert!(!is_saturated(&weak));
        let full = saturate_weak(&weak);
        assert!(is_saturated(&full));
        assert_eq!(
            full.enumerate_graph_language(8),
            weak.enumerate_graph_language(8)
        );
        assert!(full.len() <= weak.len() * 4);
    }

    #[test]
    fn loop_saturation_on_loop_free_input() {
        let single = SliceGraph::from_string(&single_decomposition()).unwrap();
        assert!(is_loop_connected_bounded(&single, 8));
        let sat = saturate_loop_connected(&single).unwrap();
        assert!(is_saturated(&sat));
        let lang = sat.enumerate_slice_language(4);
        assert_eq!(lang.len(), 16);
        let (_, rounds) = saturate_loop_connected_with_stats(&sat).unwrap();
        assert_eq!(rounds, 0);
    }
}
