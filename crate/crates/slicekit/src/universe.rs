//! Flows characterizing global slice width, and the universal generators of
//! all DAGs (resp. Hasse diagrams) of global slice width at most `c`.

use std::collections::BTreeMap;

use crate::automaton::SliceAutomaton;
use crate::dag::{Cutting, Dag};
use crate::error::{Error, Result};
use crate::reduction::transitive_reduce;
use crate::saturation::{is_saturated, saturate_weak};
use crate::slice::{Event, Link, UnitSlice, FINAL_EVENT, INITIAL_EVENT};
use crate::slice_graph::SliceGraph;

/// Positive edge values of a whole DAG, indexed by edge id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagFlow {
    values: Vec<u32>,
}

impl DagFlow {
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn value(&self, e: usize) -> u32 {
        self.values[e]
    }

    /// Positivity, conservation at inner vertices and boundary sum `c`.
    pub fn is_valid(&self, dag: &Dag, c: u32) -> bool {
        let Ok((min, max)) = dag.roots() else {
            return false;
        };
        if self.values.len() != dag.edges().len() || self.values.contains(&0) {
            return false;
        }
        // A single vertex has no boundary edges; its empty flow is vacuous.
        if min == max {
            return true;
        }
        let sum = |it: &mut dyn Iterator<Item = usize>| it.map(|e| self.values[e]).sum::<u32>();
        (0..dag.len()).all(|v| {
            let inflow = sum(&mut dag.in_edges(v));
            let outflow = sum(&mut dag.out_edges(v));
            if v == min {
                outflow == c
            } else if v == max {
                inflow == c
            } else {
                inflow == outflow
            }
        })
    }

    /// The per-slice coloring induced on a unit decomposition.
    pub fn restrict(&self, cutting: &Cutting) -> FlowColoring {
        let per_slice = (0..cutting.order.len())
            .map(|k| SliceFlow {
                inputs: cutting.in_cut(k).iter().map(|&e| self.values[e]).collect(),
                outputs: cutting.cuts[k].iter().map(|&e| self.values[e]).collect(),
            })
            .collect();
        FlowColoring { per_slice }
    }
}

/// Flow values on the in- and out-frontier edges of one unit slice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SliceFlow {
    pub inputs: Vec<u32>,
    pub outputs: Vec<u32>,
}

impl SliceFlow {
    /// Positivity, frontier sums `c`, conservation at the center and equal
    /// values at both ends of every pass-through edge.
    pub fn is_valid(&self, s: &UnitSlice, c: u32) -> bool {
        if self.inputs.len() != s.in_width() || self.outputs.len() != s.out_width() {
            return false;
        }
        if self.inputs.contains(&0) || self.outputs.contains(&0) {
            return false;
        }
        let frontier_ok = |v: &[u32]| v.is_empty() || v.iter().sum::<u32>() == c;
        if !frontier_ok(&self.inputs) || !frontier_ok(&self.outputs) {
            return false;
        }
        if s.pass_throughs()
            .any(|(i, j)| self.inputs[i] != self.outputs[j])
        {
            return false;
        }
        let into: u32 = s.center_inputs().map(|i| self.inputs[i]).sum();
        let out: u32 = s.center_outputs().iter().map(|&j| self.outputs[j]).sum();
        s.is_initial() || s.is_final() || into == out
    }
}

/// A flow coloring of a slice string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowColoring {
    pub per_slice: Vec<SliceFlow>,
}

impl FlowColoring {
    /// Every slice is validly colored and consecutive slices agree on the
    /// frontier they share.
    pub fn is_valid(&self, slices: &[UnitSlice], c: u32) -> bool {
        self.per_slice.len() == slices.len()
            && self
                .per_slice
                .iter()
                .zip(slices)
                .all(|(f, s)| f.is_valid(s, c))
            && self
                .per_slice
                .windows(2)
                .all(|w| w[0].outputs == w[1].inputs)
    }
}

/// All ways to write `total` as an ordered sum of `parts` positive terms.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let max = total.saturating_sub(parts as u32 - 1);
        for v in 1..=max {
            cur.push(v);
            rec(total - v, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Searches a `c`-flow by assigning out-edge values vertex by vertex in
/// topological order; the inflow of each vertex is fixed when it is reached.
pub fn has_c_flow(h: &Dag, c: u32) -> Result<Option<DagFlow>> {
    let (min, max) = h.roots()?;
    let order = h.topological_order().ok_or(Error::Cyclic)?;
    let mut values = vec![0u32; h.edges().len()];
    fn rec(
        h: &Dag,
        c: u32,
        order: &[usize],
        k: usize,
        min: usize,
        max: usize,
        values: &mut [u32],
    ) -> bool {
        let Some(&v) = order.get(k) else {
            return true;
        };
        let inflow: u32 = if v == min {
            c
        } else {
            h.in_edges(v).map(|e| values[e]).sum()
        };
        if v == max {
            return inflow == c && rec(h, c, order, k + 1, min, max, values);
        }
        let outs: Vec<usize> = h.out_edges(v).collect();
        for comp in compositions(inflow, outs.len()) {
            for (&e, &x) in outs.iter().zip(&comp) {
                values[e] = x;
            }
            if rec(h, c, order, k + 1, min, max, values) {
                return true;
            }
        }
        false
    }
    Ok(rec(h, c, &order, 0, min, max, &mut values).then_some(DagFlow { values }))
}

/// Every `c`-flow coloring of a unit slice.
pub fn slice_flows(s: &UnitSlice, c: u32) -> Vec<SliceFlow> {
    let ins = if s.in_width() == 0 {
        vec![Vec::new()]
    } else {
        compositions(c, s.in_width())
    };
    let center_outs = s.center_outputs();
    let mut out = Vec::new();
    for inputs in ins {
        let center_in = if s.is_initial() {
            c
        } else {
            s.center_inputs().map(|i| inputs[i]).sum()
        };
        let spreads = if s.out_width() == 0 {
            vec![Vec::new()]
        } else {
            compositions(center_in, center_outs.len())
        };
        for spread in spreads {
            let mut outputs = vec![0; s.out_width()];
            for (i, j) in s.pass_throughs() {
                outputs[j] = inputs[i];
            }
            for (&j, &x) in center_outs.iter().zip(&spread) {
                outputs[j] = x;
            }
            let f = SliceFlow {
                inputs: inputs.clone(),
                outputs,
            };
            if f.is_valid(s, c) {
                out.push(f);
            }
        }
    }
    out
}

/// Non-degenerate unit slices of width at most `c`: initial slices labeled
/// `ι`, final slices labeled `ε`, and inner slices over `events`.
pub fn bounded_alphabet(c: usize, events: &[Event]) -> Vec<UnitSlice> {
    let mut out = Vec::new();
    for m in 1..=c {
        out.push(UnitSlice::initial(INITIAL_EVENT, m));
        out.push(UnitSlice::terminal(FINAL_EVENT, m));
    }
    for e in events {
        for k in 1..=c {
            for m in 1..=c {
                let mut inputs = Vec::with_capacity(k);
                let mut used = vec![false; m];
                inner_slices(e, k, m, &mut inputs, &mut used, &mut out);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn inner_slices(
    e: &Event,
    k: usize,
    m: usize,
    inputs: &mut Vec<Link>,
    used: &mut [bool],
    out: &mut Vec<UnitSlice>,
) {
    if inputs.len() == k {
        let into_center = inputs.contains(&Link::Center);
        let center_out = used.iter().any(|&u| !u);
        if into_center && center_out {
            out.push(UnitSlice::new(e.clone(), inputs.clone(), m).expect("injective links"));
        }
        return;
    }
    inputs.push(Link::Center);
    inner_slices(e, k, m, inputs, used, out);
    inputs.pop();
    for j in 0..m {
        if !used[j] {
            used[j] = true;
            inputs.push(Link::Out(j));
            inner_slices(e, k, m, inputs, used, out);
            inputs.pop();
            used[j] = false;
        }
    }
}

/// The saturated slice graph `SG^c`: one vertex per colored slice of the
/// bounded alphabet, edges where frontiers and flow values agree.
pub fn build_bounded_slice_graph(c: usize, events: &[Event]) -> SliceGraph {
    let mut labels = Vec::new();
    let mut flows = Vec::new();
    for s in bounded_alphabet(c, events) {
        for f in slice_flows(&s, c as u32) {
            labels.push(s.clone());
            flows.push(f);
        }
    }
    let mut by_input: BTreeMap<&[u32], Vec<usize>> = BTreeMap::new();
    for (v, f) in flows.iter().enumerate() {
        if !f.inputs.is_empty() {
            by_input.entry(&f.inputs).or_default().push(v);
        }
    }
    let mut edges = Vec::new();
    for (u, f) in flows.iter().enumerate() {
        if let Some(vs) = by_input.get(f.outputs.as_slice()) {
            edges.extend(vs.iter().map(|&v| (u, v)));
        }
    }
    let initial: Vec<usize> = (0..labels.len())
        .filter(|&v| labels[v].is_initial())
        .collect();
    let finals: Vec<usize> = (0..labels.len())
        .filter(|&v| labels[v].is_final())
        .collect();
    SliceGraph::new(labels, edges, initial, finals).expect("ids in range")
}

/// The saturated Hasse diagram generator `HDG^c`.
pub fn build_bounded_hdg(c: usize, events: &[Event]) -> SliceGraph {
    saturate_weak(&transitive_reduce(&build_bounded_slice_graph(c, events)))
}

fn inner_events(sg: &SliceGraph) -> Vec<Event> {
    sg.events()
        .into_iter()
        .filter(|e| e != INITIAL_EVENT && e != FINAL_EVENT)
        .collect()
}

fn difference_graph(universe: &SliceGraph, sg: &SliceGraph) -> Result<SliceGraph> {
    let a: SliceAutomaton = universe.to_automaton().difference(&sg.to_automaton());
    SliceGraph::from_automaton(&a.minimize())
}

/// The DAGs of global slice width at most `c` over the events of `sg` that
/// `sg` does not generate, by slice-level difference with `SG^c`.
pub fn complement_graph_language(sg: &SliceGraph, c: usize) -> Result<SliceGraph> {
    if !is_saturated(sg) {
        return Err(Error::NotSaturated);
    }
    difference_graph(&build_bounded_slice_graph(c, &inner_events(sg)), sg)
}

/// The orders of global slice width at most `c` whose Hasse diagram is not
/// generated by the reduced and saturated form of `sg`.
pub fn complement_po_language(sg: &SliceGraph, c: usize) -> Result<SliceGraph> {
    if !is_saturated(sg) {
        return Err(Error::NotSaturated);
    }
    let hasse = saturate_weak(&transitive_reduce(sg));
    difference_graph(&build_bounded_hdg(c, &inner_events(sg)), &hasse)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(labels: &[&str], edges: &[(usize, usize)]) -> Dag {
        Dag::new(
            labels.iter().map(|s| s.to_string()).collect(),
            edges.to_vec(),
        )
        .unwrap()
    }

    fn diamond() -> Dag {
        dag(&["ι", "a", "b", "ε"], &[(0, 1), (0, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(4, 2).len(), 3);
        assert_eq!(compositions(3, 3), vec![vec![1, 1, 1]]);
        assert!(compositions(2, 3).is_empty());
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn diamond_flows() {
        let f = has_c_flow(&diamond(), 2).unwrap().unwrap();
        assert_eq!(f.values(), &[1, 1, 1, 1]);
        assert!(f.is_valid(&diamond(), 2));
        assert!(has_c_flow(&diamond(), 1).unwrap().is_none());
        assert!(has_c_flow(&diamond(), 3).unwrap().is_some());
        let two_max = dag(&["ι", "a", "b"], &[(0, 1), (0, 2)]);
        assert_eq!(has_c_flow(&two_max, 2), Err(Error::NotSingleRooted));
    }

    #[test]
    fn restricted_flow_colors_every_decomposition() {
        let d = diamond();
        let f = has_c_flow(&d, 3).unwrap().unwrap();
        d.for_each_cutting(|cut| {
            assert!(f.restrict(cut).is_valid(&cut.slices(&d), 3));
            std::ops::ControlFlow::Continue(())
        })
        .unwrap();
    }

    #[test]
    fn width_one_universe_is_chains() {
        let sg = build_bounded_slice_graph(1, &["a".to_string()]);
        let lang = sg.enumerate_graph_language(5);
        assert_eq!(lang.len(), 4);
        assert!(lang.values().all(|h| h.edges().len() + 1 == h.len()));
        assert!(is_saturated(&sg));
    }

    #[test]
    fn width_two_universe() {
        let sg = build_bounded_slice_graph(2, &["a".to_string(), "b".to_string()]);
        assert!(sg.validate().iter().all(|d| !d.is_error()));
        let lang = sg.enumerate_graph_language(4);
        assert!(lang.contains_key(&diamond().canonical()));
        for h in lang.values() {
            assert!(h.global_width().unwrap() <= 2);
        }
        assert!(is_saturated(&sg));
    }

    #[test]
    fn complement_of_universe_is_empty() {
        let sg = build_bounded_slice_graph(2, &["a".to_string()]);
        let comp = complement_graph_language(&sg, 2).unwrap();
        assert!(comp.to_automaton().is_empty());
    }
}
