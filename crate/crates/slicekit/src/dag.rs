//! Labeled DAGs, partial orders, unit decompositions and width measures.
//!
//! The enumerations here are exhaustive and exponential; they serve as test
//! oracles and as the ground truth for desk-scale inputs.

use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::slice::{Event, Link, UnitSlice};

/// A vertex-labeled directed acyclic multigraph. Edge ids are positions in
/// [`Dag::edges`], so parallel edges stay addressable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    labels: Vec<Event>,
    edges: Vec<(usize, usize)>,
}

impl Dag {
    pub fn new(labels: Vec<Event>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        if edges.iter().any(|&(u, v)| u >= n || v >= n) {
            return Err(Error::InvalidGraph("edge endpoint out of range".into()));
        }
        let dag = Dag { labels, edges };
        if dag.topological_order().is_none() {
            return Err(Error::Cyclic);
        }
        Ok(dag)
    }

    pub(crate) fn from_parts_unchecked(labels: Vec<Event>, edges: Vec<(usize, usize)>) -> Self {
        Dag { labels, edges }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Event] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.0 == v)
            .map(|(i, _)| i)
    }

    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.1 == v)
            .map(|(i, _)| i)
    }

    /// Kahn order with ties broken by vertex id; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for &(_, v) in &self.edges {
            indeg[v] += 1;
        }
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &(u, w) in &self.edges {
                if u == v {
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        ready.insert(w);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// The unique minimal and maximal vertices.
    pub fn roots(&self) -> Result<(usize, usize)> {
        let n = self.len();
        let mut has_in = vec![false; n];
        let mut has_out = vec![false; n];
        for &(u, v) in &self.edges {
            has_out[u] = true;
            has_in[v] = true;
        }
        let mins: Vec<usize> = (0..n).filter(|&v| !has_in[v]).collect();
        let maxs: Vec<usize> = (0..n).filter(|&v| !has_out[v]).collect();
        match (mins.as_slice(), maxs.as_slice()) {
            ([a], [b]) => Ok((*a, *b)),
            _ => Err(Error::NotSingleRooted),
        }
    }

    pub fn is_simple(&self) -> bool {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e.windows(2).all(|w| w[0] != w[1])
    }

    /// `reach[u][v]` iff there is a nonempty path from `u` to `v`.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let order = self.topological_order().expect("acyclic");
        let mut reach = vec![vec![false; n]; n];
        for &u in order.iter().rev() {
            for &(a, b) in &self.edges {
                if a == u {
                    reach[u][b] = true;
                    let row = reach[b].clone();
                    for (x, r) in row.into_iter().enumerate() {
                        reach[u][x] |= r;
                    }
                }
            }
        }
        reach
    }

    pub fn transitive_closure(&self) -> PartialOrder {
        PartialOrder {
            labels: self.labels.clone(),
            less: self.reachability(),
        }
    }

    /// Brute-force reduction: drop every edge whose removal keeps the
    /// closure, collapsing parallel edges first.
    pub fn transitive_reduction(&self) -> Dag {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        edges.dedup();
        let closure = self.reachability();
        let mut i = 0;
        while i < edges.len() {
            let mut without = edges.clone();
            without.remove(i);
            let d = Dag::from_parts_unchecked(self.labels.clone(), without.clone());
            if d.reachability() == closure {
                edges = without;
            } else {
                i += 1;
            }
        }
        Dag::from_parts_unchecked(self.labels.clone(), edges)
    }

    pub fn is_transitive_reduced(&self) -> bool {
        self.is_simple() && self.transitive_reduction().edges.len() == self.edges.len()
    }

    pub fn canonical(&self) -> CanonicalForm<Event> {
        canonical_form(&self.labels, &self.edges).0
    }

    pub fn is_isomorphic(&self, other: &Dag) -> bool {
        self.len() == other.len()
            && self.edges.len() == other.edges.len()
            && self.canonical() == other.canonical()
    }

    /// Number of edges crossing from a downset (bitmask) to its complement.
    fn cut_size(&self, down: u64) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| down >> u & 1 == 1 && down >> v & 1 == 0)
            .count()
    }

    fn width_dp(&self, pick: fn(usize, usize) -> usize) -> Result<usize> {
        self.roots()?;
        let n = self.len();
        assert!(n < 64, "width search supports fewer than 64 vertices");
        let mut preds = vec![0u64; n];
        for &(u, v) in &self.edges {
            preds[v] |= 1 << u;
        }
        // best[S]: optimum over orders of the downset S of the widest cut so far.
        let mut layer: HashMap<u64, usize> = HashMap::from([(0u64, 0usize)]);
        for _ in 0..n {
            let mut next: HashMap<u64, usize> = HashMap::new();
            for (&down, &w) in &layer {
                for (v, &pv) in preds.iter().enumerate() {
                    if down >> v & 1 == 0 && pv & !down == 0 {
                        let s = down | 1 << v;
                        let w2 = w.max(self.cut_size(s));
                        next.entry(s)
                            .and_modify(|b| *b = pick(*b, w2))
                            .or_insert(w2);
                    }
                }
            }
            layer = next;
        }
        Ok(layer.into_values().next().unwrap_or(0))
    }

    /// Minimum over unit decompositions of the widest frontier.
    pub fn existential_width(&self) -> Result<usize> {
        self.width_dp(usize::min)
    }

    /// Maximum over unit decompositions of the widest frontier.
    pub fn global_width(&self) -> Result<usize> {
        self.width_dp(usize::max)
    }

    /// Visits every topological order.
    pub fn for_each_topological_order<F>(&self, mut f: F)
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for &(_, v) in &self.edges {
            indeg[v] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let _ = self.orders_rec(&mut indeg, &mut order, &mut f);
    }

    fn orders_rec<F>(
        &self,
        indeg: &mut [usize],
        order: &mut Vec<usize>,
        f: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if order.len() == self.len() {
            return f(order);
        }
        for v in 0..self.len() {
            if indeg[v] == 0 && !order.contains(&v) {
                for &(u, w) in &self.edges {
                    if u == v {
                        indeg[w] -= 1;
                    }
                }
                order.push(v);
                let r = self.orders_rec(indeg, order, f);
                order.pop();
                for &(u, w) in &self.edges {
                    if u == v {
                        indeg[w] += 1;
                    }
                }
                r?;
            }
        }
        ControlFlow::Continue(())
    }

    pub fn topological_orders(&self) -> Vec<Vec<usize>> {
        let mut all = Vec::new();
        self.for_each_topological_order(|o| {
            all.push(o.to_vec());
            ControlFlow::Continue(())
        });
        all
    }

    /// Visits every cutting (topological order times per-cut numbering).
    pub fn for_each_cutting<F>(&self, mut f: F) -> Result<()>
    where
        F: FnMut(&Cutting) -> ControlFlow<()>,
    {
        self.roots()?;
        self.for_each_topological_order(|order| self.cuttings_of_order(order, &mut f));
        Ok(())
    }

    /// Visits every numbering of the cuts along a fixed order.
    pub fn cuttings_of_order<F>(&self, order: &[usize], f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Cutting) -> ControlFlow<()>,
    {
        let mut pos = vec![0usize; self.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let cuts: Vec<Vec<usize>> = (0..order.len())
            .map(|k| {
                (0..self.edges.len())
                    .filter(|&e| pos[self.edges[e].0] <= k && pos[self.edges[e].1] > k)
                    .collect()
            })
            .collect();
        let mut cutting = Cutting {
            order: order.to_vec(),
            cuts: cuts.clone(),
        };
        permute_rec(&cuts, 0, &mut cutting, f)
    }

    /// All unit decompositions; intended for inputs of at most 8 vertices.
    pub fn unit_decompositions(&self) -> Result<Vec<Vec<UnitSlice>>> {
        let mut all = Vec::new();
        self.for_each_cutting(|c| {
            all.push(c.slices(self));
            ControlFlow::Continue(())
        })?;
        Ok(all)
    }

    /// The decomposition along the smallest topological order with cut
    /// edges numbered by edge id.
    pub fn first_decomposition(&self) -> Result<Cutting> {
        self.roots()?;
        let order = self.topological_order().expect("acyclic");
        let mut out = None;
        let _ = self.cuttings_of_order(&order, &mut |c: &Cutting| {
            out = Some(c.clone());
            ControlFlow::Break(())
        });
        Ok(out.expect("one numbering exists"))
    }
}

fn permute_rec<F>(base: &[Vec<usize>], k: usize, cur: &mut Cutting, f: &mut F) -> ControlFlow<()>
where
    F: FnMut(&Cutting) -> ControlFlow<()>,
{
    if k == base.len() {
        return f(cur);
    }
    let mut items = base[k].clone();
    permutations(&mut items, 0, &mut |p| {
        cur.cuts[k] = p.to_vec();
        permute_rec(base, k + 1, cur, f)
    })
}

/// Visits all permutations of `items[k..]` in lexicographic-by-swap order.
pub(crate) fn permutations<T: Clone, F>(items: &mut [T], k: usize, f: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[T]) -> ControlFlow<()>,
{
    if k + 1 >= items.len() {
        return f(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        let r = permutations(items, k + 1, f);
        items.swap(k, i);
        r?;
    }
    ControlFlow::Continue(())
}

/// All permutations of `0..n` as vectors.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    let _ = permutations(&mut items, 0, &mut |p| {
        out.push(p.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// A unit decomposition described by a vertex order and, for each prefix of
/// the order, the DAG edge ids crossing the cut in port order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cutting {
    pub order: Vec<usize>,
    /// `cuts[k]` crosses after `order[..=k]`; the last cut is empty.
    pub cuts: Vec<Vec<usize>>,
}

impl Cutting {
    pub fn width(&self) -> usize {
        self.cuts.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// In-frontier edge ids of slice `k`.
    pub fn in_cut(&self, k: usize) -> &[usize] {
        if k == 0 {
            &[]
        } else {
            &self.cuts[k - 1]
        }
    }

    pub fn slices(&self, dag: &Dag) -> Vec<UnitSlice> {
        (0..self.order.len())
            .map(|k| {
                let v = self.order[k];
                let out = &self.cuts[k];
                let inputs = self
                    .in_cut(k)
                    .iter()
                    .map(|&e| {
                        if dag.edges[e].1 == v {
                            Link::Center
                        } else {
                            Link::Out(out.iter().position(|&x| x == e).expect("edge persists"))
                        }
                    })
                    .collect();
                UnitSlice::new(dag.labels[v].clone(), inputs, out.len()).expect("valid cut")
            })
            .collect()
    }
}

/// A strict partial order over labeled elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialOrder {
    labels: Vec<Event>,
    less: Vec<Vec<bool>>,
}

impl PartialOrder {
    /// Validates irreflexivity and transitivity.
    pub fn new(labels: Vec<Event>, less: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if less.len() != n || less.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGraph("relation size mismatch".into()));
        }
        for a in 0..n {
            if less[a][a] {
                return Err(Error::InvalidGraph("relation is reflexive".into()));
            }
            for b in 0..n {
                for c in 0..n {
                    if less[a][b] && less[b][c] && !less[a][c] {
                        return Err(Error::InvalidGraph("relation is not transitive".into()));
                    }
                }
            }
        }
        Ok(PartialOrder { labels, less })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Event] {
        &self.labels
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }

    pub fn relation(&self) -> &[Vec<bool>] {
        &self.less
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.less[a][b])
            .collect()
    }

    /// Covering relation as a DAG.
    pub fn hasse(&self) -> Dag {
        let n = self.len();
        let edges = self
            .pairs()
            .into_iter()
            .filter(|&(a, b)| !(0..n).any(|c| self.less[a][c] && self.less[c][b]))
            .collect();
        Dag::from_parts_unchecked(self.labels.clone(), edges)
    }

    /// Restriction to the elements satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> PartialOrder {
        let idx: Vec<usize> = (0..self.len()).filter(|&v| keep(v)).collect();
        PartialOrder {
            labels: idx.iter().map(|&v| self.labels[v].clone()).collect(),
            less: idx
                .iter()
                .map(|&a| idx.iter().map(|&b| self.less[a][b]).collect())
                .collect(),
        }
    }

    pub fn canonical(&self) -> CanonicalForm<Event> {
        self.hasse().canonical()
    }

    pub fn is_isomorphic(&self, other: &PartialOrder) -> bool {
        self.canonical() == other.canonical()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slice::Slice;

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

    fn diamond_plus() -> Dag {
        dag(
            &["ι", "a", "b", "ε"],
            &[(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)],
        )
    }

    #[test]
    fn cycles_rejected() {
        let r = Dag::new(vec!["a".into(), "b".into()], vec![(0, 1), (1, 0)]);
        assert_eq!(r, Err(Error::Cyclic));
    }

    #[test]
    fn chain_has_one_decomposition() {
        let d = dag(&["ι", "a", "ε"], &[(0, 1), (1, 2)]);
        assert_eq!(d.unit_decompositions().unwrap().len(), 1);
        assert_eq!(d.existential_width().unwrap(), 1);
        assert_eq!(d.global_width().unwrap(), 1);
    }

    #[test]
    fn diamond_decompositions_compose_back() {
        let d = diamond();
        let all = d.unit_decompositions().unwrap();
        // 2 orders, three width-2 cuts each with 2 numberings.
        assert_eq!(all.len(), 16);
        for dec in &all {
            let h = Slice::compose_units(dec).unwrap().to_dag().unwrap();
            assert!(h.is_isomorphic(&d));
        }
        assert_eq!(d.existential_width().unwrap(), 2);
        assert_eq!(d.global_width().unwrap(), 2);
    }

    #[test]
    fn diamond_plus_edge_always_width_three() {
        let d = diamond_plus();
        let all = d.unit_decompositions().unwrap();
        assert_eq!(all.len(), 2 * 6 * 6 * 6);
        assert!(all
            .iter()
            .all(|dec| dec.iter().map(UnitSlice::width).max() == Some(3)));
    }

    #[test]
    fn not_single_rooted() {
        let d = dag(&["a", "b"], &[]);
        assert_eq!(d.unit_decompositions(), Err(Error::NotSingleRooted));
        assert_eq!(d.existential_width(), Err(Error::NotSingleRooted));
    }

    #[test]
    fn reduction_oracle() {
        let d = dag(&["ι", "a", "ε"], &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(d.transitive_reduction().edges(), &[(0, 1), (1, 2)]);
        assert_eq!(diamond().transitive_reduction(), diamond());
        let multi = dag(&["ι", "ε"], &[(0, 1), (0, 1)]);
        assert_eq!(multi.transitive_reduction().edges(), &[(0, 1)]);
    }

    #[test]
    fn closure() {
        let p = diamond().transitive_closure();
        assert_eq!(p.pairs(), vec![(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]);
        assert!(p.is_isomorphic(&diamond_plus().transitive_closure()));
        assert!(dag(&["a"], &[]).transitive_closure().pairs().is_empty());
    }

    #[test]
    fn diamond_cut_slices_are_independent() {
        for dec in diamond().unit_decompositions().unwrap() {
            assert!(crate::slice::independent(&dec[1], &dec[2]).unwrap());
        }
    }
}
