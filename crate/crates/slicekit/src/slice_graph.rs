//! Slice graphs, their languages and the conversion to and from automata.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::automaton::SliceAutomaton;
use crate::canon::CanonicalForm;
use crate::dag::{Dag, PartialOrder};
use crate::error::{Error, Result};
use crate::slice::{Event, Slice, SliceLabel, UnitSlice};

/// DAGs deduplicated up to label-preserving isomorphism.
pub type DagSet = BTreeMap<CanonicalForm<Event>, Dag>;
/// Partial orders deduplicated up to isomorphism.
pub type PoSet = BTreeMap<CanonicalForm<Event>, PartialOrder>;

/// A finding of [`SliceGraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: &'static str,
    pub message: String,
}

impl Diagnostic {
    /// Dead vertices are harmless; everything else breaks the semantics.
    pub fn is_error(&self) -> bool {
        self.kind != "DeadVertex"
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

/// A digraph whose vertices carry unit slices. Walks from an initial to a
/// final vertex spell the slice language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceGraph {
    labels: Vec<UnitSlice>,
    edges: BTreeSet<(usize, usize)>,
    initial: BTreeSet<usize>,
    finals: BTreeSet<usize>,
    succ: Vec<Vec<usize>>,
}

/// Whether `b` may follow `a` inside a legal slice string.
pub fn can_follow(a: &UnitSlice, b: &UnitSlice) -> bool {
    a.out_width() == b.in_width() && a.out_width() > 0
}

impl SliceGraph {
    /// Builds a graph; only index ranges are checked, see [`Self::validate`].
    pub fn new(
        labels: Vec<UnitSlice>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        initial: impl IntoIterator<Item = usize>,
        finals: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let n = labels.len();
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        let initial: BTreeSet<usize> = initial.into_iter().collect();
        let finals: BTreeSet<usize> = finals.into_iter().collect();
        if edges.iter().any(|&(u, v)| u >= n || v >= n)
            || initial.iter().chain(&finals).any(|&v| v >= n)
        {
            return Err(Error::InvalidGraph("vertex id out of range".into()));
        }
        let mut succ = vec![Vec::new(); n];
        for &(u, v) in &edges {
            succ[u].push(v);
        }
        Ok(SliceGraph {
            labels,
            edges,
            initial,
            finals,
            succ,
        })
    }

    /// Builds a graph and rejects it if [`Self::validate`] reports an error.
    pub fn checked(
        labels: Vec<UnitSlice>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        initial: impl IntoIterator<Item = usize>,
        finals: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let g = Self::new(labels, edges, initial, finals)?;
        g.check()?;
        Ok(g)
    }

    /// The graph of a single slice string.
    pub fn from_string(word: &[UnitSlice]) -> Result<Self> {
        let n = word.len();
        if n == 0 {
            return Err(Error::IllegalSliceString("empty string".into()));
        }
        Self::checked(word.to_vec(), (1..n).map(|i| (i - 1, i)), [0], [n - 1])
    }

    /// Union of the string graphs of several slice strings.
    pub fn from_strings(words: &[Vec<UnitSlice>]) -> Result<Self> {
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        let mut initial = Vec::new();
        let mut finals = Vec::new();
        for w in words {
            if w.is_empty() {
                return Err(Error::IllegalSliceString("empty string".into()));
            }
            let off = labels.len();
            initial.push(off);
            finals.push(off + w.len() - 1);
            edges.extend((1..w.len()).map(|i| (off + i - 1, off + i)));
            labels.extend(w.iter().cloned());
        }
        Self::checked(labels, edges, initial, finals)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: usize) -> &UnitSlice {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[UnitSlice] {
        &self.labels
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    /// Largest frontier over all labels.
    pub fn width(&self) -> usize {
        self.labels.iter().map(UnitSlice::width).max().unwrap_or(0)
    }

    /// Center events of all labels.
    pub fn events(&self) -> BTreeSet<Event> {
        self.labels.iter().map(|s| s.event().to_string()).collect()
    }

    fn reachable(&self) -> BTreeSet<usize> {
        let mut seen = self.initial.clone();
        let mut queue: VecDeque<usize> = seen.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            for &w in &self.succ[v] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    fn coreachable(&self) -> BTreeSet<usize> {
        let mut pred = vec![Vec::new(); self.len()];
        for &(u, v) in &self.edges {
            pred[v].push(u);
        }
        let mut seen = self.finals.clone();
        let mut queue: VecDeque<usize> = seen.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            for &u in &pred[v] {
                if seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Lists composability violations, bad initial/final labels, degenerate
    /// labels and dead vertices.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for &(u, v) in &self.edges {
            if !can_follow(&self.labels[u], &self.labels[v]) {
                out.push(Diagnostic {
                    kind: "Composability",
                    message: format!(
                        "edge ({u},{v}): out-frontier {} does not glue to in-frontier {}",
                        self.labels[u].out_width(),
                        self.labels[v].in_width()
                    ),
                });
            }
        }
        for &v in &self.initial {
            if !self.labels[v].is_initial() {
                out.push(Diagnostic {
                    kind: "NotInitial",
                    message: format!("initial vertex {v} has a nonempty in-frontier"),
                });
            }
        }
        for &v in &self.finals {
            if !self.labels[v].is_final() {
                out.push(Diagnostic {
                    kind: "NotFinal",
                    message: format!("final vertex {v} has a nonempty out-frontier"),
                });
            }
        }
        for (v, s) in self.labels.iter().enumerate() {
            if s.is_degenerate() {
                out.push(Diagnostic {
                    kind: "Degenerate",
                    message: format!("vertex {v} carries the degenerate slice {s}"),
                });
            }
        }
        let reach = self.reachable();
        let co = self.coreachable();
        for v in 0..self.len() {
            if !reach.contains(&v) || !co.contains(&v) {
                out.push(Diagnostic {
                    kind: "DeadVertex",
                    message: format!("vertex {v} lies on no initial-to-final walk"),
                });
            }
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        match self.validate().into_iter().find(Diagnostic::is_error) {
            Some(d) => Err(Error::InvalidGraph(d.to_string())),
            None => Ok(()),
        }
    }

    /// Induced subgraph on `keep`, renumbered in increasing id order.
    pub fn induced(&self, keep: &BTreeSet<usize>) -> SliceGraph {
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|(u, v)| index.contains_key(u) && index.contains_key(v))
            .map(|(u, v)| (index[u], index[v]));
        let pick = |s: &BTreeSet<usize>| -> Vec<usize> {
            s.iter().filter_map(|v| index.get(v).copied()).collect()
        };
        SliceGraph::new(labels, edges, pick(&self.initial), pick(&self.finals))
            .expect("indices remapped in range")
    }

    /// Vertices on some initial-to-final walk.
    pub fn useful(&self) -> BTreeSet<usize> {
        let co = self.coreachable();
        self.reachable().intersection(&co).copied().collect()
    }

    /// Keeps the useful vertices, renumbered in increasing id order.
    pub fn trim(&self) -> SliceGraph {
        self.induced(&self.useful())
    }

    /// State 0 is the start; vertex `v` becomes state `v + 1`.
    pub fn to_automaton(&self) -> SliceAutomaton {
        let mut transitions = Vec::new();
        for &v in &self.initial {
            transitions.push((0, self.labels[v].clone(), v + 1));
        }
        for &(u, v) in &self.edges {
            transitions.push((u + 1, self.labels[v].clone(), v + 1));
        }
        SliceAutomaton::new(
            self.len() + 1,
            0,
            self.finals.iter().map(|v| v + 1),
            transitions,
        )
    }

    /// The fixed mapping from automata to slice graphs: one vertex per
    /// useful transition, edges between consecutive transitions.
    pub fn from_automaton(a: &SliceAutomaton) -> Result<SliceGraph> {
        let a = a.trim();
        if a.accepting().contains(&a.start()) {
            return Err(Error::IllegalSliceString(
                "automaton accepts the empty string".into(),
            ));
        }
        let trans: Vec<(usize, &UnitSlice, usize)> = a.labeled_transitions().collect();
        let labels: Vec<UnitSlice> = trans.iter().map(|t| t.1.clone()).collect();
        let mut edges = Vec::new();
        for (i, t1) in trans.iter().enumerate() {
            for (j, t2) in trans.iter().enumerate() {
                if t1.2 == t2.0 {
                    edges.push((i, j));
                }
            }
        }
        let initial: Vec<usize> = (0..trans.len())
            .filter(|&i| trans[i].0 == a.start())
            .collect();
        let finals: Vec<usize> = (0..trans.len())
            .filter(|&i| a.accepting().contains(&trans[i].2))
            .collect();
        let g = SliceGraph::new(labels, edges, initial, finals)?;
        if let Some(d) = g.validate().into_iter().find(Diagnostic::is_error) {
            return Err(Error::IllegalSliceString(d.to_string()));
        }
        Ok(g)
    }

    /// Accepting walk labels of length at most `max_len`.
    pub fn enumerate_slice_language(&self, max_len: usize) -> BTreeSet<Vec<UnitSlice>> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<Vec<usize>> = self.initial.iter().map(|&v| vec![v]).collect();
        while let Some(path) = stack.pop() {
            if path.len() > max_len {
                continue;
            }
            let v = *path.last().unwrap();
            if self.finals.contains(&v) {
                out.insert(path.iter().map(|&u| self.labels[u].clone()).collect());
            }
            for &w in &self.succ[v] {
                let mut p = path.clone();
                p.push(w);
                stack.push(p);
            }
        }
        out
    }

    /// Composed DAGs of accepting walks of length at most `max_len`.
    ///
    /// Prefixes ending in the same vertex with isomorphic composed prefix
    /// slices have the same completions, so they are merged.
    pub fn enumerate_graph_language(&self, max_len: usize) -> DagSet {
        let mut out = DagSet::new();
        let mut layer: BTreeMap<(usize, CanonicalForm<SliceLabel>), Slice> = BTreeMap::new();
        for &v in &self.initial {
            let s = self.labels[v].to_slice();
            layer.insert((v, s.canonical()), s);
        }
        for _ in 0..max_len {
            let mut next = BTreeMap::new();
            for ((v, _), prefix) in &layer {
                if self.finals.contains(v) {
                    if let Some(dag) = prefix.to_dag() {
                        out.entry(dag.canonical()).or_insert(dag);
                    }
                }
                for &w in &self.succ[*v] {
                    if let Ok(s) = prefix.compose(&self.labels[w].to_slice()) {
                        next.entry((w, s.canonical())).or_insert(s);
                    }
                }
            }
            layer = next;
        }
        out
    }

    pub fn enumerate_po_language(&self, max_len: usize) -> PoSet {
        po_set(self.enumerate_graph_language(max_len).values())
    }

    /// Renumbers vertices breadth-first from the initial vertices, visiting
    /// successors in slice-symbol order; unreachable vertices come last.
    pub fn canonical_order(&self) -> SliceGraph {
        let key = |v: &usize| (self.labels[*v].clone(), *v);
        let mut order: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.len()];
        let mut starts: Vec<usize> = self.initial.iter().copied().collect();
        starts.sort_by_key(key);
        let mut queue = VecDeque::new();
        for v in starts {
            seen[v] = true;
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = self.succ[v].iter().copied().filter(|&w| !seen[w]).collect();
            next.sort_by_key(key);
            for w in next {
                seen[w] = true;
                queue.push_back(w);
            }
        }
        let mut rest: Vec<usize> = (0..self.len()).filter(|&v| !seen[v]).collect();
        rest.sort_by_key(key);
        order.extend(rest);
        self.permuted(&order)
    }

    /// Relabels so that new vertex `i` is old vertex `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> SliceGraph {
        let mut index = vec![0; self.len()];
        for (i, &v) in order.iter().enumerate() {
            index[v] = i;
        }
        SliceGraph::new(
            order.iter().map(|&v| self.labels[v].clone()).collect(),
            self.edges.iter().map(|&(u, v)| (index[u], index[v])),
            self.initial.iter().map(|&v| index[v]),
            self.finals.iter().map(|&v| index[v]),
        )
        .expect("permutation keeps ids in range")
    }
}

/// Closes and deduplicates a set of DAGs.
pub fn po_set<'a>(dags: impl IntoIterator<Item = &'a Dag>) -> PoSet {
    dags.into_iter()
        .map(|d| {
            let p = d.transitive_closure();
            (p.canonical(), p)
        })
        .collect()
}

/// Deduplicates DAGs up to isomorphism.
pub fn dag_set(dags: impl IntoIterator<Item = Dag>) -> DagSet {
    dags.into_iter().map(|d| (d.canonical(), d)).collect()
}
