//! Transitive reduction of slice graphs through transitivity colorings.
//!
//! A coloring annotates each pair of sliced edges of a unit slice with the
//! relation between their real source vertices, and marks the sliced parts
//! of superfluous edges. Consecutive slices must agree on the shared
//! frontier, so a coloring is threaded through a slice string by its
//! [`FrontierInterface`]. Expanding a slice graph by all colorings and
//! deleting marked edges yields a Hasse diagram generator with the same
//! partial order language.
//!
//! Edges of a unit slice are numbered as follows: in-port `i` carries edge
//! `i` (whether it enters the center or passes through); the center-out
//! edge at out-port `j` is edge `in_width + rank of j among center outputs`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::slice::{Link, Slice, Source, UnitSlice};
use crate::slice_graph::SliceGraph;

/// Relation between the real sources of two sliced edges.
///
/// Bit strings: `00` same source, `01` first source strictly below the
/// second, `10` the converse, `11` incomparable. On the diagonal, `00` means
/// unmarked and `11` marked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Same,
    Before,
    After,
    Incomparable,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Before => Color::After,
            Color::After => Color::Before,
            c => c,
        }
    }

    pub fn bits(self) -> &'static str {
        match self {
            Color::Same => "00",
            Color::Before => "01",
            Color::After => "10",
            Color::Incomparable => "11",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.bits())
    }
}

/// Restriction of a coloring to the edges touching one frontier: pairwise
/// colors, marks and the numbered port partition (cells numbered by their
/// smallest port).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrontierInterface {
    width: usize,
    colors: Vec<Color>,
    marks: Vec<bool>,
    cells: Vec<usize>,
}

impl FrontierInterface {
    /// The interface of an empty frontier.
    pub fn empty() -> Self {
        FrontierInterface {
            width: 0,
            colors: Vec::new(),
            marks: Vec::new(),
            cells: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn color(&self, i: usize, j: usize) -> Color {
        self.colors[i * self.width + j]
    }

    pub fn is_marked(&self, i: usize) -> bool {
        self.marks[i]
    }

    pub fn cell(&self, i: usize) -> usize {
        self.cells[i]
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn num_cells(&self) -> usize {
        self.cells.iter().max().map_or(0, |m| m + 1)
    }

    /// Cells with their mark, in cell-number order.
    fn cell_marks(&self) -> Vec<bool> {
        let mut marks = vec![false; self.num_cells()];
        for (i, &c) in self.cells.iter().enumerate() {
            marks[c] = self.marks[i];
        }
        marks
    }
}

/// Numbers raw cell keys by first occurrence.
fn canonical_cells<K: PartialEq + Clone>(raw: &[K]) -> Vec<usize> {
    let mut seen: Vec<K> = Vec::new();
    raw.iter()
        .map(|k| match seen.iter().position(|s| s == k) {
            Some(p) => p,
            None => {
                seen.push(k.clone());
                seen.len() - 1
            }
        })
        .collect()
}

/// A transitivity coloring of one unit slice together with the frontier
/// partitions; for simple colorings every cell is a singleton.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransitivityColoring {
    slice: UnitSlice,
    input: FrontierInterface,
    output: FrontierInterface,
}

/// Colorings of slices whose DAGs may contain parallel edges carry
/// nontrivial partitions; the representation is shared.
pub type MultiEdgeColoring = TransitivityColoring;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum EdgeKind {
    IntoCenter(usize),
    Pass(usize, usize),
    FromCenter(usize),
}

impl TransitivityColoring {
    pub fn slice(&self) -> &UnitSlice {
        &self.slice
    }

    pub fn input(&self) -> &FrontierInterface {
        &self.input
    }

    pub fn output(&self) -> &FrontierInterface {
        &self.output
    }

    pub fn num_edges(&self) -> usize {
        self.slice.in_width() + self.slice.center_outputs().len()
    }

    fn kind(&self, e: usize) -> EdgeKind {
        let k = self.slice.in_width();
        if e < k {
            match self.slice.inputs()[e] {
                Link::Center => EdgeKind::IntoCenter(e),
                Link::Out(j) => EdgeKind::Pass(e, j),
            }
        } else {
            EdgeKind::FromCenter(self.slice.center_outputs()[e - k])
        }
    }

    /// The color of an ordered edge pair; `None` where an edge entering the
    /// center meets an edge leaving it.
    pub fn tau(&self, e1: usize, e2: usize) -> Option<Color> {
        if e1 == e2 {
            return Some(if self.is_marked(e1) {
                Color::Incomparable
            } else {
                Color::Same
            });
        }
        use EdgeKind::*;
        match (self.kind(e1), self.kind(e2)) {
            (IntoCenter(a) | Pass(a, _), IntoCenter(b) | Pass(b, _)) => {
                Some(self.input.color(a, b))
            }
            (IntoCenter(_), FromCenter(_)) | (FromCenter(_), IntoCenter(_)) => None,
            (Pass(_, a), FromCenter(b)) | (FromCenter(a), Pass(_, b)) => {
                Some(self.output.color(a, b))
            }
            (FromCenter(_), FromCenter(_)) => Some(Color::Same),
        }
    }

    pub fn is_marked(&self, e: usize) -> bool {
        match self.kind(e) {
            EdgeKind::IntoCenter(i) | EdgeKind::Pass(i, _) => self.input.is_marked(i),
            EdgeKind::FromCenter(j) => self.output.is_marked(j),
        }
    }

    pub fn marked_edges(&self) -> Vec<usize> {
        (0..self.num_edges())
            .filter(|&e| self.is_marked(e))
            .collect()
    }

    pub fn in_partition(&self) -> &[usize] {
        self.input.cells()
    }

    pub fn out_partition(&self) -> &[usize] {
        self.output.cells()
    }

    /// Some frontier cell holds more than one port.
    pub fn has_multi_cell(&self) -> bool {
        self.input.num_cells() < self.input.width() || self.output.num_cells() < self.output.width()
    }

    pub fn has_marks(&self) -> bool {
        self.input
            .marks
            .iter()
            .chain(&self.output.marks)
            .any(|&m| m)
    }

    /// Deletes marked edges and collapses each cell to a single port;
    /// surviving cells keep their relative order.
    pub fn reduced_slice(&self) -> UnitSlice {
        let rank = |iface: &FrontierInterface| -> Vec<Option<usize>> {
            let mut next = 0;
            iface
                .cell_marks()
                .into_iter()
                .map(|m| {
                    (!m).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let in_rank = rank(&self.input);
        let out_rank = rank(&self.output);
        let mut inputs = Vec::new();
        for (c, r) in in_rank.iter().enumerate() {
            if r.is_none() {
                continue;
            }
            let port = self.input.cells.iter().position(|&x| x == c).unwrap();
            inputs.push(match self.slice.inputs()[port] {
                Link::Center => Link::Center,
                Link::Out(j) => {
                    Link::Out(out_rank[self.output.cell(j)].expect("marks are inherited"))
                }
            });
        }
        let outputs = out_rank.iter().flatten().count();
        UnitSlice::new(self.slice.event(), inputs, outputs).expect("cells map injectively")
    }
}

/// Restricted-growth encodings of all set partitions of `n` items.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            rec(n, cur, if b == max { max + 1 } else { max }, out);
            cur.pop();
        }
    }
    rec(n, &mut cur, 0, &mut out);
    out
}

/// All out-interfaces extending `input` through `slice`.
fn extensions(slice: &UnitSlice, input: &FrontierInterface, multi: bool) -> Vec<FrontierInterface> {
    let k = slice.in_width();
    if input.width != k {
        return Vec::new();
    }
    let links = slice.inputs();
    let cin: Vec<usize> = slice.center_inputs().collect();
    // An edge entering the center is marked iff another edge entering the
    // center leaves a strictly larger source.
    for &e in &cin {
        let superfluous = cin
            .iter()
            .any(|&e1| e1 != e && input.color(e, e1) == Color::Before);
        if input.marks[e] != superfluous {
            return Vec::new();
        }
    }
    if multi {
        for i in 0..k {
            for j in 0..k {
                let same_cell = input.cells[i] == input.cells[j];
                if same_cell && (links[i] == Link::Center) != (links[j] == Link::Center) {
                    return Vec::new();
                }
                if !same_cell
                    && links[i] == Link::Center
                    && links[j] == Link::Center
                    && input.color(i, j) == Color::Same
                {
                    return Vec::new();
                }
            }
        }
    }
    // Pass-through sources below the center.
    let below: Vec<bool> = (0..k)
        .map(|i| {
            cin.iter()
                .any(|&e| matches!(input.color(i, e), Color::Same | Color::Before))
        })
        .collect();
    let sources = slice.sources();
    let m = slice.out_width();
    let outs = slice.center_outputs();
    let partitions = if multi {
        set_partitions(outs.len())
    } else {
        vec![(0..outs.len()).collect()]
    };
    let block_of = |j: usize, part: &[usize]| part[outs.iter().position(|&o| o == j).unwrap()];
    let mut colors = vec![Color::Same; m * m];
    for a in 0..m {
        for b in 0..m {
            colors[a * m + b] = match (sources[a], sources[b]) {
                _ if a == b => Color::Same,
                (Source::In(i), Source::In(j)) => input.color(i, j),
                (Source::In(i), Source::Center) => {
                    if below[i] {
                        Color::Before
                    } else {
                        Color::Incomparable
                    }
                }
                (Source::Center, Source::In(j)) => {
                    if below[j] {
                        Color::After
                    } else {
                        Color::Incomparable
                    }
                }
                (Source::Center, Source::Center) => Color::Same,
            };
        }
    }
    let mut out = Vec::new();
    for part in partitions {
        let blocks = part.iter().max().map_or(0, |b| b + 1);
        for mask in 0u32..(1 << blocks) {
            let marks: Vec<bool> = (0..m)
                .map(|j| match sources[j] {
                    Source::In(i) => input.marks[i],
                    Source::Center => mask >> block_of(j, &part) & 1 == 1,
                })
                .collect();
            let raw: Vec<(bool, usize)> = (0..m)
                .map(|j| match sources[j] {
                    Source::In(i) => (false, input.cells[i]),
                    Source::Center => (true, block_of(j, &part)),
                })
                .collect();
            out.push(FrontierInterface {
                width: m,
                colors: colors.clone(),
                marks,
                cells: canonical_cells(&raw),
            });
        }
    }
    out
}

/// All simple transitivity colorings of `slice` extending `input`.
pub fn enumerate_colorings(
    slice: &UnitSlice,
    input: &FrontierInterface,
) -> Vec<TransitivityColoring> {
    extensions(slice, input, false)
        .into_iter()
        .map(|output| TransitivityColoring {
            slice: slice.clone(),
            input: input.clone(),
            output,
        })
        .collect()
}

/// All multi-edge colorings of `slice` extending `input`.
pub fn enumerate_multi_edge_colorings(
    slice: &UnitSlice,
    input: &FrontierInterface,
) -> Vec<MultiEdgeColoring> {
    extensions(slice, input, true)
        .into_iter()
        .map(|output| TransitivityColoring {
            slice: slice.clone(),
            input: input.clone(),
            output,
        })
        .collect()
}

/// Every coloring sequence of a full slice string; the final slice closes
/// the string, so each returned sequence is complete and consistent.
pub fn colorings_of_string(d: &[UnitSlice], multi: bool) -> Vec<Vec<TransitivityColoring>> {
    let mut partial: Vec<Vec<TransitivityColoring>> = vec![Vec::new()];
    for s in d {
        let mut next = Vec::new();
        for seq in partial {
            let input = seq
                .last()
                .map_or_else(FrontierInterface::empty, |c| c.output.clone());
            for output in extensions(s, &input, multi) {
                let mut seq2 = seq.clone();
                seq2.push(TransitivityColoring {
                    slice: s.clone(),
                    input: input.clone(),
                    output,
                });
                next.push(seq2);
            }
        }
        partial = next;
    }
    partial
}

/// The unique coloring of a unit decomposition of a simple DAG.
pub fn color_unit_decomposition(d: &[UnitSlice]) -> Result<Vec<TransitivityColoring>> {
    let dag = Slice::compose_units(d)?.to_dag().ok_or_else(|| {
        Error::IllegalSliceString("string does not start initial and end final".into())
    })?;
    dag.roots()?;
    if !dag.is_simple() {
        return Err(Error::NotSimple);
    }
    colorings_of_string(d, false)
        .into_iter()
        .next()
        .ok_or_else(|| Error::IllegalSliceString("no consistent coloring".into()))
}

/// Applies [`TransitivityColoring::reduced_slice`] slice by slice.
pub fn reduce_colored_string(colorings: &[TransitivityColoring]) -> Vec<UnitSlice> {
    colorings
        .iter()
        .map(TransitivityColoring::reduced_slice)
        .collect()
}

/// The colored expansion of a slice graph, trimmed.
struct Expansion {
    /// (vertex of the source graph, coloring)
    states: Vec<(usize, TransitivityColoring)>,
    edges: BTreeSet<(usize, usize)>,
    initial: BTreeSet<usize>,
    finals: BTreeSet<usize>,
}

type Successors = Rc<Vec<Rc<FrontierInterface>>>;

/// Interns interfaces and memoizes colorings per (slice, in-interface).
struct Colorer {
    multi: bool,
    interned: HashMap<FrontierInterface, Rc<FrontierInterface>>,
    memo: HashMap<(UnitSlice, Rc<FrontierInterface>), Successors>,
}

impl Colorer {
    fn intern(&mut self, f: FrontierInterface) -> Rc<FrontierInterface> {
        self.interned
            .entry(f.clone())
            .or_insert_with(|| Rc::new(f))
            .clone()
    }

    fn outputs(
        &mut self,
        s: &UnitSlice,
        input: &Rc<FrontierInterface>,
    ) -> Rc<Vec<Rc<FrontierInterface>>> {
        if let Some(r) = self.memo.get(&(s.clone(), input.clone())) {
            return r.clone();
        }
        let outs: Vec<Rc<FrontierInterface>> = extensions(s, input, self.multi)
            .into_iter()
            .map(|f| self.intern(f))
            .collect();
        let outs = Rc::new(outs);
        self.memo.insert((s.clone(), input.clone()), outs.clone());
        outs
    }
}

type Key = (usize, Rc<FrontierInterface>, Rc<FrontierInterface>);

/// Forward breadth-first expansion from the initial vertices, then trim.
fn expand(sg: &SliceGraph, multi: bool) -> Expansion {
    let mut colorer = Colorer {
        multi,
        interned: HashMap::new(),
        memo: HashMap::new(),
    };
    let mut index: HashMap<Key, usize> = HashMap::new();
    let mut keys: Vec<Key> = Vec::new();
    let mut queue = VecDeque::new();
    let mut edges = BTreeSet::new();
    let mut initial = BTreeSet::new();
    let mut add = |key: Key, keys: &mut Vec<Key>, queue: &mut VecDeque<usize>| -> usize {
        *index.entry(key.clone()).or_insert_with(|| {
            keys.push(key);
            queue.push_back(keys.len() - 1);
            keys.len() - 1
        })
    };
    let empty = colorer.intern(FrontierInterface::empty());
    for &v in sg.initial() {
        for out in colorer.outputs(sg.label(v), &empty).iter() {
            initial.insert(add((v, empty.clone(), out.clone()), &mut keys, &mut queue));
        }
    }
    while let Some(id) = queue.pop_front() {
        let (v, _, out) = keys[id].clone();
        for &w in sg.successors(v) {
            for out2 in colorer.outputs(sg.label(w), &out).iter() {
                let id2 = add((w, out.clone(), out2.clone()), &mut keys, &mut queue);
                edges.insert((id, id2));
            }
        }
    }
    let finals = (0..keys.len())
        .filter(|&id| sg.finals().contains(&keys[id].0))
        .collect();
    let states = keys
        .into_iter()
        .map(|(v, i, o)| {
            (
                v,
                TransitivityColoring {
                    slice: sg.label(v).clone(),
                    input: (*i).clone(),
                    output: (*o).clone(),
                },
            )
        })
        .collect();
    let mut ex = Expansion {
        states,
        edges,
        initial,
        finals,
    };
    ex.trim();
    ex
}

impl Expansion {
    fn trim(&mut self) {
        let g = SliceGraph::new(
            self.states.iter().map(|(_, c)| c.slice.clone()).collect(),
            self.edges.iter().copied(),
            self.initial.iter().copied(),
            self.finals.iter().copied(),
        )
        .expect("ids in range");
        let keep = useful(&g);
        let index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        self.states = keep.iter().map(|&v| self.states[v].clone()).collect();
        self.edges = self
            .edges
            .iter()
            .filter(|(a, b)| index.contains_key(a) && index.contains_key(b))
            .map(|(a, b)| (index[a], index[b]))
            .collect();
        self.initial = self
            .initial
            .iter()
            .filter_map(|v| index.get(v).copied())
            .collect();
        self.finals = self
            .finals
            .iter()
            .filter_map(|v| index.get(v).copied())
            .collect();
    }

    fn reduced_graph(&self) -> SliceGraph {
        SliceGraph::new(
            self.states.iter().map(|(_, c)| c.reduced_slice()).collect(),
            self.edges.iter().copied(),
            self.initial.iter().copied(),
            self.finals.iter().copied(),
        )
        .expect("ids in range")
    }
}

/// Vertices on some initial-to-final walk.
fn useful(g: &SliceGraph) -> Vec<usize> {
    let n = g.len();
    let mut fwd = vec![false; n];
    let mut queue: VecDeque<usize> = g.initial().iter().copied().collect();
    for &v in g.initial() {
        fwd[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &w in g.successors(v) {
            if !fwd[w] {
                fwd[w] = true;
                queue.push_back(w);
            }
        }
    }
    let mut pred = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        pred[v].push(u);
    }
    let mut bwd = vec![false; n];
    let mut queue: VecDeque<usize> = g.finals().iter().copied().collect();
    for &v in g.finals() {
        bwd[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &u in &pred[v] {
            if !bwd[u] {
                bwd[u] = true;
                queue.push_back(u);
            }
        }
    }
    (0..n).filter(|&v| fwd[v] && bwd[v]).collect()
}

/// Transitive reduction for slice graphs generating only simple DAGs.
pub fn transitive_reduce_simple(sg: &SliceGraph) -> SliceGraph {
    expand(sg, false).reduced_graph()
}

/// Transitive reduction for arbitrary slice graphs: the result generates
/// the Hasse diagrams of the partial orders generated by `sg`.
pub fn transitive_reduce(sg: &SliceGraph) -> SliceGraph {
    expand(sg, true).reduced_graph()
}

/// Whether every DAG generated by `sg` is simple and transitive reduced.
pub fn is_hasse_generator(sg: &SliceGraph) -> bool {
    expand(sg, true)
        .states
        .iter()
        .all(|(_, c)| !c.has_marks() && !c.has_multi_cell())
}

/// Number of colored vertices surviving the trim, before relabeling.
pub fn expansion_size(sg: &SliceGraph) -> usize {
    expand(sg, true).states.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag::Dag;
    use crate::slice::{FINAL_EVENT, INITIAL_EVENT};

    fn dag(labels: &[&str], edges: &[(usize, usize)]) -> Dag {
        Dag::new(
            labels.iter().map(|s| s.to_string()).collect(),
            edges.to_vec(),
        )
        .unwrap()
    }

    fn compose(d: &[UnitSlice]) -> Dag {
        Slice::compose_units(d).unwrap().to_dag().unwrap()
    }

    #[test]
    fn initial_diamond_slice_has_one_coloring() {
        let s = UnitSlice::initial(INITIAL_EVENT, 2);
        let all = enumerate_colorings(&s, &FrontierInterface::empty());
        // Marks are guesses at the source; both are offered.
        assert_eq!(all.len(), 4);
        for c in &all {
            assert_eq!(c.tau(0, 1), Some(Color::Same));
        }
        let d = dag(&["ι", "a", "b", "ε"], &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        for dec in d.unit_decompositions().unwrap() {
            let seqs = colorings_of_string(&dec, false);
            assert_eq!(seqs.len(), 1);
            assert!(seqs[0][0].marked_edges().is_empty());
        }
    }

    #[test]
    fn superfluous_edge_marked_by_pass_through_rule() {
        let d = dag(&["ι", "a", "ε"], &[(0, 1), (1, 2), (0, 2)]);
        for dec in d.unit_decompositions().unwrap() {
            let c = color_unit_decomposition(&dec).unwrap();
            // Slice of `a`: edge into a, the pass-through part of ι→ε, a→ε.
            let a = &c[1];
            let pass = (0..2)
                .find(|&i| a.slice().inputs()[i] != Link::Center)
                .unwrap();
            let into = 1 - pass;
            assert!(a.is_marked(pass));
            assert!(!a.is_marked(into));
            assert_eq!(a.tau(pass, 2), Some(Color::Before));
            assert_eq!(a.tau(2, pass), Some(Color::After));
            assert_eq!(a.tau(into, 2), None);
            let reduced = compose(&reduce_colored_string(&c));
            assert!(reduced.is_isomorphic(&d.transitive_reduction()));
        }
    }

    #[test]
    fn parallel_edges_share_a_cell() {
        let d = dag(&["ι", "a", "ε"], &[(0, 1), (0, 1), (1, 2)]);
        assert_eq!(
            color_unit_decomposition(&d.unit_decompositions().unwrap()[0]),
            Err(Error::NotSimple)
        );
        for dec in d.unit_decompositions().unwrap() {
            let seqs = colorings_of_string(&dec, true);
            assert_eq!(seqs.len(), 1);
            let a = &seqs[0][1];
            assert_eq!(a.in_partition(), &[0, 0]);
            let reduced = compose(&reduce_colored_string(&seqs[0]));
            assert!(reduced.is_isomorphic(&d.transitive_reduction()));
        }
    }

    #[test]
    fn double_edge_graph_collapses() {
        let g = SliceGraph::from_string(&[
            UnitSlice::initial(INITIAL_EVENT, 2),
            UnitSlice::terminal(FINAL_EVENT, 2),
        ])
        .unwrap();
        assert!(!is_hasse_generator(&g));
        let h = transitive_reduce(&g);
        let lang = h.enumerate_graph_language(4);
        assert_eq!(lang.len(), 1);
        let only = lang.values().next().unwrap();
        assert!(only.is_isomorphic(&dag(&["ι", "ε"], &[(0, 1)])));
        assert!(is_hasse_generator(&h));
    }

    #[test]
    fn hasse_generator_detection() {
        let reduced = dag(&["ι", "a", "ε"], &[(0, 1), (1, 2)]);
        let g = SliceGraph::from_strings(&reduced.unit_decompositions().unwrap()).unwrap();
        assert!(is_hasse_generator(&g));
        let fat = dag(&["ι", "a", "ε"], &[(0, 1), (1, 2), (0, 2)]);
        let g2 = SliceGraph::from_strings(&fat.unit_decompositions().unwrap()).unwrap();
        assert!(!is_hasse_generator(&g2));
        assert!(is_hasse_generator(&transitive_reduce(&g2)));
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        let counts: Vec<usize> = (0..6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
    }
}
