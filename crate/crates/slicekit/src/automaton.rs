//! Finite automata over unit-slice symbols.
//!
//! Symbols are interned per automaton: `symbols` is sorted and transitions
//! refer to positions in it. Binary operations merge the two alphabets.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::slice::UnitSlice;

/// A nondeterministic automaton with a single start state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceAutomaton {
    symbols: Vec<UnitSlice>,
    num_states: usize,
    start: usize,
    accepting: BTreeSet<usize>,
    transitions: BTreeSet<(usize, usize, usize)>,
}

impl SliceAutomaton {
    /// Builds an automaton from transitions labeled by slices.
    pub fn new(
        num_states: usize,
        start: usize,
        accepting: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, UnitSlice, usize)>,
    ) -> Self {
        let raw: Vec<(usize, UnitSlice, usize)> = transitions.into_iter().collect();
        let mut symbols: Vec<UnitSlice> = raw.iter().map(|t| t.1.clone()).collect();
        symbols.sort();
        symbols.dedup();
        let transitions = raw
            .into_iter()
            .map(|(p, s, q)| (p, symbols.binary_search(&s).unwrap(), q))
            .collect();
        SliceAutomaton {
            symbols,
            num_states: num_states.max(start + 1),
            start,
            accepting: accepting.into_iter().collect(),
            transitions,
        }
    }

    pub fn symbols(&self) -> &[UnitSlice] {
        &self.symbols
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    /// Transitions as (source, symbol index, target).
    pub fn transitions(&self) -> &BTreeSet<(usize, usize, usize)> {
        &self.transitions
    }

    pub fn labeled_transitions(&self) -> impl Iterator<Item = (usize, &UnitSlice, usize)> {
        self.transitions
            .iter()
            .map(|&(p, a, q)| (p, &self.symbols[a], q))
    }

    pub fn is_deterministic(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.transitions
            .iter()
            .all(|&(p, a, _)| seen.insert((p, a)))
    }

    fn successors(&self) -> Vec<Vec<(usize, usize)>> {
        let mut succ = vec![Vec::new(); self.num_states];
        for &(p, a, q) in &self.transitions {
            succ[p].push((a, q));
        }
        succ
    }

    /// Deterministic transition map; only meaningful on a DFA.
    fn delta(&self) -> HashMap<(usize, usize), usize> {
        self.transitions
            .iter()
            .map(|&(p, a, q)| ((p, a), q))
            .collect()
    }

    pub fn accepts(&self, word: &[UnitSlice]) -> bool {
        let mut cur: BTreeSet<usize> = BTreeSet::from([self.start]);
        let succ = self.successors();
        for s in word {
            let Ok(a) = self.symbols.binary_search(s) else {
                return false;
            };
            cur = cur
                .iter()
                .flat_map(|&p| succ[p].iter().filter(|t| t.0 == a).map(|t| t.1))
                .collect();
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|q| self.accepting.contains(q))
    }

    /// States reachable from the start.
    pub fn reachable(&self) -> BTreeSet<usize> {
        let succ = self.successors();
        let mut seen = BTreeSet::from([self.start]);
        let mut queue = VecDeque::from([self.start]);
        while let Some(p) = queue.pop_front() {
            for &(_, q) in &succ[p] {
                if seen.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        seen
    }

    /// States from which an accepting state is reachable.
    pub fn coreachable(&self) -> BTreeSet<usize> {
        let mut pred = vec![Vec::new(); self.num_states];
        for &(p, _, q) in &self.transitions {
            pred[q].push(p);
        }
        let mut seen: BTreeSet<usize> = self.accepting.clone();
        let mut queue: VecDeque<usize> = seen.iter().copied().collect();
        while let Some(q) = queue.pop_front() {
            for &p in &pred[q] {
                if seen.insert(p) {
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    pub fn is_empty(&self) -> bool {
        self.reachable().iter().all(|q| !self.accepting.contains(q))
    }

    /// Keeps only useful states (the start state always survives) and the
    /// symbols still in use.
    pub fn trim(&self) -> SliceAutomaton {
        let reach = self.reachable();
        let co = self.coreachable();
        let keep: Vec<usize> = (0..self.num_states)
            .filter(|q| *q == self.start || (reach.contains(q) && co.contains(q)))
            .collect();
        let index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let transitions = self
            .transitions
            .iter()
            .filter(|(p, _, q)| {
                reach.contains(p)
                    && co.contains(q)
                    && index.contains_key(p)
                    && index.contains_key(q)
            })
            .map(|&(p, a, q)| (index[&p], self.symbols[a].clone(), index[&q]));
        let accepting = self
            .accepting
            .iter()
            .filter(|q| reach.contains(q))
            .filter_map(|q| index.get(q).copied());
        SliceAutomaton::new(keep.len(), index[&self.start], accepting, transitions)
    }

    /// Subset construction; the result is deterministic and only contains
    /// reachable subsets.
    pub fn determinize(&self) -> SliceAutomaton {
        let succ = self.successors();
        let first = BTreeSet::from([self.start]);
        let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::from([(first.clone(), 0)]);
        let mut queue = VecDeque::from([first]);
        let mut transitions = Vec::new();
        let mut accepting = Vec::new();
        while let Some(set) = queue.pop_front() {
            let id = index[&set];
            if set.iter().any(|q| self.accepting.contains(q)) {
                accepting.push(id);
            }
            let mut by_symbol: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
            for &p in &set {
                for &(a, q) in &succ[p] {
                    by_symbol.entry(a).or_default().insert(q);
                }
            }
            for (a, target) in by_symbol {
                let next = index.len();
                let tid = *index.entry(target.clone()).or_insert_with(|| {
                    queue.push_back(target);
                    next
                });
                transitions.push((id, self.symbols[a].clone(), tid));
            }
        }
        SliceAutomaton::new(index.len(), 0, accepting, transitions)
    }

    /// The minimal trimmed DFA with states numbered in breadth-first order
    /// (symbols in sorted order). Equal languages give equal values.
    pub fn minimize(&self) -> SliceAutomaton {
        let dfa = self.determinize().trim();
        let n = dfa.num_states;
        let delta = dfa.delta();
        let k = dfa.symbols.len();
        let mut class: Vec<usize> = (0..n)
            .map(|q| usize::from(dfa.accepting.contains(&q)))
            .collect();
        let mut count = class.iter().collect::<BTreeSet<_>>().len();
        loop {
            let sigs: Vec<(usize, Vec<Option<usize>>)> = (0..n)
                .map(|q| {
                    let row = (0..k)
                        .map(|a| delta.get(&(q, a)).map(|&r| class[r]))
                        .collect();
                    (class[q], row)
                })
                .collect();
            let uniq: BTreeMap<&(usize, Vec<Option<usize>>), usize> = sigs
                .iter()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .enumerate()
                .map(|(i, s)| (s, i))
                .collect();
            let next: Vec<usize> = sigs.iter().map(|s| uniq[s]).collect();
            let next_count = uniq.len();
            class = next;
            if next_count == count {
                break;
            }
            count = next_count;
        }
        // Breadth-first renumbering of classes.
        let mut order: HashMap<usize, usize> = HashMap::from([(class[dfa.start], 0)]);
        let mut queue = VecDeque::from([dfa.start]);
        let mut rep = vec![dfa.start];
        while let Some(q) = queue.pop_front() {
            for a in 0..k {
                if let Some(&r) = delta.get(&(q, a)) {
                    if let std::collections::hash_map::Entry::Vacant(e) = order.entry(class[r]) {
                        e.insert(rep.len());
                        rep.push(r);
                        queue.push_back(r);
                    }
                }
            }
        }
        let mut transitions = Vec::new();
        for (i, &q) in rep.iter().enumerate() {
            for a in 0..k {
                if let Some(&r) = delta.get(&(q, a)) {
                    transitions.push((i, dfa.symbols[a].clone(), order[&class[r]]));
                }
            }
        }
        let accepting = rep
            .iter()
            .enumerate()
            .filter(|(_, q)| dfa.accepting.contains(q))
            .map(|(i, _)| i);
        SliceAutomaton::new(rep.len(), 0, accepting, transitions)
    }

    /// Re-expresses the automaton over a superset alphabet.
    fn lift(&self, symbols: &[UnitSlice]) -> Vec<(usize, usize, usize)> {
        self.transitions
            .iter()
            .map(|&(p, a, q)| (p, symbols.binary_search(&self.symbols[a]).unwrap(), q))
            .collect()
    }

    fn merged_alphabet(&self, other: &SliceAutomaton) -> Vec<UnitSlice> {
        let mut s: Vec<UnitSlice> = self.symbols.iter().chain(&other.symbols).cloned().collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn union(&self, other: &SliceAutomaton) -> SliceAutomaton {
        let off = self.num_states;
        let start = off + other.num_states;
        let mut transitions: Vec<(usize, UnitSlice, usize)> = Vec::new();
        for (p, s, q) in self.labeled_transitions() {
            transitions.push((p, s.clone(), q));
            if p == self.start {
                transitions.push((start, s.clone(), q));
            }
        }
        for (p, s, q) in other.labeled_transitions() {
            transitions.push((p + off, s.clone(), q + off));
            if p == other.start {
                transitions.push((start, s.clone(), q + off));
            }
        }
        let mut accepting: Vec<usize> = self.accepting.iter().copied().collect();
        accepting.extend(other.accepting.iter().map(|q| q + off));
        if self.accepting.contains(&self.start) || other.accepting.contains(&other.start) {
            accepting.push(start);
        }
        SliceAutomaton::new(start + 1, start, accepting, transitions)
    }

    /// Product automaton; `accept` decides acceptance from the two
    /// components, where `None` is the implicit sink of `other`.
    fn product(
        &self,
        other: &SliceAutomaton,
        accept: impl Fn(bool, Option<bool>) -> bool,
        complete_other: bool,
    ) -> SliceAutomaton {
        let symbols = self.merged_alphabet(other);
        let mut succ_a = vec![Vec::new(); self.num_states];
        for (p, a, q) in self.lift(&symbols) {
            succ_a[p].push((a, q));
        }
        let mut succ_b = vec![Vec::new(); other.num_states];
        for (p, a, q) in other.lift(&symbols) {
            succ_b[p].push((a, q));
        }
        type Pair = (usize, Option<usize>);
        let first: Pair = (self.start, Some(other.start));
        let mut index: HashMap<Pair, usize> = HashMap::from([(first, 0)]);
        let mut queue = VecDeque::from([first]);
        let mut transitions = Vec::new();
        let mut accepting = Vec::new();
        while let Some(pair @ (p, q)) = queue.pop_front() {
            let id = index[&pair];
            if accept(
                self.accepting.contains(&p),
                q.map(|q| other.accepting.contains(&q)),
            ) {
                accepting.push(id);
            }
            for &(a, p2) in &succ_a[p] {
                let targets: Vec<Option<usize>> = match q {
                    Some(q) => {
                        let t: Vec<Option<usize>> = succ_b[q]
                            .iter()
                            .filter(|t| t.0 == a)
                            .map(|t| Some(t.1))
                            .collect();
                        if t.is_empty() && complete_other {
                            vec![None]
                        } else {
                            t
                        }
                    }
                    None => vec![None],
                };
                for q2 in targets {
                    let next = (p2, q2);
                    let len = index.len();
                    let tid = *index.entry(next).or_insert_with(|| {
                        queue.push_back(next);
                        len
                    });
                    transitions.push((id, symbols[a].clone(), tid));
                }
            }
        }
        SliceAutomaton::new(index.len(), 0, accepting, transitions)
    }

    pub fn intersection(&self, other: &SliceAutomaton) -> SliceAutomaton {
        self.product(other, |a, b| a && b == Some(true), false)
    }

    /// Words of `self` not accepted by `other`.
    pub fn difference(&self, other: &SliceAutomaton) -> SliceAutomaton {
        let det = other.determinize();
        self.product(&det, |a, b| a && b != Some(true), true)
    }

    pub fn is_subset_of(&self, other: &SliceAutomaton) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_equivalent(&self, other: &SliceAutomaton) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// All accepted words of length at most `max_len`.
    pub fn enumerate(&self, max_len: usize) -> BTreeSet<Vec<UnitSlice>> {
        let succ = self.successors();
        let mut out = BTreeSet::new();
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(self.start, Vec::new())];
        while let Some((q, word)) = stack.pop() {
            if self.accepting.contains(&q) {
                out.insert(word.iter().map(|&a| self.symbols[a].clone()).collect());
            }
            if word.len() < max_len {
                for &(a, r) in &succ[q] {
                    let mut w = word.clone();
                    w.push(a);
                    stack.push((r, w));
                }
            }
        }
        out
    }
}
