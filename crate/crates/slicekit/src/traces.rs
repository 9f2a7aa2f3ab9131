//! Mazurkiewicz traces as slice languages: each event becomes a unit slice
//! whose frontier wires are the dependent pairs of events.

use std::collections::BTreeSet;

use crate::automaton::SliceAutomaton;
use crate::dag::{Dag, PartialOrder};
use crate::error::{Error, Result};
use crate::slice::{Event, Link, UnitSlice, FINAL_EVENT, INITIAL_EVENT};
use crate::slice_graph::SliceGraph;

/// Events without `ι`/`ε` and a symmetric irreflexive independence relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceAlphabet {
    events: BTreeSet<Event>,
    independence: BTreeSet<(Event, Event)>,
}

fn is_reserved(e: &str) -> bool {
    e == INITIAL_EVENT || e == FINAL_EVENT
}

impl IndependenceAlphabet {
    /// Symmetrizes `pairs`; rejects reflexive pairs, reserved events and
    /// pairs over unknown events.
    pub fn new(
        events: impl IntoIterator<Item = Event>,
        pairs: impl IntoIterator<Item = (Event, Event)>,
    ) -> Result<Self> {
        let events: BTreeSet<Event> = events.into_iter().collect();
        if let Some(e) = events.iter().find(|e| is_reserved(e)) {
            return Err(Error::AlphabetMismatch(format!("{e} is reserved")));
        }
        let mut independence = BTreeSet::new();
        for (a, b) in pairs {
            if a == b {
                return Err(Error::AlphabetMismatch(format!(
                    "{a} cannot be independent of itself"
                )));
            }
            for e in [&a, &b] {
                if !events.contains(e) {
                    return Err(Error::AlphabetMismatch(format!("unknown event {e}")));
                }
            }
            independence.insert((b.clone(), a.clone()));
            independence.insert((a, b));
        }
        Ok(IndependenceAlphabet {
            events,
            independence,
        })
    }

    pub fn events(&self) -> &BTreeSet<Event> {
        &self.events
    }

    pub fn independent(&self, a: &str, b: &str) -> bool {
        self.independence.contains(&(a.to_string(), b.to_string()))
    }

    /// Sorted unordered dependent pairs `(a, b)` with `a <= b`; these index
    /// the frontier wires.
    pub fn dependence(&self) -> Vec<(Event, Event)> {
        let mut out = Vec::new();
        for a in &self.events {
            for b in self.events.range(a.clone()..) {
                if !self.independent(a, b) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    fn check_event(&self, a: &str) -> Result<()> {
        if is_reserved(a) || self.events.contains(a) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!("unknown event {a}")))
        }
    }

    /// The slice of an event: it consumes and produces the wires it belongs
    /// to and passes every other wire straight through.
    pub fn event_to_slice(&self, a: &str) -> Result<UnitSlice> {
        self.check_event(a)?;
        let wires = self.dependence();
        let w = wires.len();
        if a == INITIAL_EVENT {
            return Ok(UnitSlice::initial(INITIAL_EVENT, w));
        }
        if a == FINAL_EVENT {
            return Ok(UnitSlice::terminal(FINAL_EVENT, w));
        }
        let inputs = wires
            .iter()
            .enumerate()
            .map(|(d, (b, c))| {
                if a == b || a == c {
                    Link::Center
                } else {
                    Link::Out(d)
                }
            })
            .collect();
        UnitSlice::new(a, inputs, w)
    }

    fn dependent(&self, a: &str, b: &str) -> bool {
        is_reserved(a) || is_reserved(b) || !self.independent(a, b)
    }

    /// Checks the `ι ... ε` discipline and the alphabet.
    pub fn check_word(&self, word: &[Event]) -> Result<()> {
        let n = word.len();
        if n < 2 || word[0] != INITIAL_EVENT || word[n - 1] != FINAL_EVENT {
            return Err(Error::IllegalWord(
                "a word starts with ι and ends with ε".into(),
            ));
        }
        if word[1..n - 1].iter().any(|e| is_reserved(e)) {
            return Err(Error::IllegalWord("ι and ε occur only at the ends".into()));
        }
        word.iter().try_for_each(|e| self.check_event(e))
    }

    /// Edges `i -> j` for `i < j` with dependent events.
    pub fn dependence_dag(&self, word: &[Event]) -> Result<Dag> {
        self.check_word(word)?;
        let mut edges = Vec::new();
        for i in 0..word.len() {
            for j in i + 1..word.len() {
                if self.dependent(&word[i], &word[j]) {
                    edges.push((i, j));
                }
            }
        }
        Dag::new(word.to_vec(), edges)
    }

    pub fn po_of_word(&self, word: &[Event]) -> Result<PartialOrder> {
        Ok(self.dependence_dag(word)?.transitive_closure())
    }

    pub fn word_to_slices(&self, word: &[Event]) -> Result<Vec<UnitSlice>> {
        self.check_word(word)?;
        word.iter().map(|e| self.event_to_slice(e)).collect()
    }
}

/// A classical automaton over event names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventAutomaton {
    pub num_states: usize,
    pub start: usize,
    pub accepting: BTreeSet<usize>,
    pub transitions: Vec<(usize, Event, usize)>,
}

impl EventAutomaton {
    /// Prefixes `ι` from a fresh start state and suffixes `ε` into a fresh
    /// accepting state.
    pub fn wrapped(&self) -> EventAutomaton {
        let start = self.num_states;
        let fin = self.num_states + 1;
        let mut transitions = self.transitions.clone();
        transitions.push((start, INITIAL_EVENT.to_string(), self.start));
        transitions.extend(
            self.accepting
                .iter()
                .map(|&q| (q, FINAL_EVENT.to_string(), fin)),
        );
        EventAutomaton {
            num_states: self.num_states + 2,
            start,
            accepting: BTreeSet::from([fin]),
            transitions,
        }
    }

    /// Whether some transition is labeled by a reserved event.
    pub fn has_markers(&self) -> bool {
        self.transitions.iter().any(|t| is_reserved(&t.1))
    }

    /// Accepted words of at most `max_len` events.
    pub fn enumerate(&self, max_len: usize) -> BTreeSet<Vec<Event>> {
        let mut out = BTreeSet::new();
        let mut frontier = vec![(self.start, Vec::<Event>::new())];
        for len in 0..=max_len {
            let mut next = Vec::new();
            for (q, w) in frontier {
                if self.accepting.contains(&q) {
                    out.insert(w.clone());
                }
                if len < max_len {
                    for (p, e, r) in &self.transitions {
                        if *p == q {
                            let mut w2 = w.clone();
                            w2.push(e.clone());
                            next.push((*r, w2));
                        }
                    }
                }
            }
            next.sort();
            next.dedup();
            frontier = next;
        }
        out
    }
}

/// Maps every transition label to its slice and presents the image as a
/// slice graph with the same order language.
pub fn traces_to_slice_graph(a: &EventAutomaton, ia: &IndependenceAlphabet) -> Result<SliceGraph> {
    let transitions = a
        .transitions
        .iter()
        .map(|(p, e, q)| Ok((*p, ia.event_to_slice(e)?, *q)))
        .collect::<Result<Vec<_>>>()?;
    let sa = SliceAutomaton::new(
        a.num_states,
        a.start,
        a.accepting.iter().copied(),
        transitions,
    );
    SliceGraph::from_automaton(&sa).map_err(|e| match e {
        Error::IllegalSliceString(m) => Error::IllegalWord(m),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(independent: bool) -> IndependenceAlphabet {
        let pairs = if independent {
            vec![("a".to_string(), "b".to_string())]
        } else {
            vec![]
        };
        IndependenceAlphabet::new(["a".to_string(), "b".to_string()], pairs).unwrap()
    }

    fn word(s: &str) -> Vec<Event> {
        s.split(' ').map(str::to_string).collect()
    }

    #[test]
    fn word_orders() {
        let ia = ab(true);
        let p = ia.po_of_word(&word("ι a b ε")).unwrap();
        assert!(!p.less(1, 2) && !p.less(2, 1));
        assert!(p.is_isomorphic(&ia.po_of_word(&word("ι b a ε")).unwrap()));
        let q = ab(false).po_of_word(&word("ι a b ε")).unwrap();
        assert!(q.less(1, 2));
        assert!(matches!(
            ia.po_of_word(&word("a b ε")),
            Err(Error::IllegalWord(_))
        ));
    }

    #[test]
    fn event_slices() {
        let ia = ab(true);
        assert_eq!(ia.dependence().len(), 2);
        let s = ia.event_to_slice("a").unwrap();
        assert_eq!(s.inputs(), &[Link::Center, Link::Out(1)]);
        assert_eq!(s.center_outputs(), vec![0]);
        assert_eq!(ia.event_to_slice("ι").unwrap().out_width(), 2);
        let dep = ab(false).event_to_slice("b").unwrap();
        assert_eq!(dep.width(), 3);
        assert_eq!(dep.pass_throughs().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn composed_slices_induce_trace_order() {
        let ia = ab(false);
        let w = word("ι a b a ε");
        let s = ia.word_to_slices(&w).unwrap();
        let h = crate::slice::Slice::compose_units(&s)
            .unwrap()
            .to_dag()
            .unwrap();
        assert!(h
            .transitive_closure()
            .is_isomorphic(&ia.po_of_word(&w).unwrap()));
    }

    #[test]
    fn automaton_image() {
        let a = EventAutomaton {
            num_states: 1,
            start: 0,
            accepting: BTreeSet::from([0]),
            transitions: vec![(0, "a".into(), 0), (0, "b".into(), 0)],
        };
        let sg = traces_to_slice_graph(&a.wrapped(), &ab(true)).unwrap();
        assert_eq!(sg.len(), 4);
        assert_eq!(a.wrapped().enumerate(4).len(), 1 + 2 + 4);
        assert!(matches!(
            traces_to_slice_graph(&a, &ab(true)),
            Err(Error::IllegalWord(_))
        ));
    }
}
