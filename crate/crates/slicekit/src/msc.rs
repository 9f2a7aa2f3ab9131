//! Message sequence charts, their composition, message sequence graphs and
//! their translation into slice graphs.

use std::collections::{BTreeMap, BTreeSet};

use crate::dag::{Dag, PartialOrder};
use crate::error::{Error, Result};
use crate::saturation::for_each_closed_walk;
use crate::slice::{End, Event, Slice, UnitSlice, FINAL_EVENT, INITIAL_EVENT};
use crate::slice_graph::SliceGraph;

/// What an MSC event does on its instance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Action {
    Internal(String),
    Send(String),
    Receive(String),
}

/// An event as written in input: its instance, its position on the
/// instance and an optional message id pairing a send with a receive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventSpec {
    pub instance: String,
    pub seq: u64,
    pub action: Action,
    pub message: Option<String>,
}

/// An MSC event: instance index and label (`i!j`, `i?j` or an internal name).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MscEvent {
    pub instance: usize,
    pub label: Event,
}

/// A validated message sequence chart over a sorted instance set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Msc {
    instances: Vec<String>,
    events: Vec<MscEvent>,
    /// Send and receive event indices of each message.
    messages: Vec<(usize, usize)>,
    order: PartialOrder,
}

impl Msc {
    /// Builds the order from instance lines and messages and checks the
    /// chart axioms: linear instances, matching send/receive counts, FIFO
    /// pairing and cross-instance covering pairs being messages.
    pub fn new(instances: impl IntoIterator<Item = String>, specs: Vec<EventSpec>) -> Result<Msc> {
        let instances: Vec<String> = instances
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let idx = |name: &str| {
            instances
                .binary_search_by(|x| x.as_str().cmp(name))
                .map_err(|_| Error::InvalidMsc(format!("unknown instance {name}")))
        };
        let mut specs = specs;
        specs.sort_by_key(|a| (idx(&a.instance).ok(), a.seq));
        let mut events = Vec::with_capacity(specs.len());
        let mut internal_owner: BTreeMap<&str, usize> = BTreeMap::new();
        for s in &specs {
            let i = idx(&s.instance)?;
            let label = match &s.action {
                Action::Internal(name) => {
                    if name.contains('!') || name.contains('?') || name.is_empty() {
                        return Err(Error::InvalidMsc(format!(
                            "bad internal action name {name:?}"
                        )));
                    }
                    if *internal_owner.entry(name).or_insert(i) != i {
                        return Err(Error::InvalidMsc(format!(
                            "internal action {name} occurs on two instances"
                        )));
                    }
                    name.clone()
                }
                Action::Send(j) | Action::Receive(j) => {
                    if idx(j)? == i {
                        return Err(Error::InvalidMsc(format!("{} talks to itself", s.instance)));
                    }
                    let sym = if matches!(s.action, Action::Send(_)) {
                        '!'
                    } else {
                        '?'
                    };
                    format!("{}{sym}{j}", s.instance)
                }
            };
            events.push(MscEvent { instance: i, label });
        }
        for w in specs.windows(2) {
            if w[0].instance == w[1].instance && w[0].seq == w[1].seq {
                return Err(Error::InvalidMsc(format!(
                    "instance {} has two events at position {}",
                    w[0].instance, w[0].seq
                )));
            }
        }
        let mut messages = Vec::new();
        for (i, from) in instances.iter().enumerate() {
            for (j, to) in instances.iter().enumerate() {
                if i == j {
                    continue;
                }
                let sends: Vec<usize> = (0..specs.len())
                    .filter(|&v| {
                        events[v].instance == i && specs[v].action == Action::Send(to.clone())
                    })
                    .collect();
                let recvs: Vec<usize> = (0..specs.len())
                    .filter(|&v| {
                        events[v].instance == j && specs[v].action == Action::Receive(from.clone())
                    })
                    .collect();
                if sends.len() != recvs.len() {
                    return Err(Error::InvalidMsc(format!(
                        "{} sends from {from} to {to} but {} receives",
                        sends.len(),
                        recvs.len()
                    )));
                }
                for (&s, &r) in sends.iter().zip(&recvs) {
                    if specs[s].message != specs[r].message {
                        return Err(Error::InvalidMsc(format!(
                            "messages from {from} to {to} are not received in FIFO order"
                        )));
                    }
                    messages.push((s, r));
                }
            }
        }
        messages.sort();
        let labels: Vec<Event> = events.iter().map(|e| e.label.clone()).collect();
        let mut edges: Vec<(usize, usize)> = (1..events.len())
            .filter(|&v| events[v - 1].instance == events[v].instance)
            .map(|v| (v - 1, v))
            .collect();
        edges.extend(messages.iter().copied());
        let dag = Dag::new(labels, edges)
            .map_err(|_| Error::InvalidMsc("messages form a cycle with instance lines".into()))?;
        Ok(Msc {
            instances,
            events,
            messages,
            order: dag.transitive_closure(),
        })
    }

    pub fn instances(&self) -> &[String] {
        &self.instances
    }

    pub fn events(&self) -> &[MscEvent] {
        &self.events
    }

    pub fn messages(&self) -> &[(usize, usize)] {
        &self.messages
    }

    pub fn order(&self) -> &PartialOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Places `next` after `self`, ordering events of a common instance.
    pub fn compose(&self, next: &Msc) -> Result<Msc> {
        if self.instances != next.instances {
            return Err(Error::InstanceMismatch);
        }
        let off = self.len();
        let mut events = self.events.clone();
        events.extend(next.events.iter().cloned());
        let mut edges = self.order.pairs();
        edges.extend(
            next.order
                .pairs()
                .into_iter()
                .map(|(a, b)| (a + off, b + off)),
        );
        for (a, ea) in self.events.iter().enumerate() {
            for (b, eb) in next.events.iter().enumerate() {
                if ea.instance == eb.instance {
                    edges.push((a, b + off));
                }
            }
        }
        let mut messages = self.messages.clone();
        messages.extend(next.messages.iter().map(|&(s, r)| (s + off, r + off)));
        let labels = events.iter().map(|e| e.label.clone()).collect();
        let dag = Dag::new(labels, edges).expect("composition of orders is acyclic");
        Ok(Msc {
            instances: self.instances.clone(),
            events,
            messages,
            order: dag.transitive_closure(),
        })
    }

    /// Edges `i -> j` between instance indices where `i` sends to `j`.
    pub fn connectivity_graph(&self) -> BTreeSet<(usize, usize)> {
        self.messages
            .iter()
            .map(|&(s, r)| (self.events[s].instance, self.events[r].instance))
            .collect()
    }

    /// Instances carrying at least one event.
    pub fn active_instances(&self) -> BTreeSet<usize> {
        self.events.iter().map(|e| e.instance).collect()
    }

    /// Whether the connectivity graph restricted to active instances is
    /// strongly connected.
    pub fn is_communication_connected(&self) -> bool {
        let active: Vec<usize> = self.active_instances().into_iter().collect();
        let Some(&root) = active.first() else {
            return true;
        };
        let edges = self.connectivity_graph();
        let reach = |forward: bool| {
            let mut seen = BTreeSet::from([root]);
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for &(a, b) in &edges {
                    let (from, to) = if forward { (a, b) } else { (b, a) };
                    if from == x && seen.insert(to) {
                        stack.push(to);
                    }
                }
            }
            seen.len() == active.len()
        };
        reach(true) && reach(false)
    }

    /// Unique minimal and maximal event of every active instance.
    fn instance_ends(&self) -> Result<Vec<Option<(usize, usize)>>> {
        (0..self.instances.len())
            .map(|i| {
                let on: Vec<usize> = (0..self.len())
                    .filter(|&v| self.events[v].instance == i)
                    .collect();
                if on.is_empty() {
                    return Ok(None);
                }
                let mins: Vec<usize> = on
                    .iter()
                    .copied()
                    .filter(|&v| !on.iter().any(|&u| self.order.less(u, v)))
                    .collect();
                let maxs: Vec<usize> = on
                    .iter()
                    .copied()
                    .filter(|&v| !on.iter().any(|&u| self.order.less(v, u)))
                    .collect();
                match (mins.as_slice(), maxs.as_slice()) {
                    ([a], [b]) => Ok(Some((*a, *b))),
                    _ => Err(Error::MultipleMinimal(self.instances[i].clone())),
                }
            })
            .collect()
    }

    /// The Hasse diagram of the chart with one in- and one out-port per
    /// instance: silent instances pass through, active ones enter at their
    /// minimal event and leave at their maximal event.
    pub fn to_slice(&self) -> Result<Slice> {
        let ends = self.instance_ends()?;
        let mut edges: Vec<(End, End)> = self
            .order
            .hasse()
            .edges()
            .iter()
            .map(|&(a, b)| (End::Center(a), End::Center(b)))
            .collect();
        for (i, e) in ends.iter().enumerate() {
            match e {
                None => edges.push((End::In(i), End::Out(i))),
                Some((lo, hi)) => {
                    edges.push((End::In(i), End::Center(*lo)));
                    edges.push((End::Center(*hi), End::Out(i)));
                }
            }
        }
        let w = self.instances.len();
        Ok(Slice {
            in_width: w,
            out_width: w,
            center: self.events.iter().map(|e| e.label.clone()).collect(),
            edges,
        })
    }
}

/// A message sequence graph: MSC-labeled vertices, loops allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Msg {
    pub labels: Vec<Msc>,
    pub edges: BTreeSet<(usize, usize)>,
    pub initial: BTreeSet<usize>,
    pub finals: BTreeSet<usize>,
}

impl Msg {
    /// Checks ranges and a common instance set.
    pub fn new(
        labels: Vec<Msc>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        initial: impl IntoIterator<Item = usize>,
        finals: impl IntoIterator<Item = usize>,
    ) -> Result<Msg> {
        let g = Msg {
            edges: edges.into_iter().collect(),
            initial: initial.into_iter().collect(),
            finals: finals.into_iter().collect(),
            labels,
        };
        let n = g.labels.len();
        let bad = g.edges.iter().any(|&(u, v)| u >= n || v >= n)
            || g.initial.iter().chain(&g.finals).any(|&v| v >= n);
        if bad {
            return Err(Error::InvalidGraph("vertex id out of range".into()));
        }
        if g.labels
            .windows(2)
            .any(|w| w[0].instances() != w[1].instances())
        {
            return Err(Error::InstanceMismatch);
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn instances(&self) -> &[String] {
        self.labels.first().map(Msc::instances).unwrap_or(&[])
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.len()];
        for &(u, v) in &self.edges {
            succ[u].push(v);
        }
        succ
    }

    /// Initial-to-final walks of at most `max_len` vertices.
    pub fn walks(&self, max_len: usize) -> Vec<Vec<usize>> {
        let succ = self.successors();
        let mut out = Vec::new();
        let mut layer: Vec<Vec<usize>> = self.initial.iter().map(|&v| vec![v]).collect();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in layer {
                let last = *w.last().unwrap();
                if self.finals.contains(&last) {
                    out.push(w.clone());
                }
                for &v in &succ[last] {
                    let mut w2 = w.clone();
                    w2.push(v);
                    next.push(w2);
                }
            }
            layer = next;
        }
        out
    }

    /// The composition of the charts along a walk.
    pub fn compose_walk(&self, walk: &[usize]) -> Result<Msc> {
        let (first, rest) = walk
            .split_first()
            .ok_or_else(|| Error::InvalidGraph("empty walk".into()))?;
        rest.iter()
            .try_fold(self.labels[*first].clone(), |acc, &v| {
                acc.compose(&self.labels[v])
            })
    }

    /// Bounded local synchronization: for every loop of at most
    /// `max_cycle_len` vertices, the communication graph of the composed
    /// charts is strongly connected on its active instances.
    pub fn is_locally_synchronized(&self, max_cycle_len: usize) -> bool {
        let succ = self.successors();
        for_each_closed_walk(
            self.len(),
            |v| succ[v].as_slice(),
            max_cycle_len,
            |walk| {
                self.compose_walk(walk)
                    .map(|m| m.is_communication_connected())
                    .unwrap_or(false)
            },
        )
    }
}

/// The slice graph of an MSG. Each chart's slice is expanded into a chain
/// of unit slices; empty charts are bypassed; an `ι` vertex opens and an
/// `ε` vertex closes every instance.
pub fn msg_to_slice_graph(g: &Msg) -> Result<SliceGraph> {
    let w = g.instances().len();
    if w == 0 {
        return Err(Error::InvalidMsc(
            "an MSG needs at least one instance".into(),
        ));
    }
    let mut labels = vec![
        UnitSlice::initial(INITIAL_EVENT, w),
        UnitSlice::terminal(FINAL_EVENT, w),
    ];
    let mut edges = Vec::new();
    let mut span: Vec<Option<(usize, usize)>> = Vec::with_capacity(g.len());
    for m in &g.labels {
        if m.is_empty() {
            span.push(None);
            continue;
        }
        let units = m.to_slice()?.unit_decomposition()?;
        let first = labels.len();
        for (k, u) in units.into_iter().enumerate() {
            if k > 0 {
                edges.push((labels.len() - 1, labels.len()));
            }
            labels.push(u);
        }
        span.push(Some((first, labels.len() - 1)));
    }
    let succ = g.successors();
    // Nonempty charts and finality reachable from `v` through empty charts.
    let closure = |v: usize| -> (BTreeSet<usize>, bool) {
        let mut seen = BTreeSet::from([v]);
        let mut stack = vec![v];
        let mut hits = BTreeSet::new();
        let mut final_hit = false;
        while let Some(x) = stack.pop() {
            if span[x].is_some() {
                hits.insert(x);
                continue;
            }
            final_hit |= g.finals.contains(&x);
            for &y in &succ[x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        (hits, final_hit)
    };
    for &v in &g.initial {
        let (hits, fin) = closure(v);
        edges.extend(hits.iter().map(|&x| (0, span[x].unwrap().0)));
        if fin {
            edges.push((0, 1));
        }
    }
    for u in 0..g.len() {
        let Some((_, last)) = span[u] else { continue };
        if g.finals.contains(&u) {
            edges.push((last, 1));
        }
        for &v in &succ[u] {
            let (hits, fin) = closure(v);
            edges.extend(hits.iter().map(|&x| (last, span[x].unwrap().0)));
            if fin {
                edges.push((last, 1));
            }
        }
    }
    Ok(SliceGraph::new(labels, edges, [0], [1])?.trim())
}

/// The order of a composed slice DAG restricted to its inner vertices.
pub fn inner_order(dag: &Dag) -> PartialOrder {
    dag.transitive_closure()
        .restrict(|v| dag.labels()[v] != INITIAL_EVENT && dag.labels()[v] != FINAL_EVENT)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(instance: &str, seq: u64, action: Action, message: Option<&str>) -> EventSpec {
        EventSpec {
            instance: instance.into(),
            seq,
            action,
            message: message.map(str::to_string),
        }
    }

    fn ping_pong() -> Msc {
        Msc::new(
            ["i".to_string(), "j".to_string()],
            vec![
                ev("i", 0, Action::Send("j".into()), Some("m1")),
                ev("j", 0, Action::Receive("i".into()), Some("m1")),
                ev("j", 1, Action::Send("i".into()), Some("m2")),
                ev("i", 1, Action::Receive("j".into()), Some("m2")),
            ],
        )
        .unwrap()
    }

    fn one_way() -> Msc {
        Msc::new(
            ["i".to_string(), "j".to_string()],
            vec![
                ev("i", 0, Action::Send("j".into()), None),
                ev("j", 0, Action::Receive("i".into()), None),
            ],
        )
        .unwrap()
    }

    #[test]
    fn axioms_are_checked() {
        let unmatched = Msc::new(
            ["i".to_string(), "j".to_string()],
            vec![ev("i", 0, Action::Send("j".into()), None)],
        );
        assert!(matches!(unmatched, Err(Error::InvalidMsc(_))));
        let crossed = Msc::new(
            ["i".to_string(), "j".to_string()],
            vec![
                ev("i", 0, Action::Send("j".into()), Some("x")),
                ev("i", 1, Action::Send("j".into()), Some("y")),
                ev("j", 0, Action::Receive("i".into()), Some("y")),
                ev("j", 1, Action::Receive("i".into()), Some("x")),
            ],
        );
        assert!(matches!(crossed, Err(Error::InvalidMsc(_))));
        let m = ping_pong();
        assert_eq!(m.events()[0].label, "i!j");
        assert_eq!(m.order().pairs().len(), 6);
    }

    #[test]
    fn composition() {
        let empty = Msc::new(["i".to_string(), "j".to_string()], vec![]).unwrap();
        let m = ping_pong();
        assert_eq!(m.compose(&empty).unwrap(), m);
        let mm = m.compose(&m).unwrap();
        assert_eq!(mm.len(), 8);
        assert!(mm.order().less(3, 4));
        let other = Msc::new(["k".to_string()], vec![]).unwrap();
        assert_eq!(m.compose(&other), Err(Error::InstanceMismatch));
    }

    #[test]
    fn slices_of_charts() {
        let empty = Msc::new(["i".to_string(), "j".to_string()], vec![]).unwrap();
        let s = empty.to_slice().unwrap();
        assert!(s.center.is_empty());
        assert_eq!(
            s.edges,
            vec![(End::In(0), End::Out(0)), (End::In(1), End::Out(1))]
        );
        let s = one_way().to_slice().unwrap();
        assert_eq!(s.center.len(), 2);
        assert!(s.edges.contains(&(End::Center(0), End::Center(1))));
        let units = s.unit_decomposition().unwrap();
        assert!(Slice::compose_units(&units).unwrap().is_isomorphic(&s));
    }

    #[test]
    fn synchronization_and_image() {
        let loop_of = |m: Msc| Msg::new(vec![m], [(0, 0)], [0], [0]).unwrap();
        let pp = loop_of(ping_pong());
        assert!(pp.is_locally_synchronized(4));
        let ow = loop_of(one_way());
        assert!(!ow.is_locally_synchronized(4));
        let sg = msg_to_slice_graph(&pp).unwrap();
        assert!(crate::saturation::is_loop_connected_bounded(&sg, 8));
        assert!(!crate::saturation::is_loop_connected_bounded(
            &msg_to_slice_graph(&ow).unwrap(),
            8
        ));
        for walk in pp.walks(3) {
            let m = pp.compose_walk(&walk).unwrap();
            let n = 2 + 4 * walk.len();
            let dags = sg.enumerate_graph_language(n);
            assert!(dags
                .values()
                .any(|d| inner_order(d).is_isomorphic(m.order())));
        }
    }
}
