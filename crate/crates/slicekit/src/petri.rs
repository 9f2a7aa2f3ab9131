//! Bounded p/t-nets: firing, processes with their causal orders and
//! executions, interlaced flows, and slice graph filters keeping exactly
//! the Hasse diagrams of executions or causal orders of a net.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::rc::Rc;

use crate::dag::{Dag, PartialOrder};
use crate::error::{Error, Result};
use crate::ops;
use crate::reduction::is_hasse_generator;
use crate::slice::{Event, UnitSlice, FINAL_EVENT, INITIAL_EVENT};
use crate::slice_graph::{po_set, PoSet, SliceGraph};
use crate::universe::build_bounded_hdg;

/// A place: initial tokens and the tokens each transition takes and puts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Place {
    pub initial: u32,
    pub take: BTreeMap<Event, u32>,
    pub put: BTreeMap<Event, u32>,
}

impl Place {
    pub fn takes(&self, t: &str) -> u32 {
        self.take.get(t).copied().unwrap_or(0)
    }

    pub fn puts(&self, t: &str) -> u32 {
        self.put.get(t).copied().unwrap_or(0)
    }
}

pub type Marking = Vec<u32>;

/// A p/t-net over a sorted transition set; places form a multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtNet {
    transitions: Vec<Event>,
    places: Vec<Place>,
}

/// Which order language of a net is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    Execution,
    Causal,
}

fn is_reserved(e: &str) -> bool {
    e == INITIAL_EVENT || e == FINAL_EVENT
}

impl PtNet {
    /// Every transition must take from some place and put into some place.
    pub fn new(transitions: impl IntoIterator<Item = Event>, places: Vec<Place>) -> Result<PtNet> {
        let transitions: Vec<Event> = transitions
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if let Some(t) = transitions.iter().find(|t| is_reserved(t)) {
            return Err(Error::InvalidNet(format!("{t} is reserved")));
        }
        for p in &places {
            if let Some(t) = p
                .take
                .keys()
                .chain(p.put.keys())
                .find(|t| transitions.binary_search(t).is_err())
            {
                return Err(Error::InvalidNet(format!(
                    "place refers to unknown transition {t}"
                )));
            }
        }
        for t in &transitions {
            if !places.iter().any(|p| p.takes(t) > 0) || !places.iter().any(|p| p.puts(t) > 0) {
                return Err(Error::InvalidNet(format!(
                    "transition {t} must take from some place and put into some place"
                )));
            }
        }
        Ok(PtNet {
            transitions,
            places,
        })
    }

    pub fn transitions(&self) -> &[Event] {
        &self.transitions
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn has_transition(&self, t: &str) -> bool {
        self.transitions
            .binary_search_by(|x| x.as_str().cmp(t))
            .is_ok()
    }

    pub fn initial_marking(&self) -> Marking {
        self.places.iter().map(|p| p.initial).collect()
    }

    fn check_transition(&self, t: &str) -> Result<()> {
        if self.has_transition(t) {
            Ok(())
        } else {
            Err(Error::InvalidNet(format!("unknown transition {t}")))
        }
    }

    pub fn enabled(&self, m: &[u32], t: &str) -> Result<bool> {
        self.check_transition(t)?;
        Ok(self.places.iter().zip(m).all(|(p, &x)| x >= p.takes(t)))
    }

    pub fn fire(&self, m: &[u32], t: &str) -> Result<Marking> {
        if !self.enabled(m, t)? {
            return Err(Error::NotEnabled(t.to_string()));
        }
        Ok(self
            .places
            .iter()
            .zip(m)
            .map(|(p, &x)| x - p.takes(t) + p.puts(t))
            .collect())
    }

    /// Explores reachable markings breadth first for at most `depth`
    /// firings; false as soon as some place holds more than `k` tokens.
    /// Markings bounded by `k` are finitely many, so the search always
    /// reaches a fixpoint or a violation.
    pub fn is_k_safe_bounded(&self, k: u32, depth: usize) -> bool {
        let m0 = self.initial_marking();
        if m0.iter().any(|&x| x > k) {
            return false;
        }
        let mut seen = BTreeSet::from([m0.clone()]);
        let mut layer = vec![m0];
        for _ in 0..depth {
            let mut next = Vec::new();
            for m in &layer {
                for t in &self.transitions {
                    if let Ok(m2) = self.fire(m, t) {
                        if m2.iter().any(|&x| x > k) {
                            return false;
                        }
                        if seen.insert(m2.clone()) {
                            next.push(m2);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        true
    }

    /// The largest token count of any place over the reachable markings,
    /// or `NotKSafe` when more than `limit` markings are reachable.
    pub fn token_bound(&self, limit: usize) -> Result<u32> {
        let m0 = self.initial_marking();
        let mut best = m0.iter().copied().max().unwrap_or(0);
        let mut seen = BTreeSet::from([m0.clone()]);
        let mut queue = VecDeque::from([m0]);
        while let Some(m) = queue.pop_front() {
            for t in &self.transitions {
                if let Ok(m2) = self.fire(&m, t) {
                    best = best.max(m2.iter().copied().max().unwrap_or(0));
                    if seen.insert(m2.clone()) {
                        if seen.len() > limit {
                            return Err(Error::NotKSafe(best));
                        }
                        queue.push_back(m2);
                    }
                }
            }
        }
        Ok(best)
    }
}

/// A condition of a process: a token of `place` produced by event `pre`
/// and consumed by event `post`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    pub place: usize,
    pub pre: usize,
    pub post: usize,
}

/// A process: event 0 is `ι`, the last event is `ε`, conditions are
/// unbranched by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetProcess {
    pub events: Vec<Event>,
    pub conditions: Vec<Condition>,
}

impl NetProcess {
    /// The order `F*` restricted to events.
    pub fn causal_order(&self) -> PartialOrder {
        let edges: BTreeSet<(usize, usize)> =
            self.conditions.iter().map(|c| (c.pre, c.post)).collect();
        Dag::new(self.events.clone(), edges.into_iter().collect())
            .expect("conditions point forward")
            .transitive_closure()
    }

    /// Checks the counting conditions against `net`.
    pub fn is_valid(&self, net: &PtNet) -> bool {
        let n = self.events.len();
        if n < 2 || self.events[0] != INITIAL_EVENT || self.events[n - 1] != FINAL_EVENT {
            return false;
        }
        let count = |v: usize, p: usize, incoming: bool| {
            self.conditions
                .iter()
                .filter(|c| c.place == p && if incoming { c.post == v } else { c.pre == v })
                .count() as u32
        };
        (0..net.places.len()).all(|p| {
            count(0, p, false) == net.places[p].initial
                && (1..n - 1).all(|v| {
                    let t = &self.events[v];
                    count(v, p, true) == net.places[p].takes(t)
                        && count(v, p, false) == net.places[p].puts(t)
                })
        })
    }
}

/// Canonical key of a partial process; conditions sharing place, producer
/// and consumer are merged into one counted vertex.
fn process_key(
    events: &[Event],
    conds: &[(usize, usize, Option<usize>)],
) -> crate::canon::CanonicalForm<Event> {
    let mut groups: BTreeMap<(usize, usize, Option<usize>), usize> = BTreeMap::new();
    for &c in conds {
        *groups.entry(c).or_default() += 1;
    }
    let mut labels: Vec<Event> = events.to_vec();
    let mut edges = Vec::new();
    for (&(place, pre, post), &count) in &groups {
        let g = labels.len();
        labels.push(format!("#{place}:{count}:{}", post.is_some()));
        edges.push((pre, g));
        if let Some(q) = post {
            edges.push((g, q));
        }
    }
    crate::canon::canonical_form(&labels, &edges).0
}

type PartialProcess = (Vec<Event>, Vec<(usize, usize, Option<usize>)>);

/// Ways to take `k` open conditions of `place`, one representative per
/// producer multiset.
fn consumption_choices(
    conds: &[(usize, usize, Option<usize>)],
    place: usize,
    k: u32,
) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, c) in conds.iter().enumerate() {
        if c.0 == place && c.2.is_none() {
            groups.entry(c.1).or_default().push(i);
        }
    }
    let groups: Vec<Vec<usize>> = groups.into_values().collect();
    let mut out = Vec::new();
    fn rec(
        groups: &[Vec<usize>],
        g: usize,
        left: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        if g == groups.len() {
            return;
        }
        for take in (0..=left.min(groups[g].len())).rev() {
            cur.extend_from_slice(&groups[g][..take]);
            rec(groups, g + 1, left - take, cur, out);
            cur.truncate(cur.len() - take);
        }
    }
    rec(&groups, 0, k as usize, &mut Vec::new(), &mut out);
    out
}

/// All processes with at most `max_events` transition occurrences, up to
/// isomorphism, by token-individualized unfolding.
pub fn enumerate_processes(net: &PtNet, max_events: usize) -> Vec<NetProcess> {
    let mut conds = Vec::new();
    for (p, place) in net.places.iter().enumerate() {
        conds.extend((0..place.initial).map(|_| (p, 0, None)));
    }
    let mut layer: Vec<PartialProcess> = vec![(vec![INITIAL_EVENT.to_string()], conds)];
    let mut out = Vec::new();
    for depth in 0..=max_events {
        for (events, conds) in &layer {
            let e = events.len();
            let mut events = events.clone();
            events.push(FINAL_EVENT.to_string());
            let conditions = conds
                .iter()
                .map(|&(place, pre, post)| Condition {
                    place,
                    pre,
                    post: post.unwrap_or(e),
                })
                .collect();
            out.push(NetProcess { events, conditions });
        }
        if depth == max_events {
            break;
        }
        let mut next: BTreeMap<crate::canon::CanonicalForm<Event>, PartialProcess> =
            BTreeMap::new();
        for (events, conds) in &layer {
            let e = events.len();
            for t in &net.transitions {
                let mut options: Vec<Vec<usize>> = vec![Vec::new()];
                for (p, place) in net.places.iter().enumerate() {
                    let choices = consumption_choices(conds, p, place.takes(t));
                    options = options
                        .iter()
                        .flat_map(|o| {
                            choices.iter().map(move |c| {
                                let mut o = o.clone();
                                o.extend_from_slice(c);
                                o
                            })
                        })
                        .collect();
                }
                for chosen in options {
                    let mut conds2 = conds.clone();
                    for &i in &chosen {
                        conds2[i].2 = Some(e);
                    }
                    for (p, place) in net.places.iter().enumerate() {
                        conds2.extend((0..place.puts(t)).map(|_| (p, e, None)));
                    }
                    let mut events2 = events.clone();
                    events2.push(t.clone());
                    next.entry(process_key(&events2, &conds2))
                        .or_insert((events2, conds2));
                }
            }
        }
        layer = next.into_values().collect();
    }
    out
}

/// Causal orders of all processes with at most `max_events` occurrences.
pub fn causal_orders(net: &PtNet, max_events: usize) -> PoSet {
    let orders: Vec<PartialOrder> = enumerate_processes(net, max_events)
        .iter()
        .map(NetProcess::causal_order)
        .collect();
    orders.into_iter().map(|p| (p.canonical(), p)).collect()
}

/// All sequentializations of `po`: orders on the same elements containing
/// its relation.
pub fn executions_of(po: &PartialOrder) -> PoSet {
    let mut out: PoSet = BTreeMap::from([(po.canonical(), po.clone())]);
    let mut queue = VecDeque::from([po.clone()]);
    while let Some(p) = queue.pop_front() {
        let n = p.len();
        for a in 0..n {
            for b in 0..n {
                if a != b && !p.less(a, b) && !p.less(b, a) {
                    let mut edges = p.pairs();
                    edges.push((a, b));
                    let q = Dag::new(p.labels().to_vec(), edges)
                        .expect("extending by an incomparable pair stays acyclic")
                        .transitive_closure();
                    if let std::collections::btree_map::Entry::Vacant(slot) =
                        out.entry(q.canonical())
                    {
                        slot.insert(q.clone());
                        queue.push_back(q);
                    }
                }
            }
        }
    }
    out
}

/// Whether some label-preserving bijection maps the relation of `weaker`
/// into that of `stronger`.
pub fn is_sequentialization_of(stronger: &PartialOrder, weaker: &PartialOrder) -> bool {
    let n = stronger.len();
    if weaker.len() != n {
        return false;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        k: usize,
        s: &PartialOrder,
        w: &PartialOrder,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let n = s.len();
        if k == n {
            return true;
        }
        for y in 0..n {
            if used[y] || s.labels()[y] != w.labels()[k] {
                continue;
            }
            let ok = (0..k).all(|x| {
                (!w.less(x, k) || s.less(map[x], y)) && (!w.less(k, x) || s.less(y, map[x]))
            });
            if ok {
                map[k] = y;
                used[y] = true;
                if rec(k + 1, s, w, map, used) {
                    return true;
                }
                used[y] = false;
            }
        }
        false
    }
    rec(0, stronger, weaker, &mut map, &mut used)
}

/// Components `bb`, `bf`, `pb`, `pf` of one edge.
pub type EdgeFlow = [u32; 4];
const BB: usize = 0;
const BF: usize = 1;
const PB: usize = 2;
const PF: usize = 3;

/// One interlaced flow per place, indexed by place then edge id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterlacedFlow {
    pub per_place: Vec<Vec<EdgeFlow>>,
}

impl InterlacedFlow {
    /// The three vertex equations for every place, with `ι` putting the
    /// initial marking, `ι` receiving nothing from the past and `ε`
    /// passing nothing to the future.
    pub fn is_valid(&self, h: &Dag, net: &PtNet, mode: Semantics) -> bool {
        if self.per_place.len() != net.places.len() {
            return false;
        }
        let ok = self.per_place.iter().zip(&net.places).all(|(f, place)| {
            f.len() == h.edges().len()
                && (0..h.len()).all(|v| {
                    let l = &h.labels()[v];
                    let ins: Vec<EdgeFlow> = h.in_edges(v).map(|e| f[e]).collect();
                    let outs: Vec<EdgeFlow> = h.out_edges(v).map(|e| f[e]).collect();
                    let s = |xs: &[EdgeFlow], a: usize, b: usize| {
                        xs.iter().map(|x| x[a] + x[b]).sum::<u32>()
                    };
                    let conserve = s(&ins, BF, PF) == s(&outs, PB, PF);
                    let input = l == FINAL_EVENT || s(&ins, BB, PB) == place.takes(l);
                    let produce = if l == INITIAL_EVENT {
                        place.initial
                    } else {
                        place.puts(l)
                    };
                    conserve && input && s(&outs, BB, BF) == produce
                })
        });
        ok && (mode == Semantics::Execution
            || (0..h.edges().len()).all(|e| self.per_place.iter().any(|f| f[e][BB] > 0)))
    }

    /// The values on the frontier edges of each slice of a decomposition.
    pub fn restrict(&self, cutting: &crate::dag::Cutting) -> Vec<SlicedFlow> {
        (0..cutting.order.len())
            .map(|k| {
                let side = |cut: &[usize]| -> Iface {
                    self.per_place
                        .iter()
                        .map(|f| cut.iter().map(|&e| f[e]).collect())
                        .collect()
                };
                SlicedFlow {
                    inputs: side(cutting.in_cut(k)),
                    outputs: side(&cutting.cuts[k]),
                }
            })
            .collect()
    }
}

/// Flow values per place and frontier port.
pub type Iface = Vec<Vec<EdgeFlow>>;

/// A sliced execution flow of one unit slice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlicedFlow {
    pub inputs: Iface,
    pub outputs: Iface,
}

/// All vectors of `slots` naturals summing to `total`.
fn distributions(total: u32, slots: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=total {
            cur.push(v);
            rec(total - v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if slots == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
    } else {
        rec(total, slots, &mut Vec::new(), &mut out);
    }
    out
}

/// Out-edge values of a vertex producing `produced` new tokens and passing
/// on `passed` older ones over `d` edges.
fn out_assignments(produced: u32, passed: u32, d: usize) -> Vec<Vec<EdgeFlow>> {
    let by = distributions(produced, 2 * d);
    let past = distributions(passed, 2 * d);
    let mut out = Vec::with_capacity(by.len() * past.len());
    for b in &by {
        for p in &past {
            out.push(
                (0..d)
                    .map(|i| [b[2 * i], b[2 * i + 1], p[2 * i], p[2 * i + 1]])
                    .collect(),
            );
        }
    }
    out
}

/// Searches interlaced flows of a single place along a fixed topological
/// order, memoizing on the values of the edges crossing each cut.
struct PlaceSearch<'a> {
    h: &'a Dag,
    place: &'a Place,
    order: Vec<usize>,
    pos: Vec<usize>,
    cuts: Vec<Vec<usize>>,
    memo: HashMap<(usize, Vec<EdgeFlow>), Rc<BTreeSet<u64>>>,
}

impl<'a> PlaceSearch<'a> {
    fn new(h: &'a Dag, place: &'a Place) -> Self {
        let order = h.topological_order().expect("acyclic");
        let mut pos = vec![0; h.len()];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        let cuts = (0..=order.len())
            .map(|k| {
                (0..h.edges().len())
                    .filter(|&e| pos[h.edges()[e].0] < k && pos[h.edges()[e].1] >= k)
                    .collect()
            })
            .collect();
        PlaceSearch {
            h,
            place,
            order,
            pos,
            cuts,
            memo: HashMap::new(),
        }
    }

    /// Assignments for the out-edges of `order[k]` given the cut values.
    fn moves(&self, k: usize, vals: &[EdgeFlow]) -> Option<(Vec<usize>, Vec<Vec<EdgeFlow>>)> {
        let v = self.order[k];
        let l = &self.h.labels()[v];
        let cut = &self.cuts[k];
        let val = |e: usize| {
            vals[cut
                .iter()
                .position(|&x| x == e)
                .expect("in-edge crosses the cut")]
        };
        let ins: Vec<EdgeFlow> = self.h.in_edges(v).map(val).collect();
        let consumed: u32 = ins.iter().map(|x| x[BB] + x[PB]).sum();
        let passed: u32 = ins.iter().map(|x| x[BF] + x[PF]).sum();
        if l != FINAL_EVENT && consumed != self.place.takes(l) {
            return None;
        }
        let outs: Vec<usize> = self.h.out_edges(v).collect();
        let produced = if l == INITIAL_EVENT {
            self.place.initial
        } else {
            self.place.puts(l)
        };
        if outs.is_empty() {
            return (passed == 0 && produced == 0).then(|| (outs, vec![Vec::new()]));
        }
        Some((outs.clone(), out_assignments(produced, passed, outs.len())))
    }

    fn next_cut(
        &self,
        k: usize,
        vals: &[EdgeFlow],
        outs: &[usize],
        assign: &[EdgeFlow],
    ) -> Vec<EdgeFlow> {
        let cut = &self.cuts[k];
        self.cuts[k + 1]
            .iter()
            .map(|&e| match cut.iter().position(|&x| x == e) {
                Some(i) => vals[i],
                None => {
                    assign[outs
                        .iter()
                        .position(|&x| x == e)
                        .expect("new cut edge leaves the vertex")]
                }
            })
            .collect()
    }

    fn mask_of(outs: &[usize], assign: &[EdgeFlow]) -> u64 {
        outs.iter()
            .zip(assign)
            .filter(|(_, f)| f[BB] > 0)
            .fold(0, |m, (&e, _)| m | 1 << e)
    }

    /// Masks of edges with `bb > 0` over all completions from step `k`,
    /// restricted to edges leaving vertices at position `k` or later.
    fn suffix(&mut self, k: usize, vals: Vec<EdgeFlow>) -> Rc<BTreeSet<u64>> {
        if k == self.order.len() {
            return Rc::new(BTreeSet::from([0]));
        }
        let key = (k, vals);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let vals = key.1.clone();
        let mut out = BTreeSet::new();
        if let Some((outs, options)) = self.moves(k, &vals) {
            for assign in options {
                let next = self.next_cut(k, &vals, &outs, &assign);
                let m = Self::mask_of(&outs, &assign);
                for s in self.suffix(k + 1, next).iter() {
                    out.insert(s | m);
                }
            }
        }
        let r = Rc::new(out);
        self.memo.insert(key, r.clone());
        r
    }

    fn suffix_bits(&self, k: usize) -> u64 {
        (0..self.h.edges().len())
            .filter(|&e| self.pos[self.h.edges()[e].0] >= k)
            .fold(0, |m, e| m | 1 << e)
    }

    /// A flow whose `bb`-support is exactly `target`.
    fn realize(&mut self, target: u64) -> Option<Vec<EdgeFlow>> {
        let mut flow = vec![[0; 4]; self.h.edges().len()];
        let mut vals = Vec::new();
        for k in 0..self.order.len() {
            let (outs, options) = self.moves(k, &vals)?;
            let mut found = None;
            for assign in options {
                let own = Self::mask_of(&outs, &assign);
                let own_bits = outs.iter().fold(0u64, |m, &e| m | 1 << e);
                if own != target & own_bits {
                    continue;
                }
                let next = self.next_cut(k, &vals, &outs, &assign);
                let rest = target & self.suffix_bits(k + 1);
                if self.suffix(k + 1, next.clone()).contains(&rest) {
                    found = Some((assign, next));
                    break;
                }
            }
            let (assign, next) = found?;
            for (&e, f) in outs.iter().zip(&assign) {
                flow[e] = *f;
            }
            vals = next;
        }
        Some(flow)
    }
}

fn check_hasse_input(h: &Dag, net: &PtNet) -> Result<()> {
    if !h.is_simple() || !h.is_transitive_reduced() {
        return Err(Error::NotHasse(
            "the DAG is not a simple transitive reduced graph".into(),
        ));
    }
    let (min, max) = h.roots()?;
    if h.labels()[min] != INITIAL_EVENT || h.labels()[max] != FINAL_EVENT {
        return Err(Error::NotHasse(
            "the minimum must be labeled ι and the maximum ε".into(),
        ));
    }
    if h.edges().len() > 64 {
        return Err(Error::InvalidGraph(
            "flow search supports at most 64 edges".into(),
        ));
    }
    for (v, l) in h.labels().iter().enumerate() {
        if v != min && v != max && !net.has_transition(l) {
            return Err(Error::InvalidNet(format!("label {l} is not a transition")));
        }
    }
    Ok(())
}

/// A family of interlaced flows witnessing that the order of `h` is an
/// execution (resp. causal order) of `net`, if one exists.
pub fn check_interlaced_flow(
    h: &Dag,
    net: &PtNet,
    mode: Semantics,
) -> Result<Option<InterlacedFlow>> {
    check_hasse_input(h, net)?;
    let all = if h.edges().len() == 64 {
        u64::MAX
    } else {
        (1u64 << h.edges().len()) - 1
    };
    let mut searches: Vec<PlaceSearch> =
        net.places.iter().map(|p| PlaceSearch::new(h, p)).collect();
    let masks: Vec<Rc<BTreeSet<u64>>> = searches
        .iter_mut()
        .map(|s| s.suffix(0, Vec::new()))
        .collect();
    if masks.iter().any(|m| m.is_empty()) {
        return Ok(None);
    }
    let chosen: Vec<u64> = match mode {
        Semantics::Execution => masks.iter().map(|m| *m.iter().next().unwrap()).collect(),
        Semantics::Causal => {
            // Reachable unions of supports, with a back pointer per place.
            let mut layers: Vec<BTreeMap<u64, (u64, u64)>> = vec![BTreeMap::from([(0, (0, 0))])];
            for m in &masks {
                let mut next = BTreeMap::new();
                for &acc in layers.last().unwrap().keys() {
                    for &x in m.iter() {
                        next.entry(acc | x).or_insert((acc, x));
                    }
                }
                layers.push(next);
            }
            if !layers.last().unwrap().contains_key(&all) {
                return Ok(None);
            }
            let mut picks = vec![0; masks.len()];
            let mut acc = all;
            for p in (0..masks.len()).rev() {
                let (prev, x) = layers[p + 1][&acc];
                picks[p] = x;
                acc = prev;
            }
            picks
        }
    };
    let per_place = searches
        .iter_mut()
        .zip(chosen)
        .map(|(s, m)| s.realize(m).expect("mask is realizable"))
        .collect();
    Ok(Some(InterlacedFlow { per_place }))
}

/// Out-frontier values of every sliced flow of `s` extending `input`, with
/// each place's out-frontier total at most `cap`.
pub fn sliced_flows(
    s: &UnitSlice,
    net: &PtNet,
    input: &Iface,
    cap: u32,
    mode: Semantics,
) -> Vec<Iface> {
    let l = s.event();
    if !is_reserved(l) && !net.has_transition(l) {
        return Vec::new();
    }
    let center_outs = s.center_outputs();
    let mut per_place: Vec<Vec<Vec<EdgeFlow>>> = Vec::with_capacity(net.places.len());
    for (p, place) in net.places.iter().enumerate() {
        let ins = input.get(p).map(Vec::as_slice).unwrap_or(&[]);
        if ins.len() != s.in_width() {
            return Vec::new();
        }
        let into: Vec<EdgeFlow> = s.center_inputs().map(|i| ins[i]).collect();
        let consumed: u32 = into.iter().map(|x| x[BB] + x[PB]).sum();
        let passed: u32 = into.iter().map(|x| x[BF] + x[PF]).sum();
        if !s.is_final() && consumed != place.takes(l) {
            return Vec::new();
        }
        if s.is_final() {
            if passed != 0 {
                return Vec::new();
            }
            per_place.push(vec![Vec::new()]);
            continue;
        }
        let produced = if s.is_initial() {
            place.initial
        } else {
            place.puts(l)
        };
        let mut base = vec![[0; 4]; s.out_width()];
        for (i, j) in s.pass_throughs() {
            base[j] = ins[i];
        }
        let base_sum: u32 = base.iter().flatten().sum();
        let mut options = Vec::new();
        for assign in out_assignments(produced, passed, center_outs.len()) {
            let mut out = base.clone();
            for (&j, f) in center_outs.iter().zip(&assign) {
                out[j] = *f;
            }
            let total = base_sum + assign.iter().flatten().sum::<u32>();
            if total <= cap {
                options.push(out);
            }
        }
        if options.is_empty() {
            return Vec::new();
        }
        per_place.push(options);
    }
    let mut combos: Vec<Iface> = vec![Vec::new()];
    for options in per_place {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                options.iter().map(move |o| {
                    let mut c = c.clone();
                    c.push(o.clone());
                    c
                })
            })
            .collect();
    }
    if mode == Semantics::Causal {
        combos.retain(|c| (0..s.out_width()).all(|j| c.iter().any(|f| f[j][BB] > 0)));
    }
    combos
}

/// A filtered generator together with the out-frontier flow values of each
/// of its vertices.
#[derive(Clone, Debug)]
pub struct FilterResult {
    pub graph: SliceGraph,
    pub outputs: Vec<Iface>,
}

/// Expands every vertex of `hdg` by the sliced flows it admits, keeping
/// edges where flow values agree. Accepting walks are exactly the
/// decompositions carrying an execution (resp. causal) coloring.
pub fn filter_expanded(hdg: &SliceGraph, net: &PtNet, cap: u32, mode: Semantics) -> FilterResult {
    let mut ifaces: Vec<Iface> = Vec::new();
    let mut iface_id: HashMap<Iface, usize> = HashMap::new();
    let mut intern = |f: Iface, ifaces: &mut Vec<Iface>| -> usize {
        *iface_id.entry(f.clone()).or_insert_with(|| {
            ifaces.push(f);
            ifaces.len() - 1
        })
    };
    let empty = intern(vec![Vec::new(); net.places.len()], &mut ifaces);
    // Nodes are (vertex, in-iface, out-iface).
    let mut nodes: Vec<(usize, usize, usize)> = Vec::new();
    let mut by_entry: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut queue: VecDeque<(usize, usize)> = hdg.initial().iter().map(|&v| (v, empty)).collect();
    let mut memo: HashMap<(UnitSlice, usize), Vec<usize>> = HashMap::new();
    while let Some((v, inp)) = queue.pop_front() {
        if by_entry.contains_key(&(v, inp)) {
            continue;
        }
        let s = hdg.label(v);
        let outs = match memo.get(&(s.clone(), inp)) {
            Some(o) => o.clone(),
            None => {
                let flows = sliced_flows(s, net, &ifaces[inp].clone(), cap, mode);
                let ids: Vec<usize> = flows.into_iter().map(|f| intern(f, &mut ifaces)).collect();
                memo.insert((s.clone(), inp), ids.clone());
                ids
            }
        };
        let mut mine = Vec::new();
        for o in outs {
            mine.push(nodes.len());
            nodes.push((v, inp, o));
            for &w in hdg.successors(v) {
                if !by_entry.contains_key(&(w, o)) {
                    queue.push_back((w, o));
                }
            }
        }
        by_entry.insert((v, inp), mine);
    }
    let mut edges = Vec::new();
    for (id, &(v, _, o)) in nodes.iter().enumerate() {
        for &w in hdg.successors(v) {
            if let Some(targets) = by_entry.get(&(w, o)) {
                edges.extend(targets.iter().map(|&t| (id, t)));
            }
        }
    }
    let labels: Vec<UnitSlice> = nodes
        .iter()
        .map(|&(v, _, _)| hdg.label(v).clone())
        .collect();
    let initial: Vec<usize> = (0..nodes.len())
        .filter(|&i| hdg.initial().contains(&nodes[i].0) && nodes[i].1 == empty)
        .collect();
    let finals: Vec<usize> = (0..nodes.len())
        .filter(|&i| hdg.finals().contains(&nodes[i].0))
        .collect();
    let g = SliceGraph::new(labels, edges, initial, finals).expect("ids in range");
    let keep = g.useful();
    let outputs = keep.iter().map(|&i| ifaces[nodes[i].2].clone()).collect();
    FilterResult {
        graph: g.induced(&keep),
        outputs,
    }
}

/// The filtered generator of [`filter_expanded`]; requires a Hasse
/// diagram generator.
pub fn filter(hdg: &SliceGraph, net: &PtNet, cap: u32, mode: Semantics) -> Result<SliceGraph> {
    if !is_hasse_generator(hdg) {
        return Err(Error::NotHasse(
            "the specification is not a Hasse diagram generator".into(),
        ));
    }
    Ok(filter_expanded(hdg, net, cap, mode).graph)
}

pub fn filter_execution(hdg: &SliceGraph, net: &PtNet, cap: u32) -> Result<SliceGraph> {
    filter(hdg, net, cap, Semantics::Execution)
}

pub fn filter_causal(hdg: &SliceGraph, net: &PtNet, cap: u32) -> Result<SliceGraph> {
    filter(hdg, net, cap, Semantics::Causal)
}

/// Bound on explored markings when a net's token bound is computed.
pub const MARKING_LIMIT: usize = 100_000;

/// The canonical saturated generator of the executions (resp. causal
/// orders) of a `k`-safe net whose Hasse diagrams have global slice width
/// at most `c`. Flow totals are capped by `max(c, k)`, which the marking
/// equation never exceeds.
pub fn build_net_hdg(net: &PtNet, mode: Semantics, k: u32, c: usize) -> Result<SliceGraph> {
    if !net.is_k_safe_bounded(k, usize::MAX) {
        return Err(Error::NotKSafe(k));
    }
    let hdg = build_bounded_hdg(c, net.transitions());
    let filtered = filter_expanded(&hdg, net, k.max(c as u32), mode).graph;
    ops::canonical_unchecked(&filtered)
}

pub fn build_net_causal_hdg(net: &PtNet, k: u32, c: usize) -> Result<SliceGraph> {
    build_net_hdg(net, Semantics::Causal, k, c)
}

pub fn build_net_execution_hdg(net: &PtNet, k: u32, c: usize) -> Result<SliceGraph> {
    build_net_hdg(net, Semantics::Execution, k, c)
}

/// Verification queries against a Hasse diagram generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Query {
    /// No order of the generator belongs to the net's semantics.
    EmptyIntersect,
    /// Every order of the generator belongs to the net's semantics.
    Inclusion,
}

/// Decides a query by filtering `hdg`: the intersection is empty iff the
/// filtered slice language is empty, and inclusion holds iff filtering
/// removes no string. `cap` defaults to the token bound of the net.
pub fn verify(
    hdg: &SliceGraph,
    net: &PtNet,
    mode: Semantics,
    query: Query,
    cap: Option<u32>,
) -> Result<bool> {
    let cap = match cap {
        Some(c) => c,
        None => net.token_bound(MARKING_LIMIT)?,
    };
    let f = filter(hdg, net, cap, mode)?;
    let fa = f.to_automaton();
    Ok(match query {
        Query::EmptyIntersect => fa.is_empty(),
        Query::Inclusion => hdg.to_automaton().is_subset_of(&fa),
    })
}

/// The order language of a net up to `max_events` occurrences, as a set.
pub fn language(net: &PtNet, mode: Semantics, max_events: usize) -> PoSet {
    let causal = causal_orders(net, max_events);
    match mode {
        Semantics::Causal => causal,
        Semantics::Execution => {
            let mut out = PoSet::new();
            for p in causal.values() {
                out.extend(executions_of(p));
            }
            out
        }
    }
}

/// Orders of the given Hasse diagrams, as a set.
pub fn orders_of<'a>(dags: impl IntoIterator<Item = &'a Dag>) -> PoSet {
    po_set(dags)
}

/// The Hasse diagram family with chains `a_1..a_2n`, `b_1..b_2n` and cross
/// edges `a_i -> b_{i+n}`, `b_i -> a_{i+n}`; its existential slice width
/// grows with `n`.
pub fn h_family(n: usize) -> Dag {
    let m = 2 * n;
    let a = |i: usize| 1 + i;
    let b = |i: usize| 1 + m + i;
    let eps = 1 + 2 * m;
    let mut labels = vec![INITIAL_EVENT.to_string()];
    labels.extend((0..m).map(|_| "a".to_string()));
    labels.extend((0..m).map(|_| "b".to_string()));
    labels.push(FINAL_EVENT.to_string());
    let mut edges = vec![(0, a(0)), (0, b(0)), (a(m - 1), eps), (b(m - 1), eps)];
    for i in 0..m - 1 {
        edges.push((a(i), a(i + 1)));
        edges.push((b(i), b(i + 1)));
    }
    for i in 0..n {
        edges.push((a(i), b(i + n)));
        edges.push((b(i), a(i + n)));
    }
    Dag::new(labels, edges).expect("cross edges point forward")
}

/// Two independent self-loop places, one for `a` and one for `b`, each
/// holding one token.
pub fn independent_loops_net() -> PtNet {
    let place = |t: &str| Place {
        initial: 1,
        take: BTreeMap::from([(t.to_string(), 1)]),
        put: BTreeMap::from([(t.to_string(), 1)]),
    };
    PtNet::new(
        ["a".to_string(), "b".to_string()],
        vec![place("a"), place("b")],
    )
    .expect("valid net")
}
