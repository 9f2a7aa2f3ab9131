//! Slices, unit slices and composition.
//!
//! Frontier ports are numbered from 0 internally; the JSON layer shifts them
//! to 1-based numbers.

use std::fmt;

use crate::canon::{canonical_form, CanonicalForm};
use crate::dag::Dag;
use crate::error::{Error, Result};

/// Event symbol labeling a center vertex.
pub type Event = String;

/// Reserved label of the unique minimal vertex of nets, traces and universes.
pub const INITIAL_EVENT: &str = "ι";
/// Reserved label of the unique maximal vertex.
pub const FINAL_EVENT: &str = "ε";

/// Where the edge leaving an in-port of a unit slice goes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Link {
    Center,
    Out(usize),
}

/// Where the edge entering an out-port of a unit slice comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Center,
    In(usize),
}

/// A slice with a single center vertex.
///
/// Since every frontier port touches exactly one edge, the slice is fully
/// described by where each in-port leads and by the out-frontier size: every
/// out-port not fed by a pass-through edge is fed by the center. Structural
/// equality is therefore isomorphism preserving frontier numbers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitSlice {
    event: Event,
    inputs: Vec<Link>,
    outputs: usize,
}

impl UnitSlice {
    /// Builds a unit slice; pass-through targets must be distinct and in range.
    pub fn new(event: impl Into<Event>, inputs: Vec<Link>, outputs: usize) -> Result<Self> {
        let mut seen = vec![false; outputs];
        for link in &inputs {
            if let Link::Out(j) = *link {
                if j >= outputs || seen[j] {
                    return Err(Error::InvalidSlice(format!(
                        "out-port {} is fed twice or out of range",
                        j + 1
                    )));
                }
                seen[j] = true;
            }
        }
        Ok(UnitSlice {
            event: event.into(),
            inputs,
            outputs,
        })
    }

    /// Initial slice whose center feeds `outputs` ports.
    pub fn initial(event: impl Into<Event>, outputs: usize) -> Self {
        UnitSlice {
            event: event.into(),
            inputs: Vec::new(),
            outputs,
        }
    }

    /// Final slice whose center absorbs `inputs` ports.
    pub fn terminal(event: impl Into<Event>, inputs: usize) -> Self {
        UnitSlice {
            event: event.into(),
            inputs: vec![Link::Center; inputs],
            outputs: 0,
        }
    }

    pub fn event(&self) -> &str {
        &self.event
    }

    pub fn inputs(&self) -> &[Link] {
        &self.inputs
    }

    pub fn in_width(&self) -> usize {
        self.inputs.len()
    }

    pub fn out_width(&self) -> usize {
        self.outputs
    }

    pub fn width(&self) -> usize {
        self.in_width().max(self.out_width())
    }

    pub fn is_initial(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn is_final(&self) -> bool {
        self.outputs == 0
    }

    /// Per out-port source.
    pub fn sources(&self) -> Vec<Source> {
        let mut src = vec![Source::Center; self.outputs];
        for (i, link) in self.inputs.iter().enumerate() {
            if let Link::Out(j) = *link {
                src[j] = Source::In(i);
            }
        }
        src
    }

    /// In-ports whose edge enters the center.
    pub fn center_inputs(&self) -> impl Iterator<Item = usize> + '_ {
        self.inputs
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == Link::Center)
            .map(|(i, _)| i)
    }

    /// Out-ports whose edge leaves the center.
    pub fn center_outputs(&self) -> Vec<usize> {
        self.sources()
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Source::Center)
            .map(|(j, _)| j)
            .collect()
    }

    /// Pass-through edges as (in-port, out-port).
    pub fn pass_throughs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.inputs.iter().enumerate().filter_map(|(i, l)| match l {
            Link::Out(j) => Some((i, *j)),
            Link::Center => None,
        })
    }

    /// The center misses a nonempty frontier.
    pub fn is_degenerate(&self) -> bool {
        let touches_in = self.inputs.contains(&Link::Center);
        let touches_out = self.outputs > self.pass_throughs().count();
        (!self.inputs.is_empty() && !touches_in) || (self.outputs > 0 && !touches_out)
    }

    /// Renumbers in-port `i` to `pi[i]` and out-port `j` to `sigma[j]`.
    pub fn permuted(&self, pi: &[usize], sigma: &[usize]) -> UnitSlice {
        let mut inputs = vec![Link::Center; self.inputs.len()];
        for (i, link) in self.inputs.iter().enumerate() {
            inputs[pi[i]] = match *link {
                Link::Center => Link::Center,
                Link::Out(j) => Link::Out(sigma[j]),
            };
        }
        UnitSlice {
            event: self.event.clone(),
            inputs,
            outputs: self.outputs,
        }
    }

    pub fn to_slice(&self) -> Slice {
        let mut edges = Vec::new();
        for (i, link) in self.inputs.iter().enumerate() {
            let to = match *link {
                Link::Center => End::Center(0),
                Link::Out(j) => End::Out(j),
            };
            edges.push((End::In(i), to));
        }
        for j in self.center_outputs() {
            edges.push((End::Center(0), End::Out(j)));
        }
        Slice {
            in_width: self.in_width(),
            out_width: self.outputs,
            center: vec![self.event.clone()],
            edges,
        }
    }

    /// Compact textual encoding, e.g. `a[c,2]3` for an `a`-center consuming
    /// in-port 1, passing in-port 2 to out-port 2, with 3 out-ports.
    pub fn encoding(&self) -> String {
        let links: Vec<String> = self
            .inputs
            .iter()
            .map(|l| match l {
                Link::Center => "c".to_string(),
                Link::Out(j) => (j + 1).to_string(),
            })
            .collect();
        format!("{}[{}]{}", self.event, links.join(","), self.outputs)
    }
}

impl fmt::Display for UnitSlice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

/// True iff the composition `s1 ∘ s2` has no center-to-center edge.
pub fn independent(s1: &UnitSlice, s2: &UnitSlice) -> Result<bool> {
    if s1.out_width() != s2.in_width() {
        return Err(Error::FrontierMismatch {
            left: s1.out_width(),
            right: s2.in_width(),
        });
    }
    let src = s1.sources();
    Ok(!s2
        .inputs
        .iter()
        .zip(&src)
        .any(|(l, s)| *l == Link::Center && *s == Source::Center))
}

/// Endpoint of an edge of a general slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    In(usize),
    Center(usize),
    Out(usize),
}

/// A labeled DAG with numbered frontiers. The center may hold several
/// vertices, or none when the slice is a bundle of wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub in_width: usize,
    pub out_width: usize,
    pub center: Vec<Event>,
    pub edges: Vec<(End, End)>,
}

/// Vertex label used when canonizing a slice with its frontiers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SliceLabel {
    In(usize),
    Center(Event),
    Out(usize),
}

impl Slice {
    /// Checks that each port touches exactly one edge of the right direction
    /// and that the center is acyclic.
    pub fn validate(&self) -> Result<()> {
        let mut in_seen = vec![0usize; self.in_width];
        let mut out_seen = vec![0usize; self.out_width];
        let n = self.center.len();
        let mut inner = Vec::new();
        for &(a, b) in &self.edges {
            match a {
                End::In(i) if i < self.in_width => in_seen[i] += 1,
                End::Center(x) if x < n => {}
                _ => return Err(Error::InvalidSlice(format!("bad edge source {a:?}"))),
            }
            match b {
                End::Out(j) if j < self.out_width => out_seen[j] += 1,
                End::Center(y) if y < n => {
                    if let End::Center(x) = a {
                        inner.push((x, y));
                    }
                }
                _ => return Err(Error::InvalidSlice(format!("bad edge target {b:?}"))),
            }
        }
        if in_seen.iter().chain(&out_seen).any(|&c| c != 1) {
            return Err(Error::InvalidSlice(
                "each frontier port must touch exactly one edge".into(),
            ));
        }
        Dag::new(self.center.clone(), inner).map(|_| ())
    }

    /// Glues out-port `j` of `self` to in-port `j` of `next`.
    pub fn compose(&self, next: &Slice) -> Result<Slice> {
        if self.out_width != next.in_width {
            return Err(Error::FrontierMismatch {
                left: self.out_width,
                right: next.in_width,
            });
        }
        let off = self.center.len();
        let shift = |e: End| match e {
            End::Center(x) => End::Center(x + off),
            other => other,
        };
        let mut into_out = vec![None; self.out_width];
        let mut edges = Vec::new();
        for &(a, b) in &self.edges {
            match b {
                End::Out(j) => into_out[j] = Some(a),
                _ => edges.push((a, b)),
            }
        }
        for &(a, b) in &next.edges {
            match a {
                End::In(j) => {
                    let src = into_out[j].expect("validated slice");
                    edges.push((src, shift(b)));
                }
                _ => edges.push((shift(a), shift(b))),
            }
        }
        let mut center = self.center.clone();
        center.extend(next.center.iter().cloned());
        Ok(Slice {
            in_width: self.in_width,
            out_width: next.out_width,
            center,
            edges,
        })
    }

    /// Composes a nonempty string of unit slices.
    pub fn compose_units<'a, I>(units: I) -> Result<Slice>
    where
        I: IntoIterator<Item = &'a UnitSlice>,
    {
        let mut it = units.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::IllegalSliceString("empty string".into()))?;
        it.try_fold(first.to_slice(), |acc, s| acc.compose(&s.to_slice()))
    }

    /// A fixed unit decomposition along the smallest topological order of
    /// the center, keeping both frontier numberings; inner cuts are numbered
    /// by edge index.
    pub fn unit_decomposition(&self) -> Result<Vec<UnitSlice>> {
        self.validate()?;
        let inner: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match (a, b) {
                (End::Center(x), End::Center(y)) => Some((x, y)),
                _ => None,
            })
            .collect();
        let order = Dag::from_parts_unchecked(self.center.clone(), inner)
            .topological_order()
            .ok_or(Error::Cyclic)?;
        let n = order.len();
        if n == 0 {
            return Err(Error::InvalidSlice(
                "a slice without center vertices has no unit decomposition".into(),
            ));
        }
        let mut pos = vec![0usize; n];
        for (k, &x) in order.iter().enumerate() {
            pos[x] = k + 1;
        }
        // A vertex placed at step `k` lies before cut `k`; ports sit at 0 and n + 1.
        let rank = |e: End| match e {
            End::In(_) => 0,
            End::Center(x) => pos[x],
            End::Out(_) => n + 1,
        };
        let cuts: Vec<Vec<usize>> = (0..=n)
            .map(|k| {
                let mut cut: Vec<usize> = (0..self.edges.len())
                    .filter(|&e| rank(self.edges[e].0) <= k && rank(self.edges[e].1) > k)
                    .collect();
                if k == 0 {
                    cut.sort_by_key(|&e| self.edges[e].0);
                } else if k == n {
                    cut.sort_by_key(|&e| self.edges[e].1);
                }
                cut
            })
            .collect();
        (0..n)
            .map(|k| {
                let x = order[k];
                let inputs = cuts[k]
                    .iter()
                    .map(|&e| {
                        if self.edges[e].1 == End::Center(x) {
                            Link::Center
                        } else {
                            Link::Out(
                                cuts[k + 1]
                                    .iter()
                                    .position(|&f| f == e)
                                    .expect("edge persists"),
                            )
                        }
                    })
                    .collect();
                UnitSlice::new(self.center[x].clone(), inputs, cuts[k + 1].len())
            })
            .collect()
    }

    /// The underlying DAG when both frontiers are empty.
    pub fn to_dag(&self) -> Option<Dag> {
        if self.in_width != 0 || self.out_width != 0 {
            return None;
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| match (a, b) {
                (End::Center(x), End::Center(y)) => (x, y),
                _ => unreachable!("frontier-free slice"),
            })
            .collect();
        Some(Dag::from_parts_unchecked(self.center.clone(), edges))
    }

    /// Isomorphism invariant preserving frontier numbers.
    pub fn canonical(&self) -> CanonicalForm<SliceLabel> {
        let n = self.center.len();
        let idx = |e: End| match e {
            End::Center(x) => x,
            End::In(i) => n + i,
            End::Out(j) => n + self.in_width + j,
        };
        let mut labels: Vec<SliceLabel> = self
            .center
            .iter()
            .cloned()
            .map(SliceLabel::Center)
            .collect();
        labels.extend((0..self.in_width).map(SliceLabel::In));
        labels.extend((0..self.out_width).map(SliceLabel::Out));
        let edges: Vec<(usize, usize)> =
            self.edges.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
        canonical_form(&labels, &edges).0
    }

    pub fn is_isomorphic(&self, other: &Slice) -> bool {
        self.center.len() == other.center.len()
            && self.edges.len() == other.edges.len()
            && self.canonical() == other.canonical()
    }
}
