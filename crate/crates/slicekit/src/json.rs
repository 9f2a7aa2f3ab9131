//! JSON interchange for slices, DAGs, slice graphs, automata, nets and
//! message sequence graphs, plus DOT rendering. Output goes through
//! `serde_json::Value`, whose maps keep keys sorted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::automaton::SliceAutomaton;
use crate::dag::Dag;
use crate::error::{Error, Result};
use crate::msc::{Action, EventSpec, Msc, Msg};
use crate::petri::{Place, PtNet};
use crate::slice::{End, Link, Slice, UnitSlice};
use crate::slice_graph::SliceGraph;
use crate::traces::EventAutomaton;

/// Deserializes `text`, reporting syntax and shape errors with their
/// position.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CenterJson {
    pub id: String,
    pub event: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceJson {
    #[serde(rename = "in", default)]
    pub in_width: usize,
    #[serde(default)]
    pub out: usize,
    #[serde(default)]
    pub center: Vec<CenterJson>,
    #[serde(default)]
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DagJson {
    #[serde(default)]
    pub center: Vec<CenterJson>,
    #[serde(default)]
    pub edges: Vec<EdgeJson>,
}

fn port(spec: &str, prefix: &str, width: usize) -> Result<Option<usize>> {
    let Some(rest) = spec.strip_prefix(prefix) else {
        return Ok(None);
    };
    match rest.parse::<usize>() {
        Ok(k) if (1..=width).contains(&k) => Ok(Some(k - 1)),
        _ => Err(Error::InvalidSlice(format!(
            "port {spec} out of range 1..={width}"
        ))),
    }
}

fn center_index(center: &[CenterJson]) -> Result<BTreeMap<&str, usize>> {
    let mut ids = BTreeMap::new();
    for (i, c) in center.iter().enumerate() {
        if c.id.starts_with("in:") || c.id.starts_with("out:") {
            return Err(Error::InvalidSlice(format!(
                "center id {} looks like a port",
                c.id
            )));
        }
        if ids.insert(c.id.as_str(), i).is_some() {
            return Err(Error::InvalidSlice(format!("duplicate center id {}", c.id)));
        }
    }
    Ok(ids)
}

fn end_of(
    spec: &str,
    ids: &BTreeMap<&str, usize>,
    in_width: usize,
    out_width: usize,
) -> Result<End> {
    if let Some(i) = port(spec, "in:", in_width)? {
        return Ok(End::In(i));
    }
    if let Some(j) = port(spec, "out:", out_width)? {
        return Ok(End::Out(j));
    }
    ids.get(spec)
        .map(|&v| End::Center(v))
        .ok_or_else(|| Error::InvalidSlice(format!("unknown vertex {spec}")))
}

fn end_name(e: End) -> String {
    match e {
        End::In(i) => format!("in:{}", i + 1),
        End::Out(j) => format!("out:{}", j + 1),
        End::Center(v) => format!("v{v}"),
    }
}

impl SliceJson {
    pub fn to_slice(&self) -> Result<Slice> {
        let ids = center_index(&self.center)?;
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Ok((
                    end_of(&e.from, &ids, self.in_width, self.out)?,
                    end_of(&e.to, &ids, self.in_width, self.out)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let s = Slice {
            in_width: self.in_width,
            out_width: self.out,
            center: self.center.iter().map(|c| c.event.clone()).collect(),
            edges,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn from_slice(s: &Slice) -> SliceJson {
        let mut edges = s.edges.clone();
        edges.sort();
        SliceJson {
            in_width: s.in_width,
            out: s.out_width,
            center: s
                .center
                .iter()
                .enumerate()
                .map(|(v, e)| CenterJson {
                    id: format!("v{v}"),
                    event: e.clone(),
                })
                .collect(),
            edges: edges
                .into_iter()
                .map(|(a, b)| EdgeJson {
                    from: end_name(a),
                    to: end_name(b),
                })
                .collect(),
        }
    }
}

/// Reads a slice with exactly one center vertex as a unit slice.
pub fn unit_from_slice(s: &Slice) -> Result<UnitSlice> {
    if s.center.len() != 1 {
        return Err(Error::InvalidSlice(format!(
            "a unit slice has one center vertex, found {}",
            s.center.len()
        )));
    }
    let mut inputs = vec![Link::Center; s.in_width];
    for &(a, b) in &s.edges {
        if let (End::In(i), End::Out(j)) = (a, b) {
            inputs[i] = Link::Out(j);
        }
    }
    UnitSlice::new(s.center[0].clone(), inputs, s.out_width)
}

pub fn unit_slice_to_value(s: &UnitSlice) -> Value {
    serde_json::to_value(SliceJson::from_slice(&s.to_slice())).expect("serializable")
}

pub fn slice_to_value(s: &Slice) -> Value {
    serde_json::to_value(SliceJson::from_slice(s)).expect("serializable")
}

impl DagJson {
    pub fn to_dag(&self) -> Result<Dag> {
        let ids = center_index(&self.center)?;
        let edges = self
            .edges
            .iter()
            .map(
                |e| match (end_of(&e.from, &ids, 0, 0)?, end_of(&e.to, &ids, 0, 0)?) {
                    (End::Center(u), End::Center(v)) => Ok((u, v)),
                    _ => Err(Error::InvalidSlice("a DAG has no frontier ports".into())),
                },
            )
            .collect::<Result<Vec<_>>>()?;
        Dag::new(self.center.iter().map(|c| c.event.clone()).collect(), edges)
    }

    pub fn from_dag(d: &Dag) -> DagJson {
        let mut edges = d.edges().to_vec();
        edges.sort();
        DagJson {
            center: d
                .labels()
                .iter()
                .enumerate()
                .map(|(v, e)| CenterJson {
                    id: format!("v{v}"),
                    event: e.clone(),
                })
                .collect(),
            edges: edges
                .into_iter()
                .map(|(u, v)| EdgeJson {
                    from: format!("v{u}"),
                    to: format!("v{v}"),
                })
                .collect(),
        }
    }
}

pub fn dag_to_value(d: &Dag) -> Value {
    serde_json::to_value(DagJson::from_dag(d)).expect("serializable")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexJson {
    pub id: String,
    pub slice: SliceJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceGraphJson {
    pub vertices: Vec<VertexJson>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub initial: Vec<String>,
    #[serde(default, rename = "final")]
    pub finals: Vec<String>,
}

fn id_index<'a>(ids: impl Iterator<Item = &'a str>) -> Result<BTreeMap<&'a str, usize>> {
    let mut out = BTreeMap::new();
    for (i, id) in ids.enumerate() {
        if out.insert(id, i).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate vertex id {id}")));
        }
    }
    Ok(out)
}

fn lookup(ids: &BTreeMap<&str, usize>, id: &str) -> Result<usize> {
    ids.get(id)
        .copied()
        .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex id {id}")))
}

impl SliceGraphJson {
    /// Builds the graph and rejects structural errors.
    pub fn to_graph(&self) -> Result<SliceGraph> {
        let ids = id_index(self.vertices.iter().map(|v| v.id.as_str()))?;
        let labels = self
            .vertices
            .iter()
            .map(|v| unit_from_slice(&v.slice.to_slice()?))
            .collect::<Result<Vec<_>>>()?;
        let edges = self
            .edges
            .iter()
            .map(|(u, v)| Ok((lookup(&ids, u)?, lookup(&ids, v)?)))
            .collect::<Result<Vec<_>>>()?;
        let initial = self
            .initial
            .iter()
            .map(|v| lookup(&ids, v))
            .collect::<Result<Vec<_>>>()?;
        let finals = self
            .finals
            .iter()
            .map(|v| lookup(&ids, v))
            .collect::<Result<Vec<_>>>()?;
        SliceGraph::checked(labels, edges, initial, finals)
    }

    /// Vertex ids are positions in canonical order.
    pub fn from_graph(sg: &SliceGraph) -> SliceGraphJson {
        let g = sg.canonical_order();
        SliceGraphJson {
            vertices: (0..g.len())
                .map(|v| VertexJson {
                    id: v.to_string(),
                    slice: SliceJson::from_slice(&g.label(v).to_slice()),
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|&(u, v)| (u.to_string(), v.to_string()))
                .collect(),
            initial: g.initial().iter().map(usize::to_string).collect(),
            finals: g.finals().iter().map(usize::to_string).collect(),
        }
    }
}

pub fn parse_slice_graph(text: &str) -> Result<SliceGraph> {
    parse::<SliceGraphJson>(text)?.to_graph()
}

pub fn slice_graph_to_value(sg: &SliceGraph) -> Value {
    serde_json::to_value(SliceGraphJson::from_graph(sg)).expect("serializable")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceTransitionJson {
    pub from: String,
    pub symbol: SliceJson,
    pub to: String,
}

/// Automata over slices: transitions carry the symbol.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceAutomatonJson {
    pub states: Vec<String>,
    #[serde(default)]
    pub transitions: Vec<SliceTransitionJson>,
    pub start: String,
    #[serde(default)]
    pub accepting: Vec<String>,
}

impl SliceAutomatonJson {
    pub fn to_automaton(&self) -> Result<SliceAutomaton> {
        let ids = id_index(self.states.iter().map(String::as_str))?;
        let transitions = self
            .transitions
            .iter()
            .map(|t| {
                Ok((
                    lookup(&ids, &t.from)?,
                    unit_from_slice(&t.symbol.to_slice()?)?,
                    lookup(&ids, &t.to)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let accepting = self
            .accepting
            .iter()
            .map(|q| lookup(&ids, q))
            .collect::<Result<Vec<_>>>()?;
        Ok(SliceAutomaton::new(
            self.states.len(),
            lookup(&ids, &self.start)?,
            accepting,
            transitions,
        ))
    }

    pub fn from_automaton(a: &SliceAutomaton) -> SliceAutomatonJson {
        SliceAutomatonJson {
            states: (0..a.num_states()).map(|q| q.to_string()).collect(),
            transitions: a
                .labeled_transitions()
                .map(|(p, s, q)| SliceTransitionJson {
                    from: p.to_string(),
                    symbol: SliceJson::from_slice(&s.to_slice()),
                    to: q.to_string(),
                })
                .collect(),
            start: a.start().to_string(),
            accepting: a.accepting().iter().map(usize::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventTransitionJson {
    pub from: String,
    pub symbol: String,
    pub to: String,
}

/// Automata over event names.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceAutomatonJson {
    pub states: Vec<String>,
    #[serde(default)]
    pub transitions: Vec<EventTransitionJson>,
    pub start: String,
    #[serde(default)]
    pub accepting: Vec<String>,
}

impl TraceAutomatonJson {
    pub fn to_automaton(&self) -> Result<EventAutomaton> {
        let ids = id_index(self.states.iter().map(String::as_str))?;
        let transitions = self
            .transitions
            .iter()
            .map(|t| {
                Ok((
                    lookup(&ids, &t.from)?,
                    t.symbol.clone(),
                    lookup(&ids, &t.to)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EventAutomaton {
            num_states: self.states.len(),
            start: lookup(&ids, &self.start)?,
            accepting: self
                .accepting
                .iter()
                .map(|q| lookup(&ids, q))
                .collect::<Result<BTreeSet<_>>>()?,
            transitions,
        })
    }
}

/// Parses `a:b,c:d` into independent pairs.
pub fn parse_independence(spec: &str) -> Result<Vec<(String, String)>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| match pair.split_once(':') {
            Some((a, b)) if !a.is_empty() && !b.is_empty() && !b.contains(':') => {
                Ok((a.trim().to_string(), b.trim().to_string()))
            }
            _ => Err(Error::AlphabetMismatch(format!(
                "bad independent pair {pair:?}, expected a:b"
            ))),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceJson {
    #[serde(default)]
    pub initial: u32,
    #[serde(default)]
    pub take: BTreeMap<String, u32>,
    #[serde(default)]
    pub put: BTreeMap<String, u32>,
    #[serde(default = "one")]
    pub copies: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetJson {
    pub transitions: Vec<String>,
    pub places: Vec<PlaceJson>,
}

impl NetJson {
    /// Expands `copies` into repeated places.
    pub fn to_net(&self) -> Result<PtNet> {
        let mut places = Vec::new();
        for p in &self.places {
            let place = Place {
                initial: p.initial,
                take: p
                    .take
                    .iter()
                    .filter(|(_, &n)| n > 0)
                    .map(|(t, &n)| (t.clone(), n))
                    .collect(),
                put: p
                    .put
                    .iter()
                    .filter(|(_, &n)| n > 0)
                    .map(|(t, &n)| (t.clone(), n))
                    .collect(),
            };
            places.extend(std::iter::repeat_n(place, p.copies as usize));
        }
        PtNet::new(self.transitions.iter().cloned(), places)
    }
}

pub fn parse_net(text: &str) -> Result<PtNet> {
    parse::<NetJson>(text)?.to_net()
}

/// An MSC event: `label` is `p!q`, `p?q` or an internal action name.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MscEventJson {
    pub instance: String,
    pub seq: u64,
    pub label: String,
    #[serde(default)]
    pub message: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MscVertexJson {
    pub id: String,
    #[serde(default)]
    pub events: Vec<MscEventJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MsgJson {
    pub instances: Vec<String>,
    pub vertices: Vec<MscVertexJson>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub initial: Vec<String>,
    #[serde(default, rename = "final")]
    pub finals: Vec<String>,
}

impl MscEventJson {
    fn to_spec(&self) -> Result<EventSpec> {
        let split = |sep: char| {
            self.label.split_once(sep).map(|(p, q)| {
                if p == self.instance {
                    Ok(q.to_string())
                } else {
                    Err(Error::InvalidMsc(format!(
                        "event {} sits on instance {}",
                        self.label, self.instance
                    )))
                }
            })
        };
        let action = if let Some(q) = split('!') {
            Action::Send(q?)
        } else if let Some(q) = split('?') {
            Action::Receive(q?)
        } else {
            Action::Internal(self.label.clone())
        };
        if !matches!(action, Action::Internal(_)) && self.message.is_none() {
            return Err(Error::InvalidMsc(format!(
                "{} needs a message id",
                self.label
            )));
        }
        Ok(EventSpec {
            instance: self.instance.clone(),
            seq: self.seq,
            action,
            message: self.message.clone(),
        })
    }
}

impl MsgJson {
    pub fn to_msg(&self) -> Result<Msg> {
        let ids = id_index(self.vertices.iter().map(|v| v.id.as_str()))?;
        let labels = self
            .vertices
            .iter()
            .map(|v| {
                let specs = v
                    .events
                    .iter()
                    .map(MscEventJson::to_spec)
                    .collect::<Result<Vec<_>>>()?;
                Msc::new(self.instances.iter().cloned(), specs)
            })
            .collect::<Result<Vec<_>>>()?;
        let edges = self
            .edges
            .iter()
            .map(|(u, v)| Ok((lookup(&ids, u)?, lookup(&ids, v)?)))
            .collect::<Result<Vec<_>>>()?;
        let initial = self
            .initial
            .iter()
            .map(|v| lookup(&ids, v))
            .collect::<Result<Vec<_>>>()?;
        let finals = self
            .finals
            .iter()
            .map(|v| lookup(&ids, v))
            .collect::<Result<Vec<_>>>()?;
        Msg::new(labels, edges, initial, finals)
    }
}

pub fn parse_msg(text: &str) -> Result<Msg> {
    parse::<MsgJson>(text)?.to_msg()
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT rendering of a slice graph in canonical vertex order.
pub fn slice_graph_to_dot(sg: &SliceGraph) -> String {
    let g = sg.canonical_order();
    let mut out = String::from("digraph slices {\n  rankdir=LR;\n");
    for v in 0..g.len() {
        let shape = if g.finals().contains(&v) {
            "doublecircle"
        } else {
            "box"
        };
        let style = if g.initial().contains(&v) {
            ", style=bold"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  {v} [label=\"{}\", shape={shape}{style}];",
            dot_escape(&g.label(v).encoding())
        );
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -> {v};");
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of a DAG.
pub fn dag_to_dot(d: &Dag) -> String {
    let mut out = String::from("digraph dag {\n");
    for (v, l) in d.labels().iter().enumerate() {
        let _ = writeln!(out, "  {v} [label=\"{}\"];", dot_escape(l));
    }
    for &(u, v) in d.edges() {
        let _ = writeln!(out, "  {u} -> {v};");
    }
    out.push_str("}\n");
    out
}

/// The JSON envelope of every CLI answer.
pub fn envelope(ok: bool, result: Value, diagnostics: Vec<Value>) -> Value {
    json!({ "ok": ok, "result": result, "diagnostics": diagnostics })
}
