//! The `slicekit` command line: every subcommand prints one JSON envelope
//! `{"ok", "result", "diagnostics"}`. Exit code 0 means a result was
//! computed, 1 an input error, 2 a violated precondition.

use std::fs;
use std::io::{self, Read, Write};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use thiserror::Error;

use crate::dag::Dag;
use crate::error::Error;
use crate::json::{self, MsgJson, NetJson, SliceGraphJson, TraceAutomatonJson};
use crate::petri::{self, Query, Semantics};
use crate::slice::{FINAL_EVENT, INITIAL_EVENT};
use crate::slice_graph::SliceGraph;
use crate::traces::IndependenceAlphabet;
use crate::{msc, ops, reduction, saturation, traces, universe};

#[derive(Debug, Parser)]
#[command(
    name = "slicekit",
    version,
    about = "Regular slice languages of DAGs and partial orders"
)]
pub struct Cli {
    /// Also write graph-valued results as DOT to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub emit_dot: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transitive reduction of a slice graph.
    Reduce {
        #[arg(long = "in", default_value = "-")]
        input: String,
        #[arg(long, default_value = "-")]
        out: String,
        /// Use the simple-DAG colorings only.
        #[arg(long)]
        simple_only: bool,
    },
    /// Property checks.
    Check(CheckArgs),
    /// Weak or loop-connected saturation.
    Saturate {
        #[arg(long, value_enum)]
        mode: SaturateMode,
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Bounded universe generators.
    Universe {
        #[arg(long)]
        c: usize,
        #[arg(long, value_delimiter = ',')]
        events: Vec<String>,
        #[arg(long, value_enum)]
        mode: LanguageMode,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Globally bounded complement.
    Complement {
        #[arg(long)]
        c: usize,
        #[arg(long, value_enum)]
        mode: LanguageMode,
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Slice-language union, intersection or difference.
    Op(OpArgs),
    /// Inclusion and emptiness decisions.
    Decide(DecideArgs),
    /// Canonical saturated generator.
    Canon {
        #[arg(long, value_enum)]
        mode: LanguageMode,
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Slice graph of a trace language.
    FromTrace {
        #[arg(long)]
        automaton: String,
        /// Independent pairs such as `a:b,c:d`.
        #[arg(long, default_value = "")]
        independence: String,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Slice graph of a message sequence graph.
    FromMsg {
        #[arg(long = "in", default_value = "-")]
        input: String,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Verify a Hasse diagram generator against a p/t-net.
    NetVerify {
        #[arg(long)]
        net: String,
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum)]
        semantics: SemanticsArg,
        #[arg(long, value_enum)]
        query: QueryArg,
        /// Flow cap per place; defaults to the token bound of the net.
        #[arg(long)]
        c: Option<u32>,
    },
    /// Canonical generator of the orders of a k-safe net.
    NetHdg {
        #[arg(long)]
        net: String,
        #[arg(long, value_enum)]
        semantics: SemanticsArg,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Randomized consistency checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("property").required(true).args([
    "hasse", "saturated", "weakly_saturated", "loop_connected", "locally_synchronized"
])))]
pub struct CheckArgs {
    #[arg(long)]
    hasse: bool,
    #[arg(long)]
    saturated: bool,
    #[arg(long)]
    weakly_saturated: bool,
    #[arg(long)]
    loop_connected: bool,
    /// Input is a message sequence graph.
    #[arg(long)]
    locally_synchronized: bool,
    /// Length bound for bounded checks.
    #[arg(long, default_value_t = 6)]
    bound: usize,
    #[arg(default_value = "-")]
    input: String,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("operation").required(true).args(["union", "intersect", "diff"])))]
pub struct OpArgs {
    #[arg(long)]
    union: bool,
    #[arg(long)]
    intersect: bool,
    #[arg(long)]
    diff: bool,
    a: String,
    b: String,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("decision").required(true).args([
    "po_include", "po_empty_intersect", "graph_include", "graph_empty_intersect"
])))]
pub struct DecideArgs {
    #[arg(long)]
    po_include: bool,
    #[arg(long)]
    po_empty_intersect: bool,
    #[arg(long)]
    graph_include: bool,
    #[arg(long)]
    graph_empty_intersect: bool,
    a: String,
    b: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SaturateMode {
    Weak,
    Loop,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LanguageMode {
    Graph,
    Po,
    Hasse,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SemanticsArg {
    Causal,
    Execution,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum QueryArg {
    EmptyIntersect,
    Inclusion,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Causal => Semantics::Causal,
            SemanticsArg::Execution => Semantics::Execution,
        }
    }
}

impl From<QueryArg> for Query {
    fn from(q: QueryArg) -> Self {
        match q {
            QueryArg::EmptyIntersect => Query::EmptyIntersect,
            QueryArg::Inclusion => Query::Inclusion,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) if e.is_precondition() => 2,
            _ => 1,
        }
    }

    fn diagnostic(&self) -> Value {
        match self {
            CliError::Lib(Error::Parse {
                line,
                column,
                message,
            }) => {
                json!({"kind": "Parse", "line": line, "column": column, "message": message})
            }
            CliError::Lib(e) => json!({"kind": e.kind(), "message": e.to_string()}),
            CliError::Io { .. } => json!({"kind": "Io", "message": self.to_string()}),
            CliError::Usage(m) => json!({"kind": "Usage", "message": m}),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Input and output streams plus collected warnings of one invocation.
struct Session<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
    diagnostics: Vec<Value>,
    emit_dot: Option<String>,
}

impl Session<'_> {
    fn read(&mut self, path: &str) -> CliResult<String> {
        if path == "-" {
            if self.stdin_used {
                return Err(CliError::Usage("stdin can feed only one input".into()));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|source| CliError::Io {
                    path: "-".into(),
                    source,
                })?;
            Ok(s)
        } else {
            fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.into(),
                source,
            })
        }
    }

    /// Parses a document, unwrapping the result of an envelope so that
    /// outputs can be piped into the next command.
    fn load<T: DeserializeOwned>(&mut self, path: &str) -> CliResult<T> {
        let text = self.read(path)?;
        let v: Value = json::parse(&text)?;
        match v.as_object() {
            Some(m) if m.contains_key("ok") && m.contains_key("result") => {
                serde_json::from_value(m["result"].clone()).map_err(|e| {
                    CliError::Lib(Error::Parse {
                        line: 0,
                        column: 0,
                        message: format!("envelope result: {e}"),
                    })
                })
            }
            _ => Ok(json::parse(&text)?),
        }
    }

    fn graph(&mut self, path: &str) -> CliResult<SliceGraph> {
        let g = self.load::<SliceGraphJson>(path)?.to_graph()?;
        self.diagnostics.extend(
            g.validate()
                .into_iter()
                .map(|d| json!({"kind": d.kind, "message": d.message})),
        );
        Ok(g)
    }

    /// Writes a graph result to `out`; on stdout it becomes the result.
    fn emit(&mut self, g: &SliceGraph, out: &str) -> CliResult<Value> {
        if let Some(p) = &self.emit_dot {
            write_file(p, &json::slice_graph_to_dot(g))?;
        }
        let v = json::slice_graph_to_value(g);
        if out == "-" {
            Ok(v)
        } else {
            write_file(out, &json::to_canonical_string(&v))?;
            Ok(json!({"out": out, "vertices": g.len(), "edges": g.edges().len()}))
        }
    }
}

fn write_file(path: &str, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn execute(cmd: Command, s: &mut Session) -> CliResult<Value> {
    match cmd {
        Command::Reduce {
            input,
            out,
            simple_only,
        } => {
            let g = s.graph(&input)?;
            let r = if simple_only {
                reduction::transitive_reduce_simple(&g)
            } else {
                reduction::transitive_reduce(&g)
            };
            s.emit(&r, &out)
        }
        Command::Check(a) => {
            if a.locally_synchronized {
                let m = s.load::<MsgJson>(&a.input)?.to_msg()?;
                return Ok(Value::Bool(m.is_locally_synchronized(a.bound)));
            }
            let g = s.graph(&a.input)?;
            let answer = if a.hasse {
                reduction::is_hasse_generator(&g)
            } else if a.saturated {
                saturation::is_saturated(&g)
            } else if a.weakly_saturated {
                saturation::is_weakly_saturated_bounded(&g, a.bound)
            } else {
                saturation::is_loop_connected_bounded(&g, a.bound)
            };
            Ok(Value::Bool(answer))
        }
        Command::Saturate { mode, input, out } => {
            let g = s.graph(&input)?;
            let r = match mode {
                SaturateMode::Weak => saturation::saturate_weak(&g),
                SaturateMode::Loop => saturation::saturate_loop_connected(&g)?,
            };
            s.emit(&r, &out)
        }
        Command::Universe {
            c,
            events,
            mode,
            out,
        } => {
            if c == 0 {
                return Err(CliError::Usage("--c must be positive".into()));
            }
            if let Some(e) = events
                .iter()
                .find(|e| e.as_str() == INITIAL_EVENT || e.as_str() == FINAL_EVENT)
            {
                return Err(Error::AlphabetMismatch(format!("{e} is reserved")).into());
            }
            let g = match mode {
                LanguageMode::Graph => universe::build_bounded_slice_graph(c, &events),
                LanguageMode::Po | LanguageMode::Hasse => universe::build_bounded_hdg(c, &events),
            };
            s.emit(&g, &out)
        }
        Command::Complement {
            c,
            mode,
            input,
            out,
        } => {
            let g = s.graph(&input)?;
            let r = match mode {
                LanguageMode::Graph => universe::complement_graph_language(&g, c)?,
                LanguageMode::Po | LanguageMode::Hasse => universe::complement_po_language(&g, c)?,
            };
            s.emit(&r, &out)
        }
        Command::Op(a) => {
            let (x, y) = (s.graph(&a.a)?, s.graph(&a.b)?);
            let r = if a.union {
                ops::union(&x, &y)?
            } else if a.intersect {
                ops::intersection(&x, &y)?
            } else {
                ops::difference(&x, &y)?
            };
            s.emit(&r, &a.out)
        }
        Command::Decide(a) => {
            let (x, y) = (s.graph(&a.a)?, s.graph(&a.b)?);
            let answer = if a.po_include {
                ops::po_inclusion(&x, &y)?
            } else if a.po_empty_intersect {
                ops::po_intersect_empty(&x, &y)?
            } else if a.graph_include {
                ops::graph_inclusion(&x, &y)?
            } else {
                ops::graph_intersect_empty(&x, &y)?
            };
            Ok(Value::Bool(answer))
        }
        Command::Canon { mode, input, out } => {
            let g = s.graph(&input)?;
            let r = match mode {
                LanguageMode::Graph => ops::canonical_graph(&g)?,
                LanguageMode::Po | LanguageMode::Hasse => ops::canonical_po(&g)?,
            };
            s.emit(&r, &out)
        }
        Command::FromTrace {
            automaton,
            independence,
            out,
        } => {
            let a = s.load::<TraceAutomatonJson>(&automaton)?.to_automaton()?;
            let pairs = json::parse_independence(&independence)?;
            let mut events: Vec<String> = a
                .transitions
                .iter()
                .map(|t| t.1.clone())
                .filter(|e| e != INITIAL_EVENT && e != FINAL_EVENT)
                .collect();
            events.extend(pairs.iter().flat_map(|(x, y)| [x.clone(), y.clone()]));
            let ia = IndependenceAlphabet::new(events, pairs)?;
            let a = if a.has_markers() { a } else { a.wrapped() };
            let g = traces::traces_to_slice_graph(&a, &ia)?;
            s.emit(&g, &out)
        }
        Command::FromMsg { input, out } => {
            let m = s.load::<MsgJson>(&input)?.to_msg()?;
            let g = msc::msg_to_slice_graph(&m)?;
            s.emit(&g, &out)
        }
        Command::NetVerify {
            net,
            spec,
            semantics,
            query,
            c,
        } => {
            let n = s.load::<NetJson>(&net)?.to_net()?;
            let h = s.graph(&spec)?;
            let answer = petri::verify(&h, &n, semantics.into(), query.into(), c)?;
            Ok(Value::Bool(answer))
        }
        Command::NetHdg {
            net,
            semantics,
            c,
            k,
            out,
        } => {
            let n = s.load::<NetJson>(&net)?.to_net()?;
            let g = petri::build_net_hdg(&n, semantics.into(), k, c)?;
            s.emit(&g, &out)
        }
        Command::Selftest { seed, cases } => Ok(selftest(seed, cases)),
    }
}

/// Parses `args` (including the program name), runs the command and
/// writes the envelope to `stdout`. Returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = CliError::Usage(e.to_string());
            let env = json::envelope(false, Value::Null, vec![err.diagnostic()]);
            let _ = stdout.write_all(json::to_canonical_string(&env).as_bytes());
            return err.exit_code();
        }
    };
    let mut session = Session {
        stdin,
        stdin_used: false,
        diagnostics: Vec::new(),
        emit_dot: cli.emit_dot,
    };
    let (env, code) = match execute(cli.command, &mut session) {
        Ok(result) => {
            let ok = !matches!(result.get("ok"), Some(Value::Bool(false)));
            (json::envelope(ok, result, session.diagnostics), 0)
        }
        Err(e) => {
            session.diagnostics.push(e.diagnostic());
            (
                json::envelope(false, Value::Null, session.diagnostics),
                e.exit_code(),
            )
        }
    };
    let _ = stdout.write_all(json::to_canonical_string(&env).as_bytes());
    code
}

/// A random DAG over `a`, `b` wrapped by `ι` and `ε`, with at most one
/// redundant edge from `ι`.
fn random_wrapped_dag(rng: &mut StdRng, inner: usize) -> Dag {
    let mut labels = vec![INITIAL_EVENT.to_string()];
    labels.extend((0..inner).map(|_| if rng.gen_bool(0.5) { "a" } else { "b" }.to_string()));
    labels.push(FINAL_EVENT.to_string());
    let eps = inner + 1;
    let mut edges = Vec::new();
    for i in 1..=inner {
        for j in i + 1..=inner {
            if rng.gen_bool(0.4) {
                edges.push((i, j));
            }
        }
    }
    let has_in = |v: usize, edges: &[(usize, usize)]| edges.iter().any(|&(_, w)| w == v);
    let has_out = |v: usize, edges: &[(usize, usize)]| edges.iter().any(|&(u, _)| u == v);
    let inner_edges = edges.clone();
    edges.extend(
        (1..=inner)
            .filter(|&v| !has_in(v, &inner_edges))
            .map(|v| (0, v)),
    );
    edges.extend(
        (1..=inner)
            .filter(|&v| !has_out(v, &inner_edges))
            .map(|v| (v, eps)),
    );
    if let Some(v) = (1..=inner).find(|&v| has_in(v, &inner_edges)) {
        if rng.gen_bool(0.5) {
            edges.push((0, v));
        }
    }
    if inner == 0 {
        edges.push((0, eps));
    }
    Dag::new(labels, edges).expect("forward edges")
}

/// Checks on random DAGs: reduction preserves the order language and
/// yields a Hasse generator, a c-flow exists exactly at the global slice
/// width, and the canonical order generator is idempotent.
pub fn selftest(seed: u64, cases: usize) -> Value {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut passed = std::collections::BTreeMap::<&str, usize>::new();
    let mut failures = Vec::new();
    for case in 0..cases {
        let inner = rng.gen_range(1..=3);
        let d = random_wrapped_dag(&mut rng, inner);
        let mut check = |name: &'static str, ok: bool| {
            if ok {
                *passed.entry(name).or_default() += 1;
            } else {
                failures.push(json!({"case": case, "check": name, "dag": json::dag_to_value(&d)}));
            }
        };
        let ds = d.unit_decompositions().expect("single rooted");
        let g = SliceGraph::from_strings(&ds).expect("legal strings");
        let r = reduction::transitive_reduce(&g);
        let bound = d.len();
        check(
            "reduction_keeps_orders",
            g.enumerate_po_language(bound) == r.enumerate_po_language(bound),
        );
        check("reduction_is_hasse", reduction::is_hasse_generator(&r));
        let w = d.global_width().expect("single rooted");
        let flows = (1..=w as u32 + 1)
            .map(|c| {
                universe::has_c_flow(&d, c)
                    .map(|f| f.is_some())
                    .unwrap_or(false)
            })
            .collect::<Vec<_>>();
        check(
            "flow_at_global_width",
            flows.iter().enumerate().all(|(i, &f)| f == (i + 1 >= w)),
        );
        let canon = ops::canonical_po(&g);
        let idem = canon
            .as_ref()
            .map(|c| ops::canonical_po(c).as_ref() == Ok(c))
            .unwrap_or(false);
        check("canonical_po_idempotent", idem);
    }
    json!({
        "seed": seed,
        "cases": cases,
        "passed": passed,
        "failures": failures,
        "ok": failures.is_empty(),
    })
}
