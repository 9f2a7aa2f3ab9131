mod common;

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use common::*;
use serde_json::Value;
use slicekit::{json, ops, petri, reduction};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run_with_stdin(args: &[&str], stdin: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_slicekit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn run(args: &[&str]) -> (i32, String) {
    run_with_stdin(args, "")
}

/// Compares with `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
    }
    let expected =
        std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

fn result(stdout: &str) -> Value {
    let v: Value = serde_json::from_str(stdout).unwrap();
    v["result"].clone()
}

#[test]
fn po_empty_intersect_of_diamonds_is_false() {
    let (code, out) = run(&[
        "decide",
        "--po-empty-intersect",
        &fixture("diamond.json"),
        &fixture("diamond_closed.json"),
    ]);
    assert_eq!(code, 0);
    golden("decide_po_empty_intersect.json", &out);
    let lib = ops::po_intersect_empty(&ud(&diamond()), &ud(&diamond_closed())).unwrap();
    assert_eq!(result(&out), Value::Bool(lib));
}

#[test]
fn reduce_then_check_hasse_through_a_pipe() {
    let (code, reduced) = run(&["reduce", "--in", &fixture("diamond_closed.json")]);
    assert_eq!(code, 0);
    golden("reduce_diamond_closed.json", &reduced);
    let lib = reduction::transitive_reduce(&ud(&diamond_closed()));
    assert_eq!(result(&reduced), json::slice_graph_to_value(&lib));
    let (code, checked) = run_with_stdin(&["check", "--hasse", "-"], &reduced);
    assert_eq!(code, 0);
    assert_eq!(result(&checked), Value::Bool(true));
}

#[test]
fn canonical_po_is_byte_identical_across_presentations() {
    let (c1, a) = run(&["canon", "--mode", "po", &fixture("diamond.json")]);
    let (c2, b) = run(&["canon", "--mode", "po", &fixture("diamond_closed.json")]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    golden("canon_po_diamond.json", &a);
    let (_, g1) = run(&["canon", "--mode", "graph", &fixture("diamond.json")]);
    let (_, g2) = run(&["canon", "--mode", "graph", &fixture("diamond_closed.json")]);
    assert_ne!(g1, g2);
    let lib = ops::canonical_po(&ud(&diamond())).unwrap();
    assert_eq!(result(&a), json::slice_graph_to_value(&lib));
}

#[test]
fn precondition_violation_exits_with_two() {
    let (_, single) = run(&[
        "op",
        "--intersect",
        &fixture("chain_ab.json"),
        &fixture("chain_ab.json"),
    ]);
    let (code, out) = run_with_stdin(
        &["decide", "--graph-include", &fixture("diamond.json"), "-"],
        &single,
    );
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&["canon", "--mode", "po", &fixture("bad_syntax.json")]);
    assert_eq!(code, 1);
    golden("parse_error.json", &out);
    let not_saturated = {
        let d = diamond();
        let first = d.unit_decompositions().unwrap().into_iter().next().unwrap();
        json::to_canonical_string(&json::slice_graph_to_value(
            &slicekit::SliceGraph::from_string(&first).unwrap(),
        ))
    };
    let (code, out) = run_with_stdin(&["canon", "--mode", "graph", "-"], &not_saturated);
    assert_eq!(code, 2);
    golden("not_saturated.json", &out);
}

#[test]
fn usage_errors_exit_with_one() {
    let (code, out) = run(&["decide", &fixture("diamond.json")]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ok"], Value::Bool(false));
    assert_eq!(v["diagnostics"][0]["kind"], "Usage");
}

#[test]
fn net_verification_matches_library() {
    let net = fixture("loops_net.json");
    for (spec, sem, query, d) in [
        ("diamond.json", "causal", "inclusion", diamond()),
        ("chain_ab.json", "causal", "empty-intersect", chain_ab()),
        ("chain_ab.json", "execution", "empty-intersect", chain_ab()),
    ] {
        let (code, out) = run(&[
            "net-verify",
            "--net",
            &net,
            "--spec",
            &fixture(spec),
            "--semantics",
            sem,
            "--query",
            query,
        ]);
        assert_eq!(code, 0);
        let semantics = if sem == "causal" {
            petri::Semantics::Causal
        } else {
            petri::Semantics::Execution
        };
        let q = if query == "inclusion" {
            petri::Query::Inclusion
        } else {
            petri::Query::EmptyIntersect
        };
        let lib = petri::verify(&ud(&d), &loops_net(), semantics, q, None).unwrap();
        assert_eq!(result(&out), Value::Bool(lib));
    }
    let (code, out) = run(&[
        "net-hdg",
        "--net",
        &net,
        "--semantics",
        "causal",
        "--c",
        "2",
        "--k",
        "1",
    ]);
    assert_eq!(code, 0);
    golden("net_hdg_causal.json", &out);
}

#[test]
fn frontends_and_universe() {
    let (code, out) = run(&[
        "from-trace",
        "--automaton",
        &fixture("trace_ab.json"),
        "--independence",
        "a:b",
    ]);
    assert_eq!(code, 0);
    golden("from_trace.json", &out);
    let (code, out) = run(&["from-msg", "--in", &fixture("ping_pong.json")]);
    assert_eq!(code, 0);
    golden("from_msg.json", &out);
    let (code, out) = run(&[
        "check",
        "--locally-synchronized",
        &fixture("ping_pong.json"),
    ]);
    assert_eq!((code, result(&out)), (0, Value::Bool(true)));
    let (code, out) = run(&["universe", "--c", "1", "--events", "a,b", "--mode", "graph"]);
    assert_eq!(code, 0);
    golden("universe_c1.json", &out);
    let lib = slicekit::universe::build_bounded_slice_graph(1, &labels(&["a", "b"]));
    assert_eq!(result(&out), json::slice_graph_to_value(&lib));
}

#[test]
fn dot_export_and_output_files() {
    let dir = std::env::temp_dir().join(format!("slicekit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("u.json");
    let dot = dir.join("u.dot");
    let (code, stdout) = run(&[
        "universe",
        "--c",
        "1",
        "--events",
        "a",
        "--mode",
        "hasse",
        "--out",
        out.to_str().unwrap(),
        "--emit-dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(result(&stdout)["vertices"], 3);
    assert!(std::fs::read_to_string(&dot)
        .unwrap()
        .starts_with("digraph"));
    let (code, checked) = run(&["check", "--saturated", out.to_str().unwrap()]);
    assert_eq!((code, result(&checked)), (0, Value::Bool(true)));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_is_reproducible() {
    let (c1, a) = run(&["selftest", "--seed", "3", "--cases", "3"]);
    let (c2, b) = run(&["selftest", "--seed", "3", "--cases", "3"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert_eq!(result(&a)["failures"], Value::Array(Vec::new()));
}
