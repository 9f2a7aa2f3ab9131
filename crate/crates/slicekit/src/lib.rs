//! Regular slice languages over unit slices.
//!
//! A slice graph generates a language of unit-slice strings; composing the
//! slices of a string yields a DAG and closing it yields a partial order.
//! The crate implements transitive reduction of slice graphs, saturation
//! checks and constructions, globally bounded universes and complements,
//! boolean operations and decisions, plus frontends for Mazurkiewicz traces,
//! message sequence graphs and bounded p/t-nets.

pub mod automaton;
pub mod canon;
pub mod cli;
pub mod dag;
pub mod error;
pub mod json;
pub mod msc;
pub mod ops;
pub mod petri;
pub mod reduction;
pub mod saturation;
pub mod slice;
pub mod slice_graph;
pub mod traces;
pub mod universe;

pub use automaton::SliceAutomaton;
pub use dag::{Cutting, Dag, PartialOrder};
pub use error::{Error, Result};
pub use slice::{
    independent, End, Event, Link, Slice, Source, UnitSlice, FINAL_EVENT, INITIAL_EVENT,
};
pub use slice_graph::{Diagnostic, SliceGraph};
