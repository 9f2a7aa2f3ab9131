//! Boolean operations, decision procedures and canonical forms for graph and
//! partial-order languages, all reduced to regular operations on slice
//! languages.

use crate::error::{Error, Result};
use crate::reduction::transitive_reduce;
use crate::saturation::{is_saturated, saturate_weak};
use crate::slice_graph::SliceGraph;

fn from_minimal(a: &crate::automaton::SliceAutomaton) -> Result<SliceGraph> {
    SliceGraph::from_automaton(&a.minimize())
}

/// Slice-language union.
pub fn union(sg1: &SliceGraph, sg2: &SliceGraph) -> Result<SliceGraph> {
    from_minimal(&sg1.to_automaton().union(&sg2.to_automaton()))
}

/// Slice-language intersection.
pub fn intersection(sg1: &SliceGraph, sg2: &SliceGraph) -> Result<SliceGraph> {
    from_minimal(&sg1.to_automaton().intersection(&sg2.to_automaton()))
}

/// Slice-language difference `L(sg1) \ L(sg2)`.
pub fn difference(sg1: &SliceGraph, sg2: &SliceGraph) -> Result<SliceGraph> {
    from_minimal(&sg1.to_automaton().difference(&sg2.to_automaton()))
}

fn require_saturated(sg: &SliceGraph) -> Result<()> {
    if is_saturated(sg) {
        Ok(())
    } else {
        Err(Error::NotSaturated)
    }
}

/// `L_G(sg1) ⊆ L_G(sg2)`; with `sg2` saturated this is slice-level inclusion.
pub fn graph_inclusion(sg1: &SliceGraph, sg2: &SliceGraph) -> Result<bool> {
    require_saturated(sg2)?;
    Ok(sg1.to_automaton().is_subset_of(&sg2.to_automaton()))
}

/// `L_G(sg1) ∩ L_G(sg2) = ∅`; with either side saturated this is
/// slice-level emptiness of the intersection.
pub fn graph_intersect_empty(sg1: &SliceGraph, sg2: &SliceGraph) -> Result<bool> {
    if !is_saturated(sg1) {
        require_saturated(sg2)?;
    }
    Ok(sg1
        .to_automaton()
        .intersection(&sg2.to_automaton())
        .is_empty())
}

/// The saturated Hasse diagram generator of the order language of `sg`.
pub fn hasse_saturated(sg: &SliceGraph) -> SliceGraph {
    saturate_weak(&transitive_reduce(sg))
}

/// `L_PO(sg1) ⊆ L_PO(sg2)`, decided on Hasse diagram generators.
pub fn po_inclusion(sg1: &SliceGraph, sg2: &SliceGraph) -> Result<bool> {
    require_saturated(sg2)?;
    let (h1, h2) = (hasse_saturated(sg1), hasse_saturated(sg2));
    Ok(h1.to_automaton().is_subset_of(&h2.to_automaton()))
}

/// `L_PO(sg1) ∩ L_PO(sg2) = ∅`, decided on Hasse diagram generators.
pub fn po_intersect_empty(sg1: &SliceGraph, sg2: &SliceGraph) -> Result<bool> {
    if !is_saturated(sg1) {
        require_saturated(sg2)?;
    }
    let (h1, h2) = (hasse_saturated(sg1), hasse_saturated(sg2));
    Ok(h1
        .to_automaton()
        .intersection(&h2.to_automaton())
        .is_empty())
}

/// The canonical minimal generator of `sg` without a saturation check.
pub fn canonical_unchecked(sg: &SliceGraph) -> Result<SliceGraph> {
    Ok(from_minimal(&sg.to_automaton())?.canonical_order())
}

/// The slice graph of the minimal DFA; saturated inputs with equal graph
/// languages yield equal outputs.
pub fn canonical_graph(sg: &SliceGraph) -> Result<SliceGraph> {
    require_saturated(sg)?;
    canonical_unchecked(sg)
}

/// The canonical saturated Hasse diagram generator; saturated inputs with
/// equal order languages yield equal outputs.
pub fn canonical_po(sg: &SliceGraph) -> Result<SliceGraph> {
    require_saturated(sg)?;
    canonical_unchecked(&hasse_saturated(sg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag::Dag;

    fn ud(edges: &[(usize, usize)]) -> SliceGraph {
        let d = Dag::new(
            vec!["ι".into(), "a".into(), "b".into(), "ε".into()],
            edges.to_vec(),
        )
        .unwrap();
        SliceGraph::from_strings(&d.unit_decompositions().unwrap()).unwrap()
    }

    #[test]
    fn diamond_pair() {
        let d = ud(&[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let d2 = ud(&[(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)]);
        assert!(intersection(&d, &d2).unwrap().is_empty());
        assert!(graph_intersect_empty(&d, &d2).unwrap());
        assert!(!po_intersect_empty(&d, &d2).unwrap());
        assert!(po_inclusion(&d, &d2).unwrap());
        assert!(po_inclusion(&d2, &d).unwrap());
        assert_eq!(canonical_po(&d).unwrap(), canonical_po(&d2).unwrap());
        assert_ne!(canonical_graph(&d).unwrap(), canonical_graph(&d2).unwrap());
    }

    #[test]
    fn canonical_graph_is_idempotent() {
        let d = ud(&[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let c = canonical_graph(&d).unwrap();
        assert_eq!(canonical_graph(&c).unwrap(), c);
        assert_eq!(canonical_graph(&union(&d, &d).unwrap()).unwrap(), c);
    }

    #[test]
    fn unsaturated_inputs_are_rejected() {
        let d = ud(&[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let first = d.enumerate_slice_language(4).into_iter().next().unwrap();
        let single = SliceGraph::from_string(&first).unwrap();
        assert_eq!(graph_inclusion(&d, &single), Err(Error::NotSaturated));
        assert_eq!(canonical_po(&single), Err(Error::NotSaturated));
        assert!(graph_inclusion(&single, &d).unwrap());
    }
}
