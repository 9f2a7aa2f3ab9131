//! Canonical labeling of small vertex-labeled directed multigraphs.
//!
//! Color refinement followed by individualization of the first non-singleton
//! cell; the lexicographically least relabeled graph over all branches is the
//! canonical form. Exponential only on highly symmetric inputs, which is fine
//! for the desk-scale graphs this crate handles.

/// A relabeled graph; two graphs are isomorphic iff their forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm<L> {
    pub labels: Vec<L>,
    /// Sorted, with multiplicity.
    pub edges: Vec<(usize, usize)>,
}

/// Computes the canonical form together with the permutation `old -> new`.
pub fn canonical_form<L: Ord + Clone>(
    labels: &[L],
    edges: &[(usize, usize)],
) -> (CanonicalForm<L>, Vec<usize>) {
    let n = labels.len();
    let mut out_adj = vec![Vec::new(); n];
    let mut in_adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        out_adj[u].push(v);
        in_adj[v].push(u);
    }
    let mut sorted: Vec<&L> = labels.iter().collect();
    sorted.sort();
    sorted.dedup();
    let colors: Vec<usize> = labels
        .iter()
        .map(|l| sorted.binary_search(&l).unwrap())
        .collect();
    let graph = Adjacency {
        out_adj,
        in_adj,
        edges,
    };
    let colors = graph.refine(colors);
    let mut best: Option<(CanonicalForm<L>, Vec<usize>)> = None;
    graph.search(labels, colors, &mut best);
    best.unwrap_or_else(|| {
        (
            CanonicalForm {
                labels: Vec::new(),
                edges: Vec::new(),
            },
            Vec::new(),
        )
    })
}

struct Adjacency<'a> {
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    edges: &'a [(usize, usize)],
}

impl Adjacency<'_> {
    /// Iterated refinement; the order of old colors is preserved.
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let n = colors.len();
        let mut classes = count_classes(&colors);
        loop {
            let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
                .map(|v| {
                    let mut o: Vec<usize> = self.out_adj[v].iter().map(|&w| colors[w]).collect();
                    let mut i: Vec<usize> = self.in_adj[v].iter().map(|&w| colors[w]).collect();
                    o.sort_unstable();
                    i.sort_unstable();
                    (colors[v], o, i)
                })
                .collect();
            let mut uniq: Vec<&(usize, Vec<usize>, Vec<usize>)> = sigs.iter().collect();
            uniq.sort();
            uniq.dedup();
            colors = sigs
                .iter()
                .map(|s| uniq.binary_search(&s).unwrap())
                .collect();
            let next = uniq.len();
            if next == classes {
                return colors;
            }
            classes = next;
        }
    }

    fn search<L: Ord + Clone>(
        &self,
        labels: &[L],
        colors: Vec<usize>,
        best: &mut Option<(CanonicalForm<L>, Vec<usize>)>,
    ) {
        let n = colors.len();
        let mut counts = vec![0usize; n];
        for &c in &colors {
            counts[c] += 1;
        }
        let Some(cell) = (0..n).find(|&c| counts[c] > 1) else {
            let form = self.relabel(labels, &colors);
            if best.as_ref().is_none_or(|(b, _)| form < *b) {
                *best = Some((form, colors));
            }
            return;
        };
        for v in (0..n).filter(|&v| colors[v] == cell) {
            let split: Vec<usize> = (0..n)
                .map(|u| 2 * colors[u] + usize::from(colors[u] == cell && u != v))
                .collect();
            let refined = self.refine(compact(&split));
            self.search(labels, refined, best);
        }
    }

    fn relabel<L: Clone>(&self, labels: &[L], perm: &[usize]) -> CanonicalForm<L> {
        let mut new_labels = vec![None; labels.len()];
        for (v, l) in labels.iter().enumerate() {
            new_labels[perm[v]] = Some(l.clone());
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        edges.sort_unstable();
        CanonicalForm {
            labels: new_labels.into_iter().map(Option::unwrap).collect(),
            edges,
        }
    }
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn compact(colors: &[usize]) -> Vec<usize> {
    let mut uniq = colors.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    colors
        .iter()
        .map(|c| uniq.binary_search(c).unwrap())
        .collect()
}
