//! Tree-or-complete-multipartite dichotomy on a two-coloured complete graph.

use super::fp::embed_tree_in;
use super::map::EmbeddingMap;
use super::search::Search;
use crate::bitset::BitSet;
use crate::graph::{Colour, RootedTree, TwoColouring};
use alloc::vec;
use alloc::vec::Vec;

/// Node budget of the exhaustive part search.
pub const PART_SEARCH_BUDGET: u64 = 2_000_000;
/// Largest `N` for which the part search falls back to exhaustive search.
pub const EXHAUSTIVE_PART_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub enum Dichotomy {
    /// A copy of the tree in the tree colour.
    Tree(EmbeddingMap),
    /// `q` disjoint parts, every cross pair in the other colour.
    Parts(Vec<Vec<usize>>),
    /// Neither side was found.
    DualFailure { tree_capped: bool, parts_exhausted: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DichotomyReport {
    pub outcome: Dichotomy,
    /// Whether `N ≥ 20 n0 d q` holds.
    pub size_hypothesis: bool,
    pub min_part: usize,
}

/// Smallest admissible part: `⌈N / (5dq)⌉`.
pub fn min_part_size(n: usize, d: usize, q: usize) -> usize {
    let den = (5 * d * q).max(1);
    n.div_ceil(den).max(1)
}

/// Looks for `tree` in `tree_colour` inside the complete graph coloured by
/// `meta`, and otherwise for `q` parts of size at least `N/(5dq)` pairwise
/// joined only by the other colour.
pub fn tree_or_qpartite(meta: &TwoColouring, tree: Option<&RootedTree>, d: usize, q: usize, tree_colour: Colour) -> DichotomyReport {
    let n = meta.graph().n();
    let n0 = tree.map_or(0, |t| t.n());
    let size_hypothesis = n >= 20 * n0 * d * q;
    let min_part = min_part_size(n, d, q);
    let mut tree_capped = false;
    let side = meta.subgraph(tree_colour);
    let adj = side.adjacency_sets();
    if let Some(t) = tree {
        match embed_tree_in(&adj, &BitSet::full(n), t, super::fp::TREE_SEARCH_BUDGET) {
            Search::Found(img) => {
                return DichotomyReport { outcome: Dichotomy::Tree(EmbeddingMap::new(img)), size_hypothesis, min_part }
            }
            Search::Capped => tree_capped = true,
            Search::Absent => {}
        }
    }
    if let Some(parts) = greedy_parts(&adj, n, q, min_part) {
        return DichotomyReport { outcome: Dichotomy::Parts(parts), size_hypothesis, min_part };
    }
    let mut parts_exhausted = false;
    if n <= EXHAUSTIVE_PART_CAP {
        match exhaustive_parts(&adj, n, q, min_part) {
            Search::Found(p) => return DichotomyReport { outcome: Dichotomy::Parts(p), size_hypothesis, min_part },
            Search::Absent => parts_exhausted = true,
            Search::Capped => {}
        }
    }
    DichotomyReport { outcome: Dichotomy::DualFailure { tree_capped, parts_exhausted }, size_hypothesis, min_part }
}

fn components(adj: &[BitSet], alive: &BitSet) -> Vec<Vec<usize>> {
    let mut seen = BitSet::new(alive.capacity());
    let mut out = Vec::new();
    for v in alive.iter() {
        if seen.contains(v) {
            continue;
        }
        seen.insert(v);
        let mut comp = vec![v];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for w in adj[u].intersection(alive).iter() {
                if !seen.contains(w) {
                    seen.insert(w);
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Packs tree-colour components into `q` bins, smallest bin first; while that fails, peels the
/// highest-degree vertex of the largest component.
fn greedy_parts(adj: &[BitSet], n: usize, q: usize, min_part: usize) -> Option<Vec<Vec<usize>>> {
    if q == 0 {
        return Some(Vec::new());
    }
    let mut alive = BitSet::full(n);
    while alive.count() >= q * min_part {
        let mut comps = components(adj, &alive);
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let mut bins: Vec<Vec<usize>> = vec![Vec::new(); q];
        for c in &comps {
            let bin = (0..q).min_by_key(|&i| bins[i].len()).unwrap();
            bins[bin].extend_from_slice(c);
        }
        if bins.iter().all(|b| b.len() >= min_part) {
            for b in &mut bins {
                b.sort_unstable();
            }
            return Some(bins);
        }
        let largest = &comps[0];
        let v = largest.iter().copied().max_by_key(|&v| (adj[v].intersection_count(&alive), core::cmp::Reverse(v)))?;
        alive.remove(v);
    }
    None
}

fn exhaustive_parts(adj: &[BitSet], n: usize, q: usize, min_part: usize) -> Search<Vec<Vec<usize>>> {
    let mut label = vec![usize::MAX; n];
    let mut sizes = vec![0usize; q];
    let mut nodes = 0u64;
    fn rec(v: usize, adj: &[BitSet], label: &mut [usize], sizes: &mut [usize], q: usize, m: usize, nodes: &mut u64) -> Option<bool> {
        let n = label.len();
        let missing: usize = sizes.iter().map(|&s| m.saturating_sub(s)).sum();
        if missing == 0 {
            return Some(true);
        }
        if n - v < missing {
            return Some(false);
        }
        *nodes += 1;
        if *nodes > PART_SEARCH_BUDGET {
            return None;
        }
        let open = sizes.iter().take_while(|&&s| s > 0).count();
        for f in 0..q.min(open + 1) {
            let ok = (0..v).all(|u| label[u] == usize::MAX || label[u] == f || !adj[v].contains(u));
            if ok {
                label[v] = f;
                sizes[f] += 1;
                match rec(v + 1, adj, label, sizes, q, m, nodes) {
                    Some(false) => {}
                    other => return other,
                }
                sizes[f] -= 1;
                label[v] = usize::MAX;
            }
        }
        rec(v + 1, adj, label, sizes, q, m, nodes)
    }
    match rec(0, adj, &mut label, &mut sizes, q, min_part, &mut nodes) {
        Some(true) => {
            let mut parts = vec![Vec::new(); q];
            for (v, &l) in label.iter().enumerate() {
                if l != usize::MAX {
                    parts[l].push(v);
                }
            }
            Search::Found(parts)
        }
        Some(false) => Search::Absent,
        None => Search::Capped,
    }
}
