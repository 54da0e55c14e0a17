//! Tree decompositions of small graphs from elimination orderings.
//!
//! Components up to [`EXACT_TREEWIDTH_CAP`] vertices are solved by branch and
//! bound over elimination orderings, memoised on the eliminated set (the
//! elimination graph does not depend on the order). Larger components use the
//! min-fill ordering.

use crate::bitset::BitSet;
use crate::graph::Graph;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

pub const EXACT_TREEWIDTH_CAP: usize = 40;
const NODE_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    /// Edges of the decomposition tree, between bag indices.
    pub tree_edges: Vec<(usize, usize)>,
    pub width: usize,
    /// Best proven lower bound on the treewidth.
    pub lower_bound: usize,
    /// Whether `width` is proven optimal.
    pub exact: bool,
    /// Whether `width` is at most the requested cap.
    pub within_cap: bool,
}

impl TreeDecomposition {
    /// Vertex coverage, edge coverage, tree shape and running intersection.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let b = self.bags.len();
        if g.n() == 0 {
            return true;
        }
        if b == 0 || self.tree_edges.len() + 1 != b {
            return false;
        }
        let tree = match Graph::new(b, self.tree_edges.iter().copied()) {
            Ok(t) => t,
            Err(_) => return false,
        };
        if !tree.is_connected() {
            return false;
        }
        let sets: Vec<BitSet> = self.bags.iter().map(|bag| BitSet::from_iter(g.n(), bag.iter().copied())).collect();
        if g.edges().any(|(u, v)| !sets.iter().any(|s| s.contains(u) && s.contains(v))) {
            return false;
        }
        (0..g.n()).all(|v| {
            let holding: Vec<usize> = (0..b).filter(|&i| sets[i].contains(v)).collect();
            !holding.is_empty() && tree.induced_subgraph(&holding).is_connected()
        })
    }
}

pub fn tree_decomposition_small(g: &Graph, width_cap: usize) -> TreeDecomposition {
    let n = g.n();
    let mut order = Vec::with_capacity(n);
    let mut lower = 0;
    let mut exact = true;
    for comp in g.components() {
        let sub = g.induced_subgraph(&comp);
        let (local, lb, ex) = if comp.len() <= EXACT_TREEWIDTH_CAP {
            exact_order(&sub)
        } else {
            (min_fill_order(&sub), minor_min_width(&sub), false)
        };
        lower = lower.max(lb);
        exact &= ex;
        order.extend(local.into_iter().map(|i| comp[i]));
    }
    let mut td = from_order(g, &order);
    td.lower_bound = lower.min(td.width);
    td.exact = exact || td.lower_bound == td.width;
    td.within_cap = td.width <= width_cap;
    td
}

/// Width of eliminating `order`, with `adj` as bitsets.
fn elimination_width(g: &Graph, order: &[usize]) -> usize {
    let mut adj = g.adjacency_sets();
    let mut gone = BitSet::new(g.n());
    let mut width = 0;
    for &v in order {
        let mut nb = adj[v].clone();
        nb.difference_with(&gone);
        width = width.max(nb.count());
        for u in nb.iter() {
            adj[u].union_with(&nb);
            adj[u].remove(u);
        }
        gone.insert(v);
    }
    width
}

fn min_fill_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut adj = g.adjacency_sets();
    let mut alive = BitSet::full(n);
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best = (usize::MAX, usize::MAX, 0);
        for v in alive.iter() {
            let nb = adj[v].intersection(&alive);
            let d = nb.count();
            let mut fill = 0;
            for u in nb.iter() {
                fill += d - 1 - adj[u].intersection_count(&nb);
            }
            if (fill, d) < (best.0, best.1) {
                best = (fill, d, v);
            }
        }
        let v = best.2;
        let nb = adj[v].intersection(&alive);
        for u in nb.iter() {
            adj[u].union_with(&nb);
            adj[u].remove(u);
        }
        alive.remove(v);
        order.push(v);
    }
    order
}

/// Lower bound by repeatedly contracting a minimum-degree vertex into its
/// minimum-degree neighbour.
fn minor_min_width(g: &Graph) -> usize {
    let n = g.n();
    let mut adj = g.adjacency_sets();
    let mut alive = BitSet::full(n);
    let mut best = 0;
    while alive.count() > 1 {
        let v = alive.iter().min_by_key(|&v| (adj[v].intersection_count(&alive), v)).unwrap();
        let nb = adj[v].intersection(&alive);
        best = best.max(nb.count());
        alive.remove(v);
        if let Some(u) = nb.iter().min_by_key(|&u| (adj[u].intersection_count(&alive), u)) {
            for w in nb.iter().filter(|&w| w != u) {
                adj[u].insert(w);
                adj[w].insert(u);
            }
        }
    }
    best
}

fn exact_order(g: &Graph) -> (Vec<usize>, usize, bool) {
    let n = g.n();
    let ub_order = min_fill_order(g);
    let ub = elimination_width(g, &ub_order);
    let lb = minor_min_width(g);
    if lb >= ub || n <= 1 {
        return (ub_order, ub, true);
    }
    let adj: Vec<u64> = (0..n).map(|v| g.neighbors(v).fold(0u64, |m, u| m | 1 << u)).collect();
    let mut bb = Bb { n, best: ub, best_order: ub_order, memo: BTreeMap::new(), nodes: 0, lb, path: Vec::new() };
    let done = bb.run(adj, 0, 0);
    let w = bb.best;
    (bb.best_order, if done { w } else { lb }, done)
}

struct Bb {
    n: usize,
    best: usize,
    best_order: Vec<usize>,
    memo: BTreeMap<u64, usize>,
    nodes: u64,
    lb: usize,
    path: Vec<usize>,
}

impl Bb {
    /// Returns false if the node budget ran out.
    fn run(&mut self, adj: Vec<u64>, gone: u64, width: usize) -> bool {
        let left = self.n - gone.count_ones() as usize;
        if width.max(self.lb) >= self.best {
            return true;
        }
        if left <= width + 1 {
            // Whatever remains fits in one bag.
            self.best = width.max(left.saturating_sub(1));
            self.best_order = self.path.clone();
            self.best_order.extend((0..self.n).filter(|&v| gone >> v & 1 == 0));
            return true;
        }
        if let Some(&w) = self.memo.get(&gone) {
            if w <= width {
                return true;
            }
        }
        self.memo.insert(gone, width);
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return false;
        }
        let alive: Vec<usize> = (0..self.n).filter(|&v| gone >> v & 1 == 0).collect();
        // A simplicial vertex can always be eliminated first.
        let simplicial = alive.iter().copied().find(|&v| {
            let nb = adj[v];
            let mut rest = nb;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if (adj[u] | 1 << u) & nb != nb {
                    return false;
                }
            }
            true
        });
        let mut cands: Vec<usize> = match simplicial {
            Some(v) => vec![v],
            None => alive,
        };
        cands.sort_by_key(|&v| (adj[v].count_ones(), v));
        for v in cands {
            let d = adj[v].count_ones() as usize;
            if d.max(width) >= self.best {
                continue;
            }
            let mut next = adj.clone();
            let nb = adj[v];
            let mut rest = nb;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                next[u] = (next[u] | nb) & !(1 << u) & !(1 << v);
            }
            next[v] = 0;
            self.path.push(v);
            let ok = self.run(next, gone | 1 << v, width.max(d));
            self.path.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

fn from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj = g.adjacency_sets();
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    for &v in order {
        let higher: Vec<usize> = adj[v].iter().filter(|&u| pos[u] > pos[v]).collect();
        let hs = BitSet::from_iter(n, higher.iter().copied());
        for &u in &higher {
            adj[u].union_with(&hs);
            adj[u].remove(u);
        }
        parent[pos[v]] = higher.iter().map(|&u| pos[u]).min();
        let mut bag = higher;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    let mut tree_edges = Vec::new();
    let mut last_root: Option<usize> = None;
    for (i, p) in parent.iter().enumerate() {
        match p {
            Some(p) => tree_edges.push((i, *p)),
            None => {
                if let Some(r) = last_root {
                    tree_edges.push((r, i));
                }
                last_root = Some(i);
            }
        }
    }
    let width = bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1);
    TreeDecomposition { bags, tree_edges, width, lower_bound: 0, exact: false, within_cap: true }
}
