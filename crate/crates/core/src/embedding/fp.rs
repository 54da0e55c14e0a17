//! Tree embedding into expanding hosts.

use super::expansion::{expansion_check, ExpansionReport};
use super::map::EmbeddingMap;
use super::search::Search;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, RootedTree};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Node budget of a single tree search.
pub const TREE_SEARCH_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpOutcome {
    pub map: Option<EmbeddingMap>,
    /// The budget ran out before the search space was exhausted.
    pub capped: bool,
}

/// The expansion hypothesis under which a tree on `tree_size` vertices with
/// maximum degree `d` always embeds.
pub fn fp_hypothesis(host: &Graph, tree_size: usize, d: usize) -> ExpansionReport {
    expansion_check(host, (2 * tree_size).saturating_sub(2).max(1), d + 1)
}

/// Embeds `t` into `host` by leaf extension with backtracking. Images of
/// children are tried in order of decreasing free degree.
pub fn embed_tree_fp(host: &Graph, t: &RootedTree, d: usize) -> Result<FpOutcome> {
    if host.n() == 0 {
        return Err(Error::InvalidInput("empty host".into()));
    }
    if t.n() > host.n() {
        return Err(Error::PatternTooLarge { pattern: t.n(), host: host.n() });
    }
    if t.max_degree() > d {
        return Err(Error::InvalidInput(format!("tree has maximum degree {} above {d}", t.max_degree())));
    }
    let adj = host.adjacency_sets();
    let r = embed_tree_in(&adj, &BitSet::full(host.n()), t, TREE_SEARCH_BUDGET);
    Ok(match r {
        Search::Found(img) => FpOutcome { map: Some(EmbeddingMap::new(img)), capped: false },
        Search::Absent => FpOutcome { map: None, capped: false },
        Search::Capped => FpOutcome { map: None, capped: true },
    })
}

/// Embeds `t` into the subgraph of `adj` induced by `allowed`.
pub fn embed_tree_in(adj: &[BitSet], allowed: &BitSet, t: &RootedTree, budget: u64) -> Search<Vec<usize>> {
    let order = t.bfs_order();
    if allowed.count() < t.n() {
        return Search::Absent;
    }
    let mut st = TreeState {
        adj,
        allowed,
        t,
        order: &order,
        image: vec![usize::MAX; t.n()],
        used: BitSet::new(allowed.capacity()),
        nodes: 0,
        budget,
    };
    match st.rec(0) {
        Some(true) => Search::Found(st.image),
        Some(false) => Search::Absent,
        None => Search::Capped,
    }
}

struct TreeState<'a> {
    adj: &'a [BitSet],
    allowed: &'a BitSet,
    t: &'a RootedTree,
    order: &'a [usize],
    image: Vec<usize>,
    used: BitSet,
    nodes: u64,
    budget: u64,
}

impl TreeState<'_> {
    fn rec(&mut self, i: usize) -> Option<bool> {
        if i == self.order.len() {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let v = self.order[i];
        let mut cand = self.allowed.clone();
        if let Some(p) = self.t.parent(v) {
            cand.intersect_with(&self.adj[self.image[p]]);
        }
        cand.difference_with(&self.used);
        let mut free = self.allowed.clone();
        free.difference_with(&self.used);
        let mut list: Vec<(usize, usize)> = cand.iter().map(|x| (self.adj[x].intersection_count(&free), x)).collect();
        list.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, x) in list {
            self.image[v] = x;
            self.used.insert(x);
            let r = self.rec(i + 1);
            self.used.remove(x);
            match r {
                Some(false) => {}
                other => return other,
            }
        }
        self.image[v] = usize::MAX;
        Some(false)
    }
}
