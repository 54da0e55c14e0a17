//! Budgeted backtracking search for a copy of a pattern in a host.

use crate::bitset::BitSet;
use crate::graph::Graph;
use alloc::vec;
use alloc::vec::Vec;

/// Result of a budgeted search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    /// The search space was exhausted.
    Absent,
    /// The node budget ran out first.
    Capped,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// Finds an injective map of `pattern` into `host` (given as adjacency sets)
/// with every image in `allowed` and every pattern edge mapped to a host edge.
/// `domains`, if given, further restricts each pattern vertex.
pub fn find_copy(pattern: &Graph, host: &[BitSet], allowed: &BitSet, domains: Option<&[BitSet]>, budget: u64) -> Search<Vec<usize>> {
    let k = pattern.n();
    if k == 0 {
        return Search::Found(Vec::new());
    }
    if allowed.count() < k {
        return Search::Absent;
    }
    // Static order: repeatedly take the vertex with most placed neighbours,
    // breaking ties by degree.
    let mut order = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    let mut back = vec![0usize; k];
    for _ in 0..k {
        let v = (0..k)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (back[v], pattern.degree(v), core::cmp::Reverse(v)))
            .unwrap();
        placed[v] = true;
        order.push(v);
        for w in pattern.neighbors(v) {
            back[w] += 1;
        }
    }
    let mut pos = vec![0; k];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let earlier: Vec<Vec<usize>> = order.iter().map(|&v| pattern.neighbors(v).filter(|&w| pos[w] < pos[v]).collect()).collect();
    let mut st = State { host, allowed, domains, order: &order, earlier: &earlier, image: vec![usize::MAX; k], used: BitSet::new(allowed.capacity()), nodes: 0, budget };
    match st.rec(0) {
        Some(true) => Search::Found(st.image),
        Some(false) => Search::Absent,
        None => Search::Capped,
    }
}

struct State<'a> {
    host: &'a [BitSet],
    allowed: &'a BitSet,
    domains: Option<&'a [BitSet]>,
    order: &'a [usize],
    earlier: &'a [Vec<usize>],
    image: Vec<usize>,
    used: BitSet,
    nodes: u64,
    budget: u64,
}

impl State<'_> {
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
        if let Some(d) = self.domains {
            cand.intersect_with(&d[v]);
        }
        for &w in &self.earlier[i] {
            cand.intersect_with(&self.host[self.image[w]]);
        }
        cand.difference_with(&self.used);
        for x in cand.iter() {
            self.image[v] = x;
            self.used.insert(x);
            let r = self.rec(i + 1);
            self.used.remove(x);
            match r {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
        }
        self.image[v] = usize::MAX;
        Some(false)
    }
}
