//! Induced cycle search.
//!
//! The search is restricted to the 2-core. Lengths `min_len ..= min_len + 6`
//! are tried one at a time, rooted at the smallest cycle vertex, so short
//! cycles are preferred. If none exists, an open-ended depth-first search over
//! induced paths decides the remaining lengths exhaustively, pruning any path
//! whose end can no longer reach a closing vertex.

use super::Graph;
use alloc::vec;
use alloc::vec::Vec;

const SHORT_WINDOW: usize = 6;

/// Returns an induced cycle of length at least `min_len`, or `None` if there is none.
pub fn find_induced_cycle(g: &Graph, min_len: usize) -> Option<Vec<usize>> {
    let min_len = min_len.max(3);
    let core = two_core(g);
    let core_size = core.iter().filter(|&&c| c).count();
    if core_size < min_len {
        return None;
    }
    let mut s = Search::new(g, core, min_len);
    let top = (min_len + SHORT_WINDOW).min(core_size);
    for len in min_len..=top {
        for r in 0..g.n() {
            if s.core[r] {
                if let Some(c) = s.run(r, Some(len)) {
                    return Some(c);
                }
            }
        }
    }
    if top == core_size {
        return None;
    }
    for r in 0..g.n() {
        if s.core[r] {
            if let Some(c) = s.run(r, None) {
                return Some(c);
            }
        }
    }
    None
}

/// True if `cycle` lists at least three distinct vertices forming an induced cycle in order.
pub fn is_induced_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let k = cycle.len();
    if k < 3 || cycle.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != k {
        return false;
    }
    if !(0..k).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % k])) {
        return false;
    }
    g.induced_subgraph(cycle).m() == k
}

fn two_core(g: &Graph) -> Vec<bool> {
    let mut deg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; g.n()];
    let mut stack: Vec<usize> = (0..g.n()).filter(|&v| deg[v] < 2).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    alive
}

struct Search<'a> {
    g: &'a Graph,
    core: Vec<bool>,
    min_len: usize,
    on_path: Vec<bool>,
    /// Number of interior path vertices adjacent to each vertex.
    interior: Vec<u32>,
    path: Vec<usize>,
    root: usize,
    dist_to_root: Vec<usize>,
    mark: Vec<u32>,
    stamp: u32,
    queue: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, core: Vec<bool>, min_len: usize) -> Self {
        let n = g.n();
        Search {
            g,
            core,
            min_len,
            on_path: vec![false; n],
            interior: vec![0; n],
            path: Vec::new(),
            root: 0,
            dist_to_root: vec![usize::MAX; n],
            mark: vec![0; n],
            stamp: 0,
            queue: Vec::new(),
        }
    }

    fn usable(&self, v: usize) -> bool {
        v > self.root && self.core[v] && !self.on_path[v] && self.interior[v] == 0
    }

    fn run(&mut self, r: usize, exact: Option<usize>) -> Option<Vec<usize>> {
        self.root = r;
        if exact.is_some() {
            self.compute_root_distances();
        }
        self.path.clear();
        self.path.push(r);
        self.on_path[r] = true;
        let mut found = None;
        let firsts: Vec<usize> = self.g.neighbors(r).filter(|&w| self.usable(w)).collect();
        for w in firsts {
            self.path.push(w);
            self.on_path[w] = true;
            let res = self.extend(exact);
            self.on_path[w] = false;
            self.path.pop();
            if res.is_some() {
                found = res;
                break;
            }
        }
        self.on_path[r] = false;
        found
    }

    fn compute_root_distances(&mut self) {
        let r = self.root;
        self.dist_to_root.iter_mut().for_each(|d| *d = usize::MAX);
        self.dist_to_root[r] = 0;
        let mut queue = vec![r];
        let mut i = 0;
        while i < queue.len() {
            let v = queue[i];
            i += 1;
            for w in self.g.neighbors(v) {
                if self.dist_to_root[w] == usize::MAX && self.core[w] && (w >= r) {
                    self.dist_to_root[w] = self.dist_to_root[v] + 1;
                    queue.push(w);
                }
            }
        }
    }

    /// Path is `root, p1, .., last`; tries to extend or close it.
    fn extend(&mut self, exact: Option<usize>) -> Option<Vec<usize>> {
        let last = *self.path.last().unwrap();
        let k = self.path.len();
        if let Some(len) = exact {
            if k >= len {
                return None;
            }
        }
        // `last` becomes interior for every extension.
        let (r, g) = (self.root, self.g);
        for w in g.neighbors(last) {
            if !self.usable(w) {
                continue;
            }
            let closes = g.has_edge(w, r);
            if closes {
                let len = k + 1;
                let ok = match exact {
                    Some(l) => len == l,
                    None => len >= self.min_len,
                };
                if ok && k >= 2 {
                    let mut c = self.path.clone();
                    c.push(w);
                    return Some(c);
                }
                continue;
            }
            if let Some(l) = exact {
                let d = self.dist_to_root[w];
                if d == usize::MAX || k + d > l {
                    continue;
                }
            }
            self.push_interior(last, 1);
            self.path.push(w);
            self.on_path[w] = true;
            let viable = exact.is_some() || self.can_close(w);
            let res = if viable { self.extend(exact) } else { None };
            self.on_path[w] = false;
            self.path.pop();
            self.push_interior(last, u32::MAX);
            if res.is_some() {
                return res;
            }
        }
        None
    }

    fn push_interior(&mut self, v: usize, delta: u32) {
        for w in self.g.neighbors(v) {
            self.interior[w] = self.interior[w].wrapping_add(delta);
        }
    }

    /// Whether some induced continuation from `from` can still reach a
    /// neighbour of the root.
    fn can_close(&mut self, from: usize) -> bool {
        self.stamp += 1;
        let stamp = self.stamp;
        self.queue.clear();
        self.queue.push(from);
        self.mark[from] = stamp;
        let mut i = 0;
        while i < self.queue.len() {
            let v = self.queue[i];
            i += 1;
            for w in self.g.neighbors(v) {
                if self.mark[w] == stamp || !self.usable(w) {
                    continue;
                }
                if self.g.has_edge(w, self.root) {
                    return true;
                }
                self.mark[w] = stamp;
                self.queue.push(w);
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let c = find_induced_cycle(&Graph::cycle(6), 5).unwrap();
        assert_eq!(c.len(), 6);
        assert!(find_induced_cycle(&Graph::complete(4), 5).is_none());
        let p = Graph::petersen();
        let c = find_induced_cycle(&p, 5).unwrap();
        assert_eq!(c.len(), 5);
        assert!(is_induced_cycle(&p, &c));
    }

    #[test]
    fn long_cycle_beyond_window() {
        let g = Graph::cycle(40);
        assert_eq!(find_induced_cycle(&g, 5).unwrap().len(), 40);
        assert!(find_induced_cycle(&g, 41).is_none());
    }

    #[test]
    fn chord_is_respected() {
        let mut e: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        e.push((0, 4));
        let g = Graph::new(8, e).unwrap();
        assert_eq!(find_induced_cycle(&g, 5).unwrap().len(), 5);
        assert!(find_induced_cycle(&g, 6).is_none());
    }
}
