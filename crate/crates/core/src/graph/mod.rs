//! Simple undirected graphs on vertex set `0..n`.
//!
//! Storage is compressed adjacency plus a lexicographically sorted edge list,
//! so `edge_index` is a binary search and two graphs with the same edges are
//! bit-identical.

mod colouring;
mod cycles;
mod extremal;
mod ops;
mod tree;

pub use colouring::{
    auxiliary_colouring, find_monochromatic_biclique, find_monochromatic_clique,
    AuxiliaryColouring, Colour, SearchLimits, TwoColouring,
};
pub use cycles::{find_induced_cycle, is_induced_cycle};
pub use extremal::{kst_bound, turan_bound, Ratio, TuranBound};
pub use ops::{blow_up, graph_power, BlowUp, ClassKind};
pub use tree::{free_trees, RootedTree, Truncation};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    nbrs: Vec<u32>,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    /// Builds a graph, rejecting loops, repeated edges and out-of-range ends.
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at {u}")));
            }
            list.push(ordered(u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("repeated edge ({}, {})", w[0].0, w[0].1)));
        }
        Ok(Self::from_sorted(n, list))
    }

    /// Builds a graph from arbitrary pairs, dropping loops and repeats.
    pub fn from_edges_lossy<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Self {
        let mut list: Vec<(u32, u32)> = edges
            .into_iter()
            .filter(|&(u, v)| u != v && u < n && v < n)
            .map(|(u, v)| ordered(u, v))
            .collect();
        list.sort_unstable();
        list.dedup();
        Self::from_sorted(n, list)
    }

    fn from_sorted(n: usize, edges: Vec<(u32, u32)>) -> Self {
        let mut deg = vec![0usize; n + 1];
        for &(u, v) in &edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + deg[v];
        }
        let mut fill = offsets.clone();
        let mut nbrs = vec![0u32; 2 * edges.len()];
        for &(u, v) in &edges {
            nbrs[fill[u as usize]] = v;
            fill[u as usize] += 1;
            nbrs[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        Graph { n, offsets, nbrs, edges }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u as u32, v as u32));
            }
        }
        Self::from_sorted(n, e)
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::from_edges_lossy(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges_lossy(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Self::from_edges_lossy(leaves + 1, (1..=leaves).map(|i| (0, i)))
    }

    /// Complete bipartite graph with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut e = Vec::new();
        for u in 0..a {
            for v in a..a + b {
                e.push((u, v));
            }
        }
        Self::from_edges_lossy(a + b, e)
    }

    /// Outer 5-cycle on 0..5, inner pentagram on 5..10, spokes i ~ i+5.
    pub fn petersen() -> Self {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((5 + i, 5 + (i + 2) % 5));
            e.push((i, i + 5));
        }
        Self::from_edges_lossy(10, e)
    }

    /// `rows x cols` grid, vertex `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut e = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    e.push((v, v + 1));
                }
                if r + 1 < rows {
                    e.push((v, v + cols));
                }
            }
        }
        Self::from_edges_lossy(rows * cols, e)
    }

    /// Disjoint union of the given graphs, relabelled consecutively.
    pub fn disjoint_union(parts: &[&Graph]) -> Self {
        let mut e = Vec::new();
        let mut base = 0;
        for g in parts {
            e.extend(g.edges().map(|(u, v)| (u + base, v + base)));
            base += g.n();
        }
        Self::from_edges_lossy(base, e)
    }

    /// Union of graphs on a common vertex set.
    pub fn union(n: usize, parts: &[&Graph]) -> Self {
        let mut list: Vec<(u32, u32)> = Vec::new();
        for g in parts {
            assert!(g.n() <= n, "union operand has more vertices than the target");
            list.extend_from_slice(&g.edges);
        }
        list.sort_unstable();
        list.dedup();
        Self::from_sorted(n, list)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    #[inline]
    pub fn edge(&self, index: usize) -> (usize, usize) {
        let (u, v) = self.edges[index];
        (u as usize, v as usize)
    }

    #[inline]
    pub fn neighbor_slice(&self, v: usize) -> &[u32] {
        &self.nbrs[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn neighbors(&self, v: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.neighbor_slice(v).iter().map(|&w| w as usize)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.neighbor_slice(u).binary_search(&(v as u32)).is_ok()
    }

    /// Position of edge `uv` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n || u == v {
            return None;
        }
        self.edges.binary_search(&ordered(u, v)).ok()
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n <= other.n && self.edges().all(|(u, v)| other.has_edge(u, v))
    }

    /// Subgraph induced on `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut e = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for w in self.neighbors(v) {
                let j = index[w];
                if j != usize::MAX && i < j {
                    e.push((i, j));
                }
            }
        }
        Graph::from_edges_lossy(vertices.len(), e)
    }

    /// Same vertex set, only the edges with both ends in `keep`.
    pub fn restrict_to(&self, keep: &BitSet) -> Graph {
        let e: Vec<(u32, u32)> = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| keep.contains(u as usize) && keep.contains(v as usize))
            .collect();
        Self::from_sorted(self.n, e)
    }

    /// Same vertex set, only the edges selected by `keep(edge_index)`.
    pub fn filter_edges<F: FnMut(usize, (usize, usize)) -> bool>(&self, mut keep: F) -> Graph {
        let e: Vec<(u32, u32)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, &(u, v))| keep(*i, (u as usize, v as usize)))
            .map(|(_, &e)| e)
            .collect();
        Self::from_sorted(self.n, e)
    }

    pub fn neighbor_set(&self, v: usize) -> BitSet {
        BitSet::from_iter(self.n, self.neighbors(v))
    }

    pub fn adjacency_sets(&self) -> Vec<BitSet> {
        (0..self.n).map(|v| self.neighbor_set(v)).collect()
    }

    /// Breadth-first distances from `source`; unreachable vertices get `usize::MAX`.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Number of edges with one end in `a` and the other in `b`; shared
    /// vertices count both orientations once per edge.
    pub fn edges_between(&self, a: &[usize], b: &BitSet) -> usize {
        a.iter()
            .map(|&v| self.neighbor_slice(v).iter().filter(|&&w| b.contains(w as usize)).count())
            .sum()
    }

    pub fn is_tree(&self) -> bool {
        self.n > 0 && self.m() + 1 == self.n && self.is_connected()
    }
}

#[inline]
fn ordered(u: usize, v: usize) -> (u32, u32) {
    if u < v {
        (u as u32, v as u32)
    } else {
        (v as u32, u as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        let g = Graph::new(3, [(2, 0), (1, 2)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 2), (1, 2)]);
        assert_eq!(g.neighbors(2).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn named_graphs() {
        let p = Graph::petersen();
        assert_eq!(p.m(), 15);
        assert!((0..10).all(|v| p.degree(v) == 3));
        assert_eq!(Graph::complete(5).m(), 10);
        assert_eq!(Graph::grid(3, 3).m(), 12);
        assert_eq!(Graph::complete_bipartite(2, 3).m(), 6);
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = Graph::cycle(6);
        let h = g.induced_subgraph(&[0, 1, 2, 4]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(g.components().len(), 1);
        assert_eq!(h.components().len(), 2);
    }
}
