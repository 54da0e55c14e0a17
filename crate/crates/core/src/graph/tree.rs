//! Rooted trees, truncation, and enumeration of unlabelled trees.

use super::Graph;
use crate::error::{Error, Result};
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    parent: Vec<Option<usize>>,
    root: usize,
}

/// A truncated tree and, for each of its vertices, the original vertex.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub tree: RootedTree,
    pub origin: Vec<usize>,
}

impl RootedTree {
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let roots: Vec<usize> = (0..parent.len()).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidInput("a rooted tree needs exactly one root".into()));
        }
        let t = RootedTree { parent, root: roots[0] };
        if t.bfs_order().len() != t.n() {
            return Err(Error::InvalidInput("parent pointers contain a cycle".into()));
        }
        Ok(t)
    }

    /// Roots a tree graph at `root`.
    pub fn from_graph(g: &Graph, root: usize) -> Result<Self> {
        if !g.is_tree() || root >= g.n() {
            return Err(Error::InvalidInput("not a tree or root out of range".into()));
        }
        let mut parent = vec![None; g.n()];
        let mut seen = vec![false; g.n()];
        let mut queue = vec![root];
        seen[root] = true;
        let mut i = 0;
        while i < queue.len() {
            let v = queue[i];
            i += 1;
            for w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    queue.push(w);
                }
            }
        }
        Ok(RootedTree { parent, root })
    }

    pub fn single() -> Self {
        RootedTree { parent: vec![None], root: 0 }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.n()];
        for v in 0..self.n() {
            if let Some(p) = self.parent[v] {
                ch[p].push(v);
            }
        }
        ch
    }

    /// Vertices in breadth-first order from the root; parents precede children.
    pub fn bfs_order(&self) -> Vec<usize> {
        let ch = self.children();
        let mut order = vec![self.root];
        let mut i = 0;
        while i < order.len() && order.len() <= self.n() {
            let v = order[i];
            i += 1;
            order.extend_from_slice(&ch[v]);
        }
        order
    }

    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.n()];
        for v in self.bfs_order() {
            if let Some(p) = self.parent[v] {
                d[v] = d[p] + 1;
            }
        }
        d
    }

    pub fn depth(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges_lossy(self.n(), (0..self.n()).filter_map(|v| self.parent[v].map(|p| (p, v))))
    }

    pub fn max_degree(&self) -> usize {
        self.to_graph().max_degree()
    }

    /// Removes every vertex at positive even depth and hangs its children on its parent.
    pub fn truncate(&self) -> Truncation {
        let depth = self.depths();
        let origin: Vec<usize> = self.bfs_order().into_iter().filter(|&v| depth[v] == 0 || depth[v] % 2 == 1).collect();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in origin.iter().enumerate() {
            index[v] = i;
        }
        let parent = origin
            .iter()
            .map(|&v| {
                self.parent[v].map(|p| if depth[p] == 0 { index[p] } else { index[self.parent[p].unwrap()] })
            })
            .collect();
        Truncation { tree: RootedTree { parent, root: index[self.root] }, origin }
    }
}

/// Every tree on `n` vertices up to isomorphism, as graphs.
pub fn free_trees(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level = vec![Graph::empty(1)];
    for size in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &level {
            for v in 0..t.n() {
                let mut e: Vec<(usize, usize)> = t.edges().collect();
                e.push((v, size - 1));
                let g = Graph::from_edges_lossy(size, e);
                if seen.insert(canonical_tree_code(&g)) {
                    next.push(g);
                }
            }
        }
        level = next;
    }
    level
}

fn canonical_tree_code(g: &Graph) -> String {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = n;
    let mut leaves: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut removed = vec![false; n];
    while alive > 2 {
        let mut next = Vec::new();
        for &l in &leaves {
            removed[l] = true;
            alive -= 1;
            for w in g.neighbors(l) {
                if !removed[w] {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        leaves = next;
    }
    (0..n)
        .filter(|&v| !removed[v])
        .map(|c| encode(g, c, usize::MAX))
        .min()
        .unwrap_or_default()
}

fn encode(g: &Graph, v: usize, parent: usize) -> String {
    let mut parts: Vec<String> = g.neighbors(v).filter(|&w| w != parent).map(|w| encode(g, w, v)).collect();
    parts.sort();
    let mut s = String::from("(");
    for p in parts {
        s.push_str(&p);
    }
    s.push(')');
    s
}
