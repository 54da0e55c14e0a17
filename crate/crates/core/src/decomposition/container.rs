//! Containers `T ⊠ K_k` from BFS-layered tree partitions.
//!
//! For a root `r` with distance layers `L₀, L₁, …`, the nodes at depth `i` are
//! the sets `C ∩ L_i` for the components `C` of `G[L_{≥i}]`; a node's parent is
//! the depth-`(i−1)` node of the component containing `C`. Every edge then
//! joins a node to itself or to its parent. All roots are tried and the
//! narrowest partition kept.

use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::{Graph, RootedTree};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeBlowupContainer {
    pub tree: RootedTree,
    pub k: usize,
    /// `(tree node, slot)` of every vertex.
    pub embedding: Vec<(usize, usize)>,
}

impl TreeBlowupContainer {
    /// Vertices placed at each tree node, by slot.
    pub fn bags(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.tree.n()];
        for (v, &(t, _)) in self.embedding.iter().enumerate() {
            out[t].push(v);
        }
        for bag in out.iter_mut() {
            bag.sort_by_key(|&v| self.embedding[v].1);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContainerBounds {
    pub k: usize,
    pub tree_degree: usize,
}

impl ContainerBounds {
    /// `18·w·d` and `18·w·d²`, with `w` taken as at least one.
    pub fn for_width(w: usize, d: usize) -> Self {
        let w = w.max(1);
        let d = d.max(1);
        ContainerBounds { k: 18 * w * d, tree_degree: 18 * w * d * d }
    }
}

/// Root-dependent partition: `(parent per node, node per vertex)`.
fn layered_partition(g: &Graph, comp: &[usize], root: usize) -> (Vec<Option<usize>>, Vec<(usize, usize)>) {
    let dist = g.bfs_distances(root);
    let depth = comp.iter().map(|&v| dist[v]).max().unwrap_or(0);
    let mut node_of = vec![usize::MAX; g.n()];
    let mut parents: Vec<Option<usize>> = Vec::new();
    let mut out = Vec::new();
    // Union-find over vertices, processed from the deepest layer upwards, so
    // components of G[L_{≥i}] are available at each depth.
    let mut uf: Vec<usize> = (0..g.n()).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        let mut y = x;
        while uf[y] != r {
            let nx = uf[y];
            uf[y] = r;
            y = nx;
        }
        r
    }
    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); depth + 1];
    for &v in comp {
        layers[dist[v]].push(v);
    }
    let mut comp_of_layer: Vec<Vec<usize>> = vec![Vec::new(); depth + 1];
    for i in (0..=depth).rev() {
        for &v in &layers[i] {
            for w in g.neighbors(v) {
                if dist[w] >= i && dist[w] != usize::MAX {
                    let (a, b) = (find(&mut uf, v), find(&mut uf, w));
                    if a != b {
                        uf[a] = b;
                    }
                }
            }
        }
        comp_of_layer[i] = layers[i].iter().map(|&v| find(&mut uf, v)).collect();
    }
    let mut nodes: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut fill: Vec<usize> = Vec::new();
    for i in 0..=depth {
        for (idx, &v) in layers[i].iter().enumerate() {
            let node = *nodes.entry((i, comp_of_layer[i][idx])).or_insert_with(|| {
                parents.push(None);
                fill.push(0);
                parents.len() - 1
            });
            node_of[v] = node;
            out.push((v, node, fill[node]));
            fill[node] += 1;
        }
        for &v in &layers[i] {
            if i > 0 {
                let node = node_of[v];
                if parents[node].is_none() {
                    let up = g.neighbors(v).find(|&w| dist[w] + 1 == i).expect("bfs parent");
                    parents[node] = Some(node_of[up]);
                }
            }
        }
    }
    let mut place = vec![(0, 0); g.n()];
    for (v, node, slot) in out {
        place[v] = (node, slot);
    }
    (parents, place)
}

pub fn build_tree_blowup_container(g: &Graph, td: &TreeDecomposition, d_max: usize) -> Result<TreeBlowupContainer> {
    let bounds = ContainerBounds::for_width(td.width, d_max);
    let n = g.n();
    if n == 0 {
        return Ok(TreeBlowupContainer { tree: RootedTree::single(), k: 1, embedding: Vec::new() });
    }
    let mut parents: Vec<Option<usize>> = Vec::new();
    let mut embedding = vec![(0, 0); n];
    let mut root_of_previous: Option<usize> = None;
    for comp in g.components() {
        let roots: &[usize] = if comp.len() <= 400 { &comp } else { &comp[..1] };
        let mut best: Option<(usize, usize, Vec<Option<usize>>, Vec<(usize, usize)>)> = None;
        for &r in roots {
            let (par, place) = layered_partition(g, &comp, r);
            let mut size = vec![0usize; par.len()];
            comp.iter().for_each(|&v| size[place[v].0] += 1);
            let k = size.iter().copied().max().unwrap_or(1);
            let deg = tree_degree(&par);
            if best.as_ref().is_none_or(|b| (k, deg) < (b.0, b.1)) {
                best = Some((k, deg, par, place));
            }
        }
        let (_, _, par, place) = best.unwrap();
        let offset = parents.len();
        for p in &par {
            parents.push(p.map(|x| x + offset));
        }
        if let Some(prev) = root_of_previous {
            parents[offset] = Some(prev);
        }
        root_of_previous = Some(offset);
        for &v in &comp {
            embedding[v] = (place[v].0 + offset, place[v].1);
        }
    }
    let tree = RootedTree::from_parents(parents)?;
    let k = embedding.iter().map(|&(_, s)| s + 1).max().unwrap_or(1);
    let tree_degree = tree.max_degree();
    if k > bounds.k || tree_degree > bounds.tree_degree {
        return Err(Error::ContainerBoundsExceeded { k, k_bound: bounds.k, tree_degree, degree_bound: bounds.tree_degree });
    }
    let c = TreeBlowupContainer { tree, k, embedding };
    debug_assert!(validate_container(g, &c));
    Ok(c)
}

fn tree_degree(parents: &[Option<usize>]) -> usize {
    let mut deg = vec![0usize; parents.len()];
    for (v, p) in parents.iter().enumerate() {
        if let Some(p) = p {
            deg[v] += 1;
            deg[*p] += 1;
        }
    }
    deg.into_iter().max().unwrap_or(0)
}

/// Injective, slots below `k`, and every edge inside a node or along a tree edge.
pub fn validate_container(g: &Graph, c: &TreeBlowupContainer) -> bool {
    if c.embedding.len() != g.n() {
        return false;
    }
    let mut seen = alloc::collections::BTreeSet::new();
    for &(t, s) in &c.embedding {
        if t >= c.tree.n() || s >= c.k || !seen.insert((t, s)) {
            return false;
        }
    }
    g.edges().all(|(u, v)| {
        let (a, b) = (c.embedding[u].0, c.embedding[v].0);
        a == b || c.tree.parent(a) == Some(b) || c.tree.parent(b) == Some(a)
    })
}
