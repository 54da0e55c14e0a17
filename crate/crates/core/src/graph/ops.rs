use super::Graph;
use alloc::vec;
use alloc::vec::Vec;

/// Graph on the same vertices joining pairs at distance between 1 and `k`.
pub fn graph_power(g: &Graph, k: usize) -> Graph {
    let n = g.n();
    let mut edges = Vec::new();
    let mut dist = vec![usize::MAX; n];
    let mut touched = Vec::new();
    for s in 0..n {
        dist[s] = 0;
        touched.push(s);
        let mut frontier = vec![s];
        for d in 1..=k {
            let mut next = Vec::new();
            for &v in &frontier {
                for w in g.neighbors(v) {
                    if dist[w] == usize::MAX {
                        dist[w] = d;
                        touched.push(w);
                        next.push(w);
                        if w > s {
                            edges.push((s, w));
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        for v in touched.drain(..) {
            dist[v] = usize::MAX;
        }
    }
    Graph::from_edges_lossy(n, edges)
}

/// How the `t` copies of a vertex relate to each other in a blow-up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassKind {
    Independent,
    Clique,
}

/// Blow-up of a graph with its class map: class `v` holds `v*t .. v*t+t`.
#[derive(Clone, Debug)]
pub struct BlowUp {
    pub graph: Graph,
    pub classes: Vec<Vec<usize>>,
}

/// Replaces each vertex by `t` copies and each edge by a complete bipartite graph.
pub fn blow_up(g: &Graph, t: usize, kind: ClassKind) -> BlowUp {
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        for i in 0..t {
            for j in 0..t {
                edges.push((u * t + i, v * t + j));
            }
        }
    }
    if kind == ClassKind::Clique {
        for v in 0..g.n() {
            for i in 0..t {
                for j in i + 1..t {
                    edges.push((v * t + i, v * t + j));
                }
            }
        }
    }
    let classes = (0..g.n()).map(|v| (v * t..v * t + t).collect()).collect();
    BlowUp { graph: Graph::from_edges_lossy(g.n() * t, edges), classes }
}
