//! Lifting meta-level embeddings to blow-ups in the host.

use super::map::EmbeddingMap;
use super::search::Search;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{AuxiliaryColouring, Graph, Truncation, TwoColouring};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Builds a copy of `T ⊠ K_k` in the witness colour of `aux`, where
/// `tprime_map` embeds the truncation of `T` into the auxiliary complete
/// graph on `parts`. Vertex `(v, i)` of the blow-up is `v * k + i`.
pub fn lift_blue_tree(
    c: &TwoColouring,
    parts: &[Vec<usize>],
    aux: &AuxiliaryColouring,
    truncation: &Truncation,
    tprime_map: &EmbeddingMap,
    tree: &crate::graph::RootedTree,
    k: usize,
) -> Result<EmbeddingMap> {
    let colour = aux.witness_colour;
    let n_host = c.graph().n();
    for (i, p) in parts.iter().enumerate() {
        for (a, &u) in p.iter().enumerate() {
            if p[a + 1..].iter().any(|&v| !c.is(u, v, colour)) {
                return Err(Error::Precondition(format!("part {i} is not a {} clique", colour.name())));
            }
        }
    }
    let n = tree.n();
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in truncation.origin.iter().enumerate() {
        slot[v] = i;
    }
    let depth = tree.depths();
    let children = tree.children();
    // Part holding each tree vertex: odd-depth vertices and the root take their
    // own slot's part, even-depth vertices their parent's.
    let part_of = |v: usize| -> usize {
        if slot[v] != usize::MAX {
            tprime_map.image[slot[v]]
        } else {
            tprime_map.image[slot[tree.parent(v).unwrap()]]
        }
    };
    let mut used = BitSet::new(n_host);
    let mut image = vec![usize::MAX; n * k];
    let mut placed = vec![false; n];
    let blue_to_all = |x: usize, set: &[usize]| set.iter().all(|&y| c.is(x, y, colour));
    for z in tree.bfs_order() {
        if depth[z] % 2 == 1 {
            continue;
        }
        let home = part_of(z);
        let kids: Vec<(usize, usize)> = children[z].iter().map(|&w| (w, part_of(w))).collect();
        for &(_, pw) in &kids {
            if aux.witness(home, pw).is_none() {
                return Err(Error::WitnessIncomplete(home.min(pw), home.max(pw)));
            }
        }
        let free = |p: &[usize], used: &BitSet| -> Vec<usize> { p.iter().copied().filter(|&x| !used.contains(x)).collect() };
        // Centre copies: prefer the common part of the witness sides.
        let mut pool: Vec<usize> = free(&parts[home], &used);
        if !placed[z] {
            let mut common = pool.clone();
            for &(_, pw) in &kids {
                let (x, _) = aux.witness(home, pw).unwrap();
                common.retain(|v| x.contains(v));
            }
            let chosen: Vec<usize> = if common.len() >= k {
                common[..k].to_vec()
            } else {
                pool.sort_by_key(|&v| {
                    let score: usize = kids.iter().map(|&(_, pw)| parts[pw].iter().filter(|&&y| !used.contains(y) && c.is(v, y, colour)).count()).sum();
                    (core::cmp::Reverse(score), v)
                });
                if pool.len() < k {
                    return Err(Error::Precondition(format!("part {home} has too few free vertices")));
                }
                pool[..k].to_vec()
            };
            for (i, &x) in chosen.iter().enumerate() {
                image[z * k + i] = x;
                used.insert(x);
            }
            placed[z] = true;
        }
        let centre: Vec<usize> = image[z * k..z * k + k].to_vec();
        for &(w, pw) in &kids {
            let (_, y) = aux.witness(home, pw).unwrap();
            let mut cand: Vec<usize> = y.iter().copied().filter(|&v| !used.contains(v) && blue_to_all(v, &centre)).collect();
            if cand.len() < k {
                cand = free(&parts[pw], &used).into_iter().filter(|&v| blue_to_all(v, &centre)).collect();
            }
            if cand.len() < k {
                return Err(Error::Precondition(format!("part {pw} lacks {k} vertices joined to the copies of vertex {z}")));
            }
            for (i, &x) in cand[..k].iter().enumerate() {
                image[w * k + i] = x;
                used.insert(x);
            }
            placed[w] = true;
        }
    }
    Ok(EmbeddingMap::new(image))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseLiftReport {
    pub map: Option<EmbeddingMap>,
    /// Edges of `f` whose class pair has fewer than `(1 - 1/(8Δ)) t²` edges.
    pub hypothesis_violations: Vec<(usize, usize)>,
    pub capped: bool,
}

/// Node budget of the representative search.
pub const LIFT_BUDGET: u64 = 5_000_000;

/// Picks one vertex of `classes[v]` per vertex `v` of `f` so that every edge
/// of `f` becomes an edge of `f_prime`.
pub fn dense_pairs_lift(f: &Graph, classes: &[Vec<usize>], f_prime: &Graph, delta_max: usize) -> Result<DenseLiftReport> {
    if classes.len() != f.n() {
        return Err(Error::InvalidInput(format!("{} classes for {} vertices", classes.len(), f.n())));
    }
    let delta = delta_max.max(1) as f64;
    let mut hypothesis_violations = Vec::new();
    for (v, w) in f.edges() {
        let t2 = (classes[v].len() * classes[w].len()) as f64;
        let have = classes[v].iter().map(|&a| classes[w].iter().filter(|&&b| f_prime.has_edge(a, b)).count()).sum::<usize>() as f64;
        if have < (1.0 - 1.0 / (8.0 * delta)) * t2 - 1e-9 {
            hypothesis_violations.push((v, w));
        }
    }
    let nh = f_prime.n();
    let adj = f_prime.adjacency_sets();
    let domains: Vec<BitSet> = classes.iter().map(|c| BitSet::from_iter(nh, c.iter().copied())).collect();
    let r = super::search::find_copy(f, &adj, &BitSet::full(nh), Some(&domains), LIFT_BUDGET);
    let capped = matches!(r, Search::Capped);
    Ok(DenseLiftReport { map: r.found().map(EmbeddingMap::new), hypothesis_violations, capped })
}

