//! Long induced cycles plus a low-treewidth remainder.

mod container;
mod treewidth;

pub use container::{build_tree_blowup_container, validate_container, ContainerBounds, TreeBlowupContainer};
pub use treewidth::{tree_decomposition_small, TreeDecomposition, EXACT_TREEWIDTH_CAP};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{find_induced_cycle, is_induced_cycle, Graph};
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Vertices of the remainder `J`, sorted.
    pub j: Vec<usize>,
    /// Cycles in removal order, each as a cyclic vertex sequence.
    pub cycles: Vec<Vec<usize>>,
}

impl Decomposition {
    /// The parts in order `(J, F₁, …, F_g)`.
    pub fn parts(&self) -> Vec<&[usize]> {
        let mut out: Vec<&[usize]> = vec![&self.j];
        out.extend(self.cycles.iter().map(|c| c.as_slice()));
        out
    }
}

pub fn decompose_cubic(h: &Graph, ell: usize) -> Result<Decomposition> {
    if let Some(v) = (0..h.n()).find(|&v| h.degree(v) > 3) {
        return Err(Error::DegreeExceeded { vertex: v, degree: h.degree(v) });
    }
    if ell < 5 {
        return Err(Error::InvalidInput(alloc::format!("cycle length bound {ell} is below 5")));
    }
    let mut remaining: Vec<usize> = (0..h.n()).collect();
    let mut cycles = Vec::new();
    loop {
        let sub = h.induced_subgraph(&remaining);
        let Some(c) = find_induced_cycle(&sub, ell) else { break };
        let cycle: Vec<usize> = c.iter().map(|&i| remaining[i]).collect();
        let gone = BitSet::from_iter(h.n(), cycle.iter().copied());
        remaining.retain(|&v| !gone.contains(v));
        cycles.push(cycle);
    }
    Ok(Decomposition { j: remaining, cycles })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    /// Vertices missing from every part or in several parts.
    pub partition_violations: Vec<usize>,
    /// Cycles (by index) that are not induced cycles of length at least `ℓ`.
    pub cycle_violations: Vec<usize>,
    /// An induced cycle of length at least `ℓ` inside `J`.
    pub long_cycle_in_j: Option<Vec<usize>>,
    /// Vertices with two or more neighbours in earlier parts.
    pub back_degree_violations: Vec<usize>,
    /// `(ℓ − 1)(Δ − 1) + 2`, the treewidth bound for `J`.
    pub treewidth_bound: usize,
}

impl DecompositionReport {
    pub fn is_valid(&self) -> bool {
        self.partition_violations.is_empty()
            && self.cycle_violations.is_empty()
            && self.long_cycle_in_j.is_none()
            && self.back_degree_violations.is_empty()
    }
}

pub fn treewidth_bound(ell: usize, max_degree: usize) -> usize {
    (ell.saturating_sub(1)) * max_degree.saturating_sub(1) + 2
}

pub fn validate_decomposition(h: &Graph, d: &Decomposition, ell: usize) -> DecompositionReport {
    let n = h.n();
    let mut part = vec![usize::MAX; n];
    let mut partition_violations = Vec::new();
    for (i, p) in d.parts().iter().enumerate() {
        for &v in p.iter() {
            if v >= n || part[v] != usize::MAX {
                partition_violations.push(v);
            } else {
                part[v] = i;
            }
        }
    }
    partition_violations.extend((0..n).filter(|&v| part[v] == usize::MAX));
    partition_violations.sort_unstable();
    partition_violations.dedup();
    let cycle_violations = d
        .cycles
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() < ell || c.iter().any(|&v| v >= n) || !is_induced_cycle(h, c))
        .map(|(i, _)| i)
        .collect();
    let j: Vec<usize> = d.j.iter().copied().filter(|&v| v < n).collect();
    let long_cycle_in_j = find_induced_cycle(&h.induced_subgraph(&j), ell).map(|c| c.into_iter().map(|i| j[i]).collect());
    let back_degree_violations = (0..n)
        .filter(|&v| part[v] != usize::MAX && h.neighbors(v).filter(|&w| part[w] < part[v]).count() > 1)
        .collect();
    DecompositionReport {
        partition_violations,
        cycle_violations,
        long_cycle_in_j,
        back_degree_violations,
        treewidth_bound: treewidth_bound(ell, h.max_degree()),
    }
}

#[cfg(test)]
mod tests;
