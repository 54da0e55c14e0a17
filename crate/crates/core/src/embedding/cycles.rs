//! Cycle embedding into candidate sets and the cycle-by-cycle pipeline.

use super::map::EmbeddingMap;
use crate::bitset::BitSet;
use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Node budget of one cycle search.
pub const CYCLE_BUDGET: u64 = 2_000_000;

/// Embeds the cycle `0, 1, …, L−1` with position `i` landing in
/// `candidates[i]`, consecutive positions on host edges, all images distinct.
pub fn embed_cycle(host: &Graph, candidates: &[Vec<usize>], budget: u64) -> Result<EmbeddingMap> {
    let n = host.n();
    let sets: Vec<BitSet> = candidates.iter().map(|c| BitSet::from_iter(n, c.iter().copied().filter(|&v| v < n))).collect();
    embed_cycle_sets(&host.adjacency_sets(), &sets, budget)
}

/// [`embed_cycle`] over adjacency and candidate bitsets.
pub fn embed_cycle_sets(adj: &[BitSet], candidates: &[BitSet], budget: u64) -> Result<EmbeddingMap> {
    let len = candidates.len();
    if len < 3 {
        return Err(Error::InvalidInput(format!("cycle length {len} is below 3")));
    }
    let mut st = CycleState { adj, len, image: vec![usize::MAX; len], deepest: Vec::new(), nodes: 0, budget };
    match st.rec(candidates.to_vec(), 0) {
        Some(true) => Ok(EmbeddingMap::new(st.image)),
        Some(false) => Err(Error::CycleEmbeddingFailed { deepest: st.deepest }),
        None => Err(Error::SearchCapped(format!("cycle search exceeded {budget} nodes"))),
    }
}

struct CycleState<'a> {
    adj: &'a [BitSet],
    len: usize,
    image: Vec<usize>,
    deepest: Vec<(usize, usize)>,
    nodes: u64,
    budget: u64,
}

impl CycleState<'_> {
    fn rec(&mut self, domains: Vec<BitSet>, depth: usize) -> Option<bool> {
        if depth == self.len {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        if depth > self.deepest.len() {
            self.deepest = (0..self.len).filter(|&i| self.image[i] != usize::MAX).map(|i| (i, self.image[i])).collect();
        }
        // Most constrained open position.
        let pos = (0..self.len)
            .filter(|&i| self.image[i] == usize::MAX)
            .min_by_key(|&i| (domains[i].count(), i))
            .unwrap();
        let prev = (pos + self.len - 1) % self.len;
        let next = (pos + 1) % self.len;
        for x in domains[pos].iter() {
            let mut d = domains.clone();
            let mut dead = false;
            for i in 0..self.len {
                if self.image[i] != usize::MAX || i == pos {
                    continue;
                }
                d[i].remove(x);
                if i == prev || i == next {
                    d[i].intersect_with(&self.adj[x]);
                }
                if d[i].is_empty() {
                    dead = true;
                    break;
                }
            }
            if dead {
                continue;
            }
            self.image[pos] = x;
            match self.rec(d, depth + 1) {
                Some(false) => {}
                other => return other,
            }
            self.image[pos] = usize::MAX;
        }
        Some(false)
    }
}

/// Where the image of a cycle vertex must sit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Adjacent to this already embedded host vertex.
    Anchor(usize),
    /// Adjacent to the image of this pattern vertex, embedded in an earlier part.
    Back(usize),
    /// Inside an explicit candidate set.
    Candidates(Vec<usize>),
    Free,
}

/// Class labels and slots for the vertices of a pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateAssignment {
    /// Label in `1..=classes` per pattern vertex.
    pub phi: Vec<usize>,
    pub slots: Vec<Slot>,
    pub classes: usize,
}

impl CandidateAssignment {
    /// Greedy distance-two colouring with `classes` labels; slots from the
    /// back neighbours of the decomposition, anchored when the back neighbour
    /// already has an image in `pre`.
    pub fn for_decomposition(h: &Graph, d: &Decomposition, pre: &[Option<usize>], classes: usize) -> Result<Self> {
        let n = h.n();
        let mut phi = vec![0usize; n];
        for v in 0..n {
            let mut taken = vec![false; classes + 1];
            for w in h.neighbors(v) {
                taken[phi[w]] = true;
                for x in h.neighbors(w) {
                    taken[phi[x]] = true;
                }
            }
            match (1..=classes).find(|&c| !taken[c]) {
                Some(c) => phi[v] = c,
                None => return Err(Error::InvalidInput(format!("{classes} labels do not colour vertex {v} at distance two"))),
            }
        }
        let mut part = vec![usize::MAX; n];
        for (i, p) in d.parts().iter().enumerate() {
            for &v in p.iter() {
                part[v] = i;
            }
        }
        let mut slots = vec![Slot::Free; n];
        for v in 0..n {
            if part[v] == 0 || part[v] == usize::MAX {
                continue;
            }
            if let Some(w) = h.neighbors(v).find(|&w| part[w] < part[v]) {
                slots[v] = match pre.get(w).copied().flatten() {
                    Some(u) => Slot::Anchor(u),
                    None => Slot::Back(w),
                };
            }
        }
        Ok(CandidateAssignment { phi, slots, classes })
    }

    /// Violated clauses; empty means valid.
    pub fn validate(&self, h: &Graph) -> Vec<String> {
        let mut out = Vec::new();
        for v in 0..h.n() {
            if self.phi[v] == 0 || self.phi[v] > self.classes {
                out.push(format!("vertex {v} has label {}", self.phi[v]));
            }
            for w in h.neighbors(v) {
                if w > v && self.phi[w] == self.phi[v] {
                    out.push(format!("adjacent {v} and {w} share a label"));
                }
                for x in h.neighbors(w) {
                    if x > v && self.phi[x] == self.phi[v] {
                        out.push(format!("{v} and {x} at distance two share a label"));
                    }
                }
            }
        }
        let mut uses = alloc::collections::BTreeMap::new();
        for s in &self.slots {
            if let Slot::Anchor(u) = s {
                *uses.entry(*u).or_insert(0usize) += 1;
            }
        }
        for (u, k) in uses {
            if k > 3 {
                out.push(format!("anchor {u} is used {k} times"));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleStage {
    Anchor,
    HalfSelection,
    CycleSearch,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CyclePipelineOutcome {
    /// Images of every pattern vertex.
    Embedded(Vec<usize>),
    Failed { stage: CycleStage, cycle: usize, vertex: Option<usize>, detail: String },
}

/// Inputs of [`embed_cycles_pipeline`].
#[derive(Clone, Copy, Debug)]
pub struct CyclePipeline<'a> {
    /// Host graph the cycles must use.
    pub host: &'a Graph,
    /// `sets[c][b]` is the half `V_c^b` for label `c + 1`.
    pub sets: &'a [[Vec<usize>; 2]],
    pub h: &'a Graph,
    pub cycles: &'a [Vec<usize>],
    pub assignment: &'a CandidateAssignment,
    /// Unoccupied neighbours an anchor needs in a half.
    pub threshold: usize,
    pub budget: u64,
}

/// Embeds the cycles one after another, extending `pre`.
pub fn embed_cycles_pipeline(p: &CyclePipeline<'_>, pre: &[Option<usize>]) -> Result<CyclePipelineOutcome> {
    let n = p.host.n();
    let adj = p.host.adjacency_sets();
    let mut image: Vec<Option<usize>> = pre.to_vec();
    image.resize(p.h.n(), None);
    let mut occupied = BitSet::from_iter(n, image.iter().flatten().copied());
    let halves: Vec<[BitSet; 2]> = p
        .sets
        .iter()
        .map(|s| [BitSet::from_iter(n, s[0].iter().copied()), BitSet::from_iter(n, s[1].iter().copied())])
        .collect();
    for (ci, cycle) in p.cycles.iter().enumerate() {
        let mut cands = Vec::with_capacity(cycle.len());
        for &v in cycle {
            let label = p.assignment.phi[v];
            if label == 0 || label > halves.len() {
                return Err(Error::InvalidInput(format!("vertex {v} has label {label} without a set")));
            }
            let [h0, h1] = &halves[label - 1];
            let anchor = match &p.assignment.slots[v] {
                Slot::Anchor(u) => Some(*u),
                Slot::Back(w) => match image[*w] {
                    Some(u) => Some(u),
                    None => {
                        return Ok(CyclePipelineOutcome::Failed {
                            stage: CycleStage::Anchor,
                            cycle: ci,
                            vertex: Some(v),
                            detail: format!("back neighbour {w} is not embedded"),
                        })
                    }
                },
                _ => None,
            };
            let mut s = match (&p.assignment.slots[v], anchor) {
                (_, Some(u)) => {
                    let chosen = [h0, h1]
                        .into_iter()
                        .map(|half| {
                            let mut c = adj[u].intersection(half);
                            c.difference_with(&occupied);
                            c
                        })
                        .filter(|c| c.count() >= p.threshold.max(1))
                        .max_by_key(|c| c.count());
                    match chosen {
                        Some(c) => c,
                        None => {
                            return Ok(CyclePipelineOutcome::Failed {
                                stage: CycleStage::HalfSelection,
                                cycle: ci,
                                vertex: Some(v),
                                detail: format!("anchor {u} has fewer than {} free neighbours in both halves", p.threshold.max(1)),
                            })
                        }
                    }
                }
                (Slot::Candidates(c), None) => BitSet::from_iter(n, c.iter().copied()),
                _ => {
                    let mut c = h0.clone();
                    c.union_with(h1);
                    c
                }
            };
            s.difference_with(&occupied);
            cands.push(s);
        }
        match embed_cycle_sets(&adj, &cands, p.budget) {
            Ok(m) => {
                for (i, &v) in cycle.iter().enumerate() {
                    image[v] = Some(m.image[i]);
                    occupied.insert(m.image[i]);
                }
            }
            Err(e) => {
                return Ok(CyclePipelineOutcome::Failed { stage: CycleStage::CycleSearch, cycle: ci, vertex: None, detail: format!("{e}") })
            }
        }
    }
    match image.iter().position(Option::is_none) {
        Some(v) => Ok(CyclePipelineOutcome::Failed { stage: CycleStage::Anchor, cycle: p.cycles.len(), vertex: Some(v), detail: "vertex left without an image".into() }),
        None => Ok(CyclePipelineOutcome::Embedded(image.into_iter().map(Option::unwrap).collect())),
    }
}
