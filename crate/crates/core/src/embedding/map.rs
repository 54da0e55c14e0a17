//! Embedding maps and their independent validation.
//!
//! The validator rebuilds the host edge set and colours from the raw edge
//! lists and checks each clause directly; it shares no code with the searches.

use crate::graph::{Colour, Graph, TwoColouring};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

/// Image of every pattern vertex, indexed by pattern vertex.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EmbeddingMap {
    pub image: Vec<usize>,
}

impl EmbeddingMap {
    pub fn new(image: Vec<usize>) -> Self {
        EmbeddingMap { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// `self` after `inner`: pattern vertex `v` goes to `self[inner[v]]`.
    pub fn compose(&self, inner: &EmbeddingMap) -> EmbeddingMap {
        EmbeddingMap { image: inner.image.iter().map(|&x| self.image[x]).collect() }
    }
}

/// Outcome of [`validate_embedding`]; empty `failures` means valid.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EmbeddingCheck {
    pub failures: Vec<String>,
}

impl EmbeddingCheck {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks injectivity and edge preservation, and optionally that every
/// image edge has `colour` and that each pattern vertex lands in its
/// candidate set (`None` entries are unconstrained).
pub fn validate_embedding(
    pattern: &Graph,
    host: &Graph,
    map: &EmbeddingMap,
    colour: Option<(&TwoColouring, Colour)>,
    candidates: Option<&[Option<Vec<usize>>]>,
) -> EmbeddingCheck {
    let mut failures = Vec::new();
    if map.image.len() != pattern.n() {
        failures.push(format!("map has {} entries for {} pattern vertices", map.image.len(), pattern.n()));
        return EmbeddingCheck { failures };
    }
    let host_edges: BTreeSet<(usize, usize)> = host.edges().collect();
    let mut seen = BTreeMap::new();
    for (v, &x) in map.image.iter().enumerate() {
        if x >= host.n() {
            failures.push(format!("vertex {v} maps outside the host"));
        }
        if let Some(w) = seen.insert(x, v) {
            failures.push(format!("vertices {w} and {v} share image {x}"));
        }
    }
    let colours: Option<(BTreeMap<(usize, usize), Colour>, Colour)> = colour.map(|(c, want)| {
        (c.graph().edges().zip(c.colours().iter().copied()).collect(), want)
    });
    for (u, v) in pattern.edges() {
        let (a, b) = (map.image[u], map.image[v]);
        let key = (a.min(b), a.max(b));
        if !host_edges.contains(&key) {
            failures.push(format!("pattern edge ({u}, {v}) maps to non-edge ({a}, {b})"));
            continue;
        }
        if let Some((table, want)) = &colours {
            if table.get(&key) != Some(want) {
                failures.push(format!("pattern edge ({u}, {v}) maps to an edge not coloured {}", want.name()));
            }
        }
    }
    if let Some(cands) = candidates {
        for (v, c) in cands.iter().enumerate() {
            if let Some(set) = c {
                if v < map.image.len() && !set.contains(&map.image[v]) {
                    failures.push(format!("vertex {v} lies outside its candidate set"));
                }
            }
        }
    }
    EmbeddingCheck { failures }
}
