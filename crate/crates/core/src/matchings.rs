//! Partition of the present blocks into near-perfect matchings.
//!
//! Blocks are taken in decreasing order of block degree (the sum over the
//! block's points of the number of present blocks through the point), ties by
//! block index, and each goes into the first matching it does not meet.
//! Matchings covering fewer than `(1 - η) n` points are dissolved into the
//! leftover list.

use crate::bitset::BitSet;
use crate::design::BlockDesign;
use crate::graph::Graph;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchingPartition {
    /// Each matching as increasing block indices, in creation order.
    pub matchings: Vec<Vec<usize>>,
    /// Present blocks in no surviving matching, increasing.
    pub leftover: Vec<usize>,
}

impl MatchingPartition {
    pub fn z(&self) -> usize {
        self.matchings.len()
    }
}

pub fn partition_blocks_into_matchings(
    d: &BlockDesign,
    present: &[usize],
    eta: f64,
    z_target: Option<usize>,
) -> MatchingPartition {
    let mut point_degree = vec![0usize; d.n];
    for &b in present {
        for &v in &d.blocks[b] {
            point_degree[v] += 1;
        }
    }
    let block_degree = |b: usize| d.blocks[b].iter().map(|&v| point_degree[v]).sum::<usize>();
    let mut order = present.to_vec();
    order.sort_by(|&a, &b| block_degree(b).cmp(&block_degree(a)).then(a.cmp(&b)));

    let mut used: Vec<BitSet> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for b in order {
        let pts = &d.blocks[b];
        match used.iter().position(|u| pts.iter().all(|&v| !u.contains(v))) {
            Some(i) => {
                pts.iter().for_each(|&v| used[i].insert(v));
                groups[i].push(b);
            }
            None => {
                used.push(BitSet::from_iter(d.n, pts.iter().copied()));
                groups.push(vec![b]);
            }
        }
    }
    let bar = (1.0 - eta) * d.n as f64;
    let mut out = MatchingPartition::default();
    for mut g in groups {
        g.sort_unstable();
        let covered = (g.len() * d.block_size) as f64;
        let room = z_target.is_none_or(|z| out.matchings.len() < z);
        if covered >= bar && room {
            out.matchings.push(g);
        } else {
            out.leftover.extend(g);
        }
    }
    out.leftover.sort_unstable();
    out
}

/// Blocks of a matching that meet a vertex set substantially.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeetingReport {
    /// Blocks `h` with `|h ∩ S| ≥ γC/2`.
    pub blocks: Vec<usize>,
    /// Whether there are at least `|S| / (2C)` of them.
    pub meets_bound: bool,
    /// Whether `|S| ≥ 4γn` and the matching covers at least `(1 - γ) n` points.
    pub applicable: bool,
}

pub fn blocks_meeting_set(d: &BlockDesign, matching: &[usize], set: &[usize], gamma: f64) -> MeetingReport {
    let mark = BitSet::from_iter(d.n, set.iter().copied());
    let c = d.block_size as f64;
    let blocks: Vec<usize> = matching
        .iter()
        .copied()
        .filter(|&b| d.blocks[b].iter().filter(|&&v| mark.contains(v)).count() as f64 >= gamma * c / 2.0)
        .collect();
    let meets_bound = blocks.len() as f64 >= set.len() as f64 / (2.0 * c);
    let covered = matching.len() * d.block_size;
    let applicable = set.len() as f64 >= 4.0 * gamma * d.n as f64 && covered as f64 >= (1.0 - gamma) * d.n as f64;
    MeetingReport { blocks, meets_bound, applicable }
}

/// How many layers each edge lies in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityReport {
    /// Multiplicity to number of edges with that multiplicity.
    pub histogram: BTreeMap<usize, usize>,
    pub max_multiplicity: usize,
    pub at_least_two: usize,
    pub at_least_five: usize,
    /// Whether the edges in two or more layers exceed `n^{3/2}`.
    pub exceeds_three_halves: bool,
}

pub fn edge_multiplicity_report(n: usize, layers: &[Graph]) -> MultiplicityReport {
    let mut all: Vec<(usize, usize)> = layers.iter().flat_map(|g| g.edges()).collect();
    all.sort_unstable();
    let mut histogram = BTreeMap::new();
    let mut i = 0;
    while i < all.len() {
        let mut j = i + 1;
        while j < all.len() && all[j] == all[i] {
            j += 1;
        }
        *histogram.entry(j - i).or_insert(0) += 1;
        i = j;
    }
    let count_from = |k: usize| histogram.range(k..).map(|(_, c)| c).sum::<usize>();
    let at_least_two = count_from(2);
    MultiplicityReport {
        max_multiplicity: histogram.keys().next_back().copied().unwrap_or(0),
        at_least_two,
        at_least_five: count_from(5),
        exceeds_three_halves: at_least_two as f64 > libm::pow(n as f64, 1.5),
        histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::affine_plane;

    #[test]
    fn affine_plane_splits_into_parallel_classes() {
        let d = affine_plane(3).unwrap();
        let all: Vec<usize> = (0..12).collect();
        let p = partition_blocks_into_matchings(&d, &all, 0.0, None);
        assert_eq!(p.z(), 4);
        assert!(p.leftover.is_empty());
        assert!(p.matchings.iter().all(|m| m.len() == 3));
    }

    #[test]
    fn fano_has_no_large_matching() {
        let d = BlockDesign::fano();
        let all: Vec<usize> = (0..7).collect();
        let p = partition_blocks_into_matchings(&d, &all, 0.1, None);
        assert_eq!(p.z(), 0);
        assert_eq!(p.leftover.len(), 7);
        assert_eq!(partition_blocks_into_matchings(&d, &[], 0.1, None), MatchingPartition::default());
    }

    #[test]
    fn target_caps_matchings() {
        let d = affine_plane(3).unwrap();
        let all: Vec<usize> = (0..12).collect();
        let p = partition_blocks_into_matchings(&d, &all, 0.0, Some(1));
        assert_eq!(p.z(), 1);
        assert_eq!(p.leftover.len(), 9);
    }

    #[test]
    fn meeting_set_example() {
        let d = affine_plane(3).unwrap();
        let class = d.parallel_classes.clone().unwrap()[0].clone();
        let s: Vec<usize> = class.iter().flat_map(|&b| d.blocks[b][..2].to_vec()).collect();
        let r = blocks_meeting_set(&d, &class, &s, 2.0 / 3.0);
        assert_eq!(r.blocks.len(), 3);
        assert!(r.meets_bound);
        assert!(!r.applicable);
    }

    #[test]
    fn multiplicities() {
        let a = Graph::path(3);
        let r = edge_multiplicity_report(3, &[a.clone(), a.clone(), Graph::new(3, [(0, 2)]).unwrap()]);
        assert_eq!(r.histogram.get(&2), Some(&2));
        assert_eq!(r.histogram.get(&1), Some(&1));
        assert_eq!(r.at_least_five, 0);
        assert_eq!(r.max_multiplicity, 2);
    }
}
