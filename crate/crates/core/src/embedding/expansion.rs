//! Expansion and jointness checks.

use crate::bitset::BitSet;
use crate::graph::Graph;
use crate::rng::{stream, Phase};
use alloc::vec;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;

/// A set `X` with `1 ≤ |X| ≤ s` and `|Γ(X)| < d|X|`, if one was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionReport {
    pub witness: Option<Vec<usize>>,
    /// Whether the search covered every set.
    pub exact: bool,
}

impl ExpansionReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Mode selection for randomized fallbacks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    pub probes: usize,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { probes: 2000, seed: 0 }
    }
}

fn neighbourhood(adj: &[BitSet], set: &[usize], n: usize) -> BitSet {
    let mut out = BitSet::new(n);
    for &v in set {
        out.union_with(&adj[v]);
    }
    out
}

/// `(s, d)`-expansion over the vertices of `alive`, with `Γ` taken in the
/// subgraph induced by `alive`. Exhaustive when `s ≤ 3` or at most 20 vertices
/// are alive.
pub fn expansion_check_within(g: &Graph, alive: &BitSet, s: usize, d: usize, probe: ProbeConfig) -> ExpansionReport {
    let n = g.n();
    let verts = alive.to_vec();
    let adj: Vec<BitSet> = (0..n).map(|v| g.neighbor_set(v).intersection(alive)).collect();
    let s = s.min(verts.len());
    if s == 0 {
        return ExpansionReport { witness: None, exact: true };
    }
    let fails = |x: &[usize]| neighbourhood(&adj, x, n).count() < d * x.len();
    if verts.len() <= 20 || s <= 3 {
        let mut chosen = Vec::new();
        let found = enumerate_small(&verts, s, 0, &mut chosen, &fails);
        return ExpansionReport { witness: found, exact: true };
    }
    let mut rng = stream(probe.seed, Phase::Probe, (s * 1000 + d) as u64);
    let mut pool = verts.clone();
    for _ in 0..probe.probes {
        // Grow a set greedily from a random start, always adding the vertex
        // that enlarges the neighbourhood least.
        let start = pool[rng.gen_range(0..pool.len())];
        let mut x = vec![start];
        let mut gx = adj[start].clone();
        if fails(&x) {
            return ExpansionReport { witness: Some(x), exact: false };
        }
        let size = rng.gen_range(1..=s);
        while x.len() < size {
            pool.shuffle(&mut rng);
            let next = pool
                .iter()
                .copied()
                .filter(|v| !x.contains(v))
                .take(64)
                .min_by_key(|&v| {
                    let mut u = gx.clone();
                    u.union_with(&adj[v]);
                    u.count()
                });
            let Some(v) = next else { break };
            x.push(v);
            gx.union_with(&adj[v]);
            if gx.count() < d * x.len() {
                x.sort_unstable();
                return ExpansionReport { witness: Some(x), exact: false };
            }
        }
    }
    ExpansionReport { witness: None, exact: false }
}

fn enumerate_small(verts: &[usize], s: usize, start: usize, chosen: &mut Vec<usize>, fails: &dyn Fn(&[usize]) -> bool) -> Option<Vec<usize>> {
    if !chosen.is_empty() && fails(chosen) {
        return Some(chosen.clone());
    }
    if chosen.len() == s {
        return None;
    }
    for i in start..verts.len() {
        chosen.push(verts[i]);
        if let Some(w) = enumerate_small(verts, s, i + 1, chosen, fails) {
            return Some(w);
        }
        chosen.pop();
    }
    None
}

pub fn expansion_check(g: &Graph, s: usize, d: usize) -> ExpansionReport {
    expansion_check_within(g, &BitSet::full(g.n()), s, d, ProbeConfig::default())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruneReport {
    pub kept: Vec<usize>,
    pub removed: Vec<usize>,
    /// Every `s`-set has at least `3Ks` neighbours (as far as checked).
    pub hypothesis_holds: bool,
    pub hypothesis_exact: bool,
    /// The remainder passed the final expansion check.
    pub success: bool,
}

/// Removes the least-connected vertex of a non-expanding set until the rest
/// is `(s, K)`-expanding or `s` vertices have been removed.
pub fn prune_to_expander(g: &Graph, s: usize, k: usize, probe: ProbeConfig) -> PruneReport {
    let n = g.n();
    let all = BitSet::full(n);
    let hyp = size_s_hypothesis(g, s, 3 * k * s, probe);
    let mut alive = all;
    let mut removed = Vec::new();
    loop {
        let r = expansion_check_within(g, &alive, s, k, probe);
        match r.witness {
            None => {
                return PruneReport { kept: alive.to_vec(), removed, hypothesis_holds: hyp.0, hypothesis_exact: hyp.1, success: true };
            }
            Some(x) => {
                if removed.len() >= s.max(1) || alive.is_empty() {
                    return PruneReport { kept: alive.to_vec(), removed, hypothesis_holds: hyp.0, hypothesis_exact: hyp.1, success: false };
                }
                let v = x.iter().copied().min_by_key(|&v| (g.neighbors(v).filter(|&w| alive.contains(w)).count(), v)).unwrap();
                alive.remove(v);
                removed.push(v);
                removed.sort_unstable();
            }
        }
    }
}

/// Whether every `s`-set has at least `bound` neighbours, and whether that was checked exhaustively.
fn size_s_hypothesis(g: &Graph, s: usize, bound: usize, probe: ProbeConfig) -> (bool, bool) {
    let n = g.n();
    if s == 0 || s > n {
        return (true, true);
    }
    let adj: Vec<BitSet> = (0..n).map(|v| g.neighbor_set(v)).collect();
    let verts: Vec<usize> = (0..n).collect();
    if n <= 20 || s <= 2 {
        let mut chosen = Vec::new();
        let bad = exact_size(&verts, s, 0, &mut chosen, &|x| neighbourhood(&adj, x, n).count() < bound);
        return (!bad, true);
    }
    let mut rng = stream(probe.seed, Phase::Probe, 7);
    let mut pool = verts;
    for _ in 0..probe.probes {
        pool.shuffle(&mut rng);
        if neighbourhood(&adj, &pool[..s], n).count() < bound {
            return (false, false);
        }
    }
    (true, false)
}

fn exact_size(verts: &[usize], s: usize, start: usize, chosen: &mut Vec<usize>, bad: &dyn Fn(&[usize]) -> bool) -> bool {
    if chosen.len() == s {
        return bad(chosen);
    }
    for i in start..verts.len() {
        if verts.len() - i < s - chosen.len() {
            break;
        }
        chosen.push(verts[i]);
        if exact_size(verts, s, i + 1, chosen, bad) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Disjoint `S`, `T` of size at least `αn` with no edge between them, if found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointReport {
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub exact: bool,
}

/// Exhaustive for `n ≤ 20`, otherwise `probe.probes` randomized probes.
pub fn alpha_joint_check(g: &Graph, alpha: f64, probe: ProbeConfig) -> JointReport {
    let n = g.n();
    let k = (libm::ceil(alpha * n as f64 - 1e-9) as usize).max(1);
    if 2 * k > n {
        return JointReport { witness: None, exact: true };
    }
    let adj: Vec<BitSet> = (0..n).map(|v| g.neighbor_set(v)).collect();
    let try_s = |s: &[usize]| -> Option<(Vec<usize>, Vec<usize>)> {
        let mut closed = neighbourhood(&adj, s, n);
        s.iter().for_each(|&v| closed.insert(v));
        let rest: Vec<usize> = (0..n).filter(|&v| !closed.contains(v)).collect();
        (rest.len() >= k).then(|| (s.to_vec(), rest[..k].to_vec()))
    };
    if n <= 20 {
        let verts: Vec<usize> = (0..n).collect();
        let mut chosen = Vec::new();
        let mut out = None;
        first_witness(&verts, k, 0, &mut chosen, &try_s, &mut out);
        return JointReport { witness: out, exact: true };
    }
    let mut rng = stream(probe.seed, Phase::Probe, 11);
    let mut pool: Vec<usize> = (0..n).collect();
    for _ in 0..probe.probes {
        // Start from a random vertex and grow `S` by the vertex adding the fewest new neighbours.
        pool.shuffle(&mut rng);
        let mut s = vec![pool[0]];
        let mut closed = adj[pool[0]].clone();
        closed.insert(pool[0]);
        while s.len() < k {
            let v = pool.iter().copied().filter(|v| !s.contains(v)).take(48).min_by_key(|&v| {
                let mut c = closed.clone();
                c.union_with(&adj[v]);
                c.insert(v);
                c.count()
            });
            let Some(v) = v else { break };
            s.push(v);
            closed.union_with(&adj[v]);
            closed.insert(v);
        }
        s.sort_unstable();
        if let Some(w) = try_s(&s) {
            return JointReport { witness: Some(w), exact: false };
        }
    }
    JointReport { witness: None, exact: false }
}

fn first_witness(
    verts: &[usize],
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    try_s: &dyn Fn(&[usize]) -> Option<(Vec<usize>, Vec<usize>)>,
    out: &mut Option<(Vec<usize>, Vec<usize>)>,
) {
    if out.is_some() {
        return;
    }
    if chosen.len() == k {
        *out = try_s(chosen);
        return;
    }
    for i in start..verts.len() {
        if verts.len() - i < k - chosen.len() || out.is_some() {
            break;
        }
        chosen.push(verts[i]);
        first_witness(verts, k, i + 1, chosen, try_s, out);
        chosen.pop();
    }
}
