//! Density, `(ε, p)`-regularity and the partition machinery.
//!
//! Exact regularity checks enumerate every qualifying subset `U₁` of the
//! smaller side; for a fixed `U₁` and size `k` the extreme densities over
//! `U₂` are attained by the `k` vertices with the largest and smallest
//! degrees into `U₁`, so the scan is exact without enumerating `U₂`. The
//! reported witness is the pair with the largest deviation.

mod densifier;
mod redsets;

pub use densifier::{detect_densifier, validate_densifier, Densifier, DensifierContext, DensifierParams};
pub use redsets::{
    find_regular_red_sets_from_cliques, find_regular_red_sets_from_densifiers, CliqueCertificate, RedSetStage,
    RedSets, RedSetsConfig, RedSetsOutcome, ThresholdMode,
};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{stream, Phase};
use alloc::vec;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;

/// Largest side enumerated by the exact regularity check.
pub const EXACT_SIDE_CAP: usize = 16;

/// `e(A, B)` over `|A||B|`, kept as integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Density {
    pub edges: usize,
    pub pairs: usize,
}

impl Density {
    pub fn value(self) -> f64 {
        if self.pairs == 0 {
            0.0
        } else {
            self.edges as f64 / self.pairs as f64
        }
    }
}

pub fn pair_density(g: &Graph, a: &[usize], b: &[usize]) -> Result<Density> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyPart);
    }
    let bs = BitSet::from_iter(g.n(), b.iter().copied());
    Ok(Density { edges: g.edges_between(a, &bs), pairs: a.len() * b.len() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Exact,
    Randomized { trials: usize, seed: u64 },
    /// Exact when the smaller side is at most `exact_up_to`, else randomized.
    Auto { exact_up_to: usize, trials: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// `certified` is false for randomized passes.
    Regular { certified: bool },
    Irregular { u1: Vec<usize>, u2: Vec<usize>, deviation: f64 },
    SearchCapped,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularPairReport {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub density: f64,
    pub epsilon: f64,
    pub p_scale: f64,
    pub verdict: Verdict,
    pub exact: bool,
}

impl RegularPairReport {
    pub fn is_regular(&self) -> bool {
        matches!(self.verdict, Verdict::Regular { .. })
    }
}

fn min_size(eps: f64, len: usize) -> usize {
    let k = libm::ceil(eps * len as f64 - 1e-9) as usize;
    k.clamp(1, len.max(1))
}

/// Local view of a bipartite pair: adjacency of each `A` vertex as a mask over `B`.
struct Pair {
    adj: Vec<BitSet>,
    nb: usize,
}

impl Pair {
    fn new(g: &Graph, a: &[usize], b: &[usize]) -> Self {
        let mut index = vec![usize::MAX; g.n()];
        for (j, &v) in b.iter().enumerate() {
            index[v] = j;
        }
        let adj = a
            .iter()
            .map(|&u| BitSet::from_iter(b.len(), g.neighbors(u).filter_map(|w| (index[w] != usize::MAX).then(|| index[w]))))
            .collect();
        Pair { adj, nb: b.len() }
    }

    fn transpose(&self) -> Pair {
        let na = self.adj.len();
        let mut adj = vec![BitSet::new(na); self.nb];
        for (i, s) in self.adj.iter().enumerate() {
            for j in s.iter() {
                adj[j].insert(i);
            }
        }
        Pair { adj, nb: na }
    }

    /// Degrees of the `B` vertices into the chosen `A` vertices.
    fn degrees_into(&self, chosen: &[usize]) -> Vec<usize> {
        let mut d = vec![0; self.nb];
        for &i in chosen {
            for j in self.adj[i].iter() {
                d[j] += 1;
            }
        }
        d
    }
}

/// Best `U₂` for a fixed `U₁`: largest deviation over sizes `kb..=|B|`, both directions.
fn best_response(deg: &[usize], u1_len: usize, kb: usize, base: f64) -> (f64, Vec<usize>) {
    let mut order: Vec<usize> = (0..deg.len()).collect();
    order.sort_by(|&x, &y| deg[y].cmp(&deg[x]).then(x.cmp(&y)));
    let mut best = (-1.0, Vec::new());
    let mut top = 0usize;
    let mut bottom = 0usize;
    let nb = deg.len();
    for k in 1..=nb {
        top += deg[order[k - 1]];
        bottom += deg[order[nb - k]];
        if k < kb {
            continue;
        }
        let pairs = (u1_len * k) as f64;
        let hi = top as f64 / pairs - base;
        let lo = base - bottom as f64 / pairs;
        if hi > best.0 + 1e-12 {
            best = (hi, order[..k].to_vec());
        }
        if lo > best.0 + 1e-12 {
            best = (lo, order[nb - k..].to_vec());
        }
    }
    best
}

pub fn regularity_check(g: &Graph, a: &[usize], b: &[usize], eps: f64, p_scale: f64, mode: CheckMode) -> Result<RegularPairReport> {
    let density = pair_density(g, a, b)?.value();
    let mode = match mode {
        CheckMode::Auto { exact_up_to, trials, seed } => {
            if a.len().min(b.len()) <= exact_up_to.min(EXACT_SIDE_CAP) {
                CheckMode::Exact
            } else {
                CheckMode::Randomized { trials, seed }
            }
        }
        m => m,
    };
    let mut report = RegularPairReport {
        a: a.to_vec(),
        b: b.to_vec(),
        density,
        epsilon: eps,
        p_scale,
        verdict: Verdict::Regular { certified: true },
        exact: mode == CheckMode::Exact,
    };
    let found = match mode {
        CheckMode::Exact => {
            if a.len().min(b.len()) > EXACT_SIDE_CAP {
                report.verdict = Verdict::SearchCapped;
                return Ok(report);
            }
            exact_witness(g, a, b, eps, density)
        }
        CheckMode::Randomized { trials, seed } => {
            report.verdict = Verdict::Regular { certified: false };
            randomized_witness(g, a, b, eps, density, p_scale, trials, seed)
        }
        CheckMode::Auto { .. } => unreachable!(),
    };
    if let Some((dev, u1, u2)) = found {
        if dev > eps * p_scale {
            let mut u1 = u1;
            let mut u2 = u2;
            u1.sort_unstable();
            u2.sort_unstable();
            // Recompute from scratch so every witness certifies itself.
            let d = pair_density(g, &u1, &u2)?.value();
            let deviation = libm::fabs(d - density);
            if deviation > eps * p_scale
                && u1.len() as f64 >= eps * a.len() as f64 - 1e-9
                && u2.len() as f64 >= eps * b.len() as f64 - 1e-9
            {
                report.verdict = Verdict::Irregular { u1, u2, deviation };
            }
        }
    }
    Ok(report)
}

/// Largest deviation over all qualifying pairs, as `(deviation, U₁, U₂)`.
fn exact_witness(g: &Graph, a: &[usize], b: &[usize], eps: f64, base: f64) -> Option<(f64, Vec<usize>, Vec<usize>)> {
    let swap = a.len() > b.len();
    let (x, y) = if swap { (b, a) } else { (a, b) };
    let pair = Pair::new(g, x, y);
    let kx = min_size(eps, x.len());
    let ky = min_size(eps, y.len());
    let mut best: Option<(f64, Vec<usize>, Vec<usize>)> = None;
    let nx = x.len();
    let mut chosen = Vec::with_capacity(nx);
    for mask in 1u32..(1u32 << nx) {
        if (mask.count_ones() as usize) < kx {
            continue;
        }
        chosen.clear();
        chosen.extend((0..nx).filter(|&i| mask >> i & 1 == 1));
        let deg = pair.degrees_into(&chosen);
        let (dev, u2) = best_response(&deg, chosen.len(), ky, base);
        if best.as_ref().is_none_or(|b| dev > b.0 + 1e-12) {
            best = Some((dev, chosen.clone(), u2));
        }
    }
    best.map(|(d, u1, u2)| {
        let u1: Vec<usize> = u1.into_iter().map(|i| x[i]).collect();
        let u2: Vec<usize> = u2.into_iter().map(|j| y[j]).collect();
        if swap {
            (d, u2, u1)
        } else {
            (d, u1, u2)
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn randomized_witness(
    g: &Graph,
    a: &[usize],
    b: &[usize],
    eps: f64,
    base: f64,
    p_scale: f64,
    trials: usize,
    seed: u64,
) -> Option<(f64, Vec<usize>, Vec<usize>)> {
    let pair = Pair::new(g, a, b);
    let tr = pair.transpose();
    let ka = min_size(eps, a.len());
    let kb = min_size(eps, b.len());
    let mut rng = stream(seed, Phase::Regularity, (a.len() * 31 + b.len()) as u64);
    let mut best: Option<(f64, Vec<usize>, Vec<usize>)> = None;
    let mut idx: Vec<usize> = (0..a.len()).collect();
    for _ in 0..trials.max(1) {
        idx.shuffle(&mut rng);
        let size = rng.gen_range(ka..=a.len());
        let mut u1: Vec<usize> = idx[..size].to_vec();
        for _ in 0..4 {
            let deg = pair.degrees_into(&u1);
            let (dev, u2) = best_response(&deg, u1.len(), kb, base);
            if best.as_ref().is_none_or(|b| dev > b.0 + 1e-12) {
                best = Some((dev, u1.clone(), u2.clone()));
            }
            let deg = tr.degrees_into(&u2);
            let (dev, next) = best_response(&deg, u2.len(), ka, base);
            if best.as_ref().is_none_or(|b| dev > b.0 + 1e-12) {
                best = Some((dev, next.clone(), u2.clone()));
            }
            if next == u1 {
                break;
            }
            u1 = next;
        }
        if best.as_ref().is_some_and(|b| b.0 > eps * p_scale) {
            break;
        }
    }
    best.map(|(d, u1, u2)| (d, u1.into_iter().map(|i| a[i]).collect(), u2.into_iter().map(|j| b[j]).collect()))
}

/// A pair `U, W` with `e(U, W) > (1 + γ) p |U||W|`, if found.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformityReport {
    pub violation: Option<(Vec<usize>, Vec<usize>, usize)>,
    pub exact: bool,
    pub probes: usize,
}

/// Exact for `n ≤ 20`, otherwise `probes` randomized greedy probes.
pub fn upper_uniformity_check(g: &Graph, gamma: f64, p_scale: f64, probes: usize, seed: u64) -> UniformityReport {
    let n = g.n();
    let k = min_size(gamma, n);
    if 2 * k > n {
        return UniformityReport { violation: None, exact: true, probes: 0 };
    }
    let factor = (1.0 + gamma) * p_scale;
    let adj = g.adjacency_sets();
    let best_w = |u: &[usize], in_u: &BitSet| -> Option<(Vec<usize>, usize)> {
        let mut deg: Vec<(usize, usize)> =
            (0..n).filter(|&v| !in_u.contains(v)).map(|v| (adj[v].intersection_count(in_u), v)).collect();
        deg.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let mut sum = 0;
        for (j, &(d, _)) in deg.iter().enumerate() {
            sum += d;
            let size = j + 1;
            if size >= k && sum as f64 > factor * (u.len() * size) as f64 {
                return Some((deg[..size].iter().map(|x| x.1).collect(), sum));
            }
        }
        None
    };
    if n <= 20 {
        for mask in 1u32..(1u32 << n) {
            if (mask.count_ones() as usize) < k || (mask.count_ones() as usize) > n - k {
                continue;
            }
            let u: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let in_u = BitSet::from_iter(n, u.iter().copied());
            if let Some((mut w, e)) = best_w(&u, &in_u) {
                w.sort_unstable();
                return UniformityReport { violation: Some((u, w, e)), exact: true, probes: 0 };
            }
        }
        return UniformityReport { violation: None, exact: true, probes: 0 };
    }
    let mut rng = stream(seed, Phase::Probe, n as u64);
    let mut verts: Vec<usize> = (0..n).collect();
    for probe in 0..probes {
        verts.shuffle(&mut rng);
        let size = rng.gen_range(k..=(n / 2).max(k));
        let mut u = verts[..size].to_vec();
        for _ in 0..3 {
            let in_u = BitSet::from_iter(n, u.iter().copied());
            if let Some((mut w, e)) = best_w(&u, &in_u) {
                u.sort_unstable();
                w.sort_unstable();
                return UniformityReport { violation: Some((u, w, e)), exact: false, probes: probe + 1 };
            }
            // Move `U` towards the vertices with most neighbours in the best `W` of size k.
            let mut deg: Vec<(usize, usize)> =
                (0..n).filter(|&v| !in_u.contains(v)).map(|v| (adj[v].intersection_count(&in_u), v)).collect();
            deg.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
            let w = BitSet::from_iter(n, deg[..k].iter().map(|x| x.1));
            let mut back: Vec<(usize, usize)> =
                (0..n).filter(|&v| !w.contains(v)).map(|v| (adj[v].intersection_count(&w), v)).collect();
            back.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
            u = back[..size.min(back.len())].iter().map(|x| x.1).collect();
        }
    }
    UniformityReport { violation: None, exact: false, probes }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CleanupReport {
    pub sets: Vec<Vec<usize>>,
    pub removed: Vec<Vec<usize>>,
    /// `|V_i'| / |V_i|`.
    pub retention: Vec<f64>,
}

impl CleanupReport {
    /// Whether every set kept at least `(1 - Δε)` of its vertices.
    pub fn meets_retention(&self, max_degree: usize, eps: f64) -> bool {
        self.retention.iter().all(|&r| r >= 1.0 - max_degree as f64 * eps)
    }
}

/// Deletes vertices with fewer than `d_min` times the current size of some
/// other set as neighbours there, until nothing changes. `pairs` restricts the
/// checked set pairs; `None` checks all of them.
pub fn cleanup_partition(g: &Graph, sets: &[Vec<usize>], d_min: f64, pairs: Option<&[(usize, usize)]>) -> Result<CleanupReport> {
    let k = sets.len();
    let mut owner = vec![usize::MAX; g.n()];
    for (i, s) in sets.iter().enumerate() {
        for &v in s {
            owner[v] = i;
        }
    }
    let mut related = vec![vec![false; k]; k];
    match pairs {
        Some(ps) => ps.iter().for_each(|&(i, j)| {
            related[i][j] = true;
            related[j][i] = true;
        }),
        None => (0..k).for_each(|i| (0..k).filter(|&j| j != i).for_each(|j| related[i][j] = true)),
    }
    let mut size: Vec<usize> = sets.iter().map(|s| s.len()).collect();
    let mut alive = vec![true; g.n()];
    let mut removed = vec![Vec::new(); k];
    let mut counts = vec![0usize; k];
    loop {
        let mut changed = false;
        for i in 0..k {
            for &v in &sets[i] {
                if !alive[v] {
                    continue;
                }
                counts.iter_mut().for_each(|c| *c = 0);
                for w in g.neighbors(v) {
                    if alive[w] && owner[w] != usize::MAX {
                        counts[owner[w]] += 1;
                    }
                }
                let bad = (0..k).any(|j| related[i][j] && (counts[j] as f64) < d_min * size[j] as f64);
                if bad {
                    alive[v] = false;
                    size[i] -= 1;
                    removed[i].push(v);
                    changed = true;
                    if size[i] == 0 {
                        return Err(Error::CleanupCollapsed(i));
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let out: Vec<Vec<usize>> = sets.iter().map(|s| s.iter().copied().filter(|&v| alive[v]).collect()).collect();
    let retention = sets.iter().zip(&out).map(|(s, o)| o.len() as f64 / s.len().max(1) as f64).collect();
    Ok(CleanupReport { sets: out, removed, retention })
}

#[derive(Clone, Copy, Debug)]
pub struct PartitionConfig {
    pub eps: f64,
    pub p_scale: f64,
    pub t0: usize,
    pub t_max: usize,
    pub trials: usize,
    pub max_rounds: usize,
    pub exact_up_to: usize,
    pub seed: u64,
}

impl PartitionConfig {
    pub fn new(eps: f64, p_scale: f64, t0: usize, t_max: usize, seed: u64) -> Self {
        PartitionConfig { eps, p_scale, t0, t_max, trials: 40, max_rounds: 8, exact_up_to: 10, seed }
    }

    fn mode(&self, salt: u64) -> CheckMode {
        CheckMode::Auto { exact_up_to: self.exact_up_to, trials: self.trials, seed: self.seed ^ salt }
    }
}

#[derive(Clone, Debug)]
pub struct PartitionResult {
    pub parts: Vec<Vec<usize>>,
    /// Reports for every pair `i < j`, in lexicographic order.
    pub reports: Vec<RegularPairReport>,
    /// Irregular pair count after each round, starting with the initial partition.
    pub irregular_history: Vec<usize>,
}

impl PartitionResult {
    pub fn report(&self, i: usize, j: usize) -> &RegularPairReport {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let t = self.parts.len();
        &self.reports[i * (2 * t - i - 1) / 2 + (j - i - 1)]
    }

    pub fn irregular_pairs(&self) -> usize {
        self.reports.iter().filter(|r| !r.is_regular()).count()
    }
}

fn equipartition(order: &[usize], t: usize) -> Vec<Vec<usize>> {
    let t = t.clamp(1, order.len().max(1));
    let (q, r) = (order.len() / t, order.len() % t);
    let mut parts = Vec::with_capacity(t);
    let mut pos = 0;
    for i in 0..t {
        let len = q + usize::from(i < r);
        let mut p = order[pos..pos + len].to_vec();
        p.sort_unstable();
        parts.push(p);
        pos += len;
    }
    parts
}

fn all_reports(g: &Graph, parts: &[Vec<usize>], cfg: &PartitionConfig, round: usize) -> Vec<RegularPairReport> {
    let mut out = Vec::new();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let salt = ((round * 1000 + i) * 1000 + j) as u64;
            out.push(
                regularity_check(g, &parts[i], &parts[j], cfg.eps, cfg.p_scale, cfg.mode(salt))
                    .expect("parts are non-empty"),
            );
        }
    }
    out
}

/// Heuristic regular equipartition of `vertices`.
///
/// Starts from `initial`, or a seeded random equipartition into `t0` parts.
/// Each round reorders every part so that the witness sets touching it are
/// contiguous, doubles the part count (up to `t_max`), and re-cuts the
/// concatenated order into equal parts.
pub fn regularity_partition(g: &Graph, vertices: &[usize], cfg: &PartitionConfig, initial: Option<Vec<Vec<usize>>>) -> PartitionResult {
    let mut parts = match initial {
        Some(p) => p,
        None => {
            let mut order = vertices.to_vec();
            order.shuffle(&mut stream(cfg.seed, Phase::Regularity, 0));
            equipartition(&order, cfg.t0)
        }
    };
    let mut reports = all_reports(g, &parts, cfg, 0);
    let mut history = vec![reports.iter().filter(|r| !r.is_regular()).count()];
    for round in 1..=cfg.max_rounds {
        if *history.last().unwrap() == 0 || parts.len() >= cfg.t_max {
            break;
        }
        let mut cuts: Vec<Vec<BitSet>> = parts.iter().map(|_| Vec::new()).collect();
        let mut idx = 0;
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                if let Verdict::Irregular { u1, u2, .. } = &reports[idx].verdict {
                    if cuts[i].len() < 3 {
                        cuts[i].push(BitSet::from_iter(g.n(), u1.iter().copied()));
                    }
                    if cuts[j].len() < 3 {
                        cuts[j].push(BitSet::from_iter(g.n(), u2.iter().copied()));
                    }
                }
                idx += 1;
            }
        }
        let mut order = Vec::new();
        for (p, cs) in parts.iter().zip(&cuts) {
            let mut vs = p.clone();
            vs.sort_by_key(|&v| {
                let key: u32 = cs.iter().enumerate().map(|(b, s)| u32::from(!s.contains(v)) << b).sum();
                (key, v)
            });
            order.extend(vs);
        }
        let t = (parts.len() * 2).min(cfg.t_max);
        parts = equipartition(&order, t);
        reports = all_reports(g, &parts, cfg, round);
        history.push(reports.iter().filter(|r| !r.is_regular()).count());
    }
    PartitionResult { parts, reports, irregular_history: history }
}

/// Blocks whose `B₀` meets at least `(1 - β)` of the parts in `ξ C / t` or more vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct NiceBlocks {
    pub blocks: Vec<usize>,
    pub fraction: f64,
}

/// `candidates` holds `(block, B₀)` pairs; `xi` is the bar factor (the lemma uses `1/200`).
pub fn nicely_distributed_blocks(parts: &[Vec<usize>], candidates: &[(usize, Vec<usize>)], beta: f64, c: usize, xi: f64) -> NiceBlocks {
    let t = parts.len();
    let n = parts.iter().flatten().chain(candidates.iter().flat_map(|x| x.1.iter())).max().map_or(0, |m| m + 1);
    let mut owner = vec![usize::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        for &v in p {
            owner[v] = i;
        }
    }
    let bar = xi * c as f64 / t.max(1) as f64;
    let mut blocks = Vec::new();
    let mut hits = vec![0usize; t];
    for (b, b0) in candidates {
        hits.iter_mut().for_each(|h| *h = 0);
        for &v in b0 {
            if owner[v] != usize::MAX {
                hits[owner[v]] += 1;
            }
        }
        let good = hits.iter().filter(|&&h| h as f64 >= bar).count();
        if good as f64 >= (1.0 - beta) * t as f64 {
            blocks.push(*b);
        }
    }
    let fraction = if candidates.is_empty() { 0.0 } else { blocks.len() as f64 / candidates.len() as f64 };
    NiceBlocks { blocks, fraction }
}

/// Regularity and density of corresponding pairs before and after subsampling.
#[derive(Clone, Debug, PartialEq)]
pub struct PairTransfer {
    pub i: usize,
    pub j: usize,
    pub before_density: f64,
    pub after_density: f64,
    pub before_regular: bool,
    /// `(4ε, scale_after)`-regular after subsampling.
    pub after_regular: bool,
    /// Scaled density at least half the scaled density before.
    pub density_ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransferReport {
    pub pairs: Vec<PairTransfer>,
}

impl TransferReport {
    pub fn all_ok(&self) -> bool {
        self.pairs.iter().all(|p| p.after_regular && p.density_ok)
    }
}

pub fn subsample_regularity_transfer_check(
    before: &Graph,
    after: &Graph,
    sets: &[Vec<usize>],
    eps: f64,
    scale_before: f64,
    scale_after: f64,
    mode: CheckMode,
) -> Result<TransferReport> {
    let mut pairs = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let rb = regularity_check(before, &sets[i], &sets[j], eps, scale_before, mode)?;
            let ra = regularity_check(after, &sets[i], &sets[j], 4.0 * eps, scale_after, mode)?;
            let target = 0.5 * rb.density / scale_before * scale_after;
            pairs.push(PairTransfer {
                i,
                j,
                before_density: rb.density,
                after_density: ra.density,
                before_regular: rb.is_regular(),
                after_regular: ra.is_regular(),
                density_ok: ra.density >= target - 1e-12,
            });
        }
    }
    Ok(TransferReport { pairs })
}
