//! Random graph models used by the host construction.
//!
//! `G(n, p)` and block presence use geometric skipping, so the cost is
//! proportional to the number of successes. Conditional subsamples draw a
//! non-empty edge subset `B'` of a block (or biclique) with probability
//! proportional to `p̃^{|B'|} (1 - p̃)^{m - |B'|}`: by inverse CDF over all
//! `2^m - 1` outcomes when `m` is at most [`EXACT_OUTCOME_CAP`], and otherwise
//! by drawing the first present edge from its truncated geometric law and the
//! rest independently.

use crate::design::BlockDesign;
use crate::error::{Error, Result};
use crate::graph::{graph_power, Graph};
use crate::rng::{stream, Phase};
use alloc::vec;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;

/// Largest `m` whose `2^m - 1` outcomes are enumerated.
pub const EXACT_OUTCOME_CAP: usize = 15;

/// Indices in `0..count` kept independently with probability `p`.
pub fn bernoulli_indices<R: Rng>(count: usize, p: f64, rng: &mut R) -> Vec<usize> {
    if p <= 0.0 || count == 0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..count).collect();
    }
    let log_q = libm::log1p(-p);
    let mut out = Vec::new();
    let mut i: usize = 0;
    loop {
        let u: f64 = rng.gen();
        let skip = libm::floor(libm::log1p(-u) / log_q);
        if !skip.is_finite() || skip >= (count - i) as f64 {
            break;
        }
        i += skip as usize;
        out.push(i);
        i += 1;
        if i >= count {
            break;
        }
    }
    out
}

/// Pair with linear index `k` in the order (0,1), (0,2), (1,2), (0,3), ...
fn pair_of(k: usize) -> (usize, usize) {
    let mut v = ((libm::sqrt(8.0 * k as f64 + 1.0) + 1.0) / 2.0) as usize;
    while v * (v - 1) / 2 > k {
        v -= 1;
    }
    while (v + 1) * v / 2 <= k {
        v += 1;
    }
    (k - v * (v - 1) / 2, v)
}

pub fn sample_gnp_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let total = n * n.saturating_sub(1) / 2;
    Graph::from_edges_lossy(n, bernoulli_indices(total, p, rng).into_iter().map(pair_of))
}

/// `G(n, p)` from a seed.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Graph {
    sample_gnp_with(n, p, &mut stream(seed, Phase::Base, 0))
}

/// Uniform `d`-regular graph on `n` vertices by the pairing model with
/// rejection; `None` if `nd` is odd, `d ≥ n`, or 1000 pairings all fail.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Option<Graph> {
    if (n * d) % 2 == 1 || d >= n.max(1) {
        return None;
    }
    let mut rng = stream(seed, Phase::Pattern, (n * 8 + d) as u64);
    let mut points: Vec<usize> = (0..n * d).map(|i| i / d).collect();
    'attempt: for _ in 0..1000 {
        points.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in points.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        if let Ok(g) = Graph::new(n, edges) {
            return Some(g);
        }
    }
    None
}

/// A sample of the block model: the union of the cliques on the present blocks.
#[derive(Clone, Debug)]
pub struct BlockSample {
    pub graph: Graph,
    /// Indices of present blocks, increasing.
    pub present: Vec<usize>,
}

pub fn sample_block_model(d: &BlockDesign, p: f64, seed: u64) -> BlockSample {
    let present = bernoulli_indices(d.blocks.len(), p, &mut stream(seed, Phase::Base, 0));
    BlockSample { graph: block_union(d, &present), present }
}

/// Union of the cliques on the listed blocks.
pub fn block_union(d: &BlockDesign, blocks: &[usize]) -> Graph {
    let mut edges = Vec::with_capacity(blocks.len() * d.edges_per_block());
    for &b in blocks {
        let pts = &d.blocks[b];
        for x in 0..pts.len() {
            for y in x + 1..pts.len() {
                edges.push((pts[x], pts[y]));
            }
        }
    }
    Graph::from_edges_lossy(d.n, edges)
}

/// Sampler for a non-empty subset of `m` items, each item weighted by `q`.
#[derive(Clone, Debug)]
pub struct NonEmptySubsetSampler {
    m: usize,
    q: f64,
    cdf: Option<Vec<f64>>,
    first_cdf: Vec<f64>,
}

impl NonEmptySubsetSampler {
    pub fn new(m: usize, q: f64) -> Self {
        assert!(m >= 1 && q > 0.0 && q <= 1.0, "sampler needs m >= 1 and q in (0, 1]");
        let cdf = (m <= EXACT_OUTCOME_CAP).then(|| {
            let mut acc = 0.0;
            let mut cdf = Vec::with_capacity((1 << m) - 1);
            for mask in 1u32..(1u32 << m) {
                let k = mask.count_ones() as i32;
                acc += libm::pow(q, k as f64) * libm::pow(1.0 - q, (m as i32 - k) as f64);
                cdf.push(acc);
            }
            cdf
        });
        let mut first_cdf = Vec::with_capacity(m);
        let mut acc = 0.0;
        for j in 0..m {
            acc += libm::pow(1.0 - q, j as f64) * q;
            first_cdf.push(acc);
        }
        NonEmptySubsetSampler { m, q, cdf, first_cdf }
    }

    pub fn is_exact_enumeration(&self) -> bool {
        self.cdf.is_some()
    }

    /// Probability of one specific outcome of size `k`.
    pub fn outcome_probability(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let z = union_of(self.q, self.m);
        libm::pow(self.q, k as f64) * libm::pow(1.0 - self.q, (self.m - k) as f64) / z
    }

    /// Membership flags of a drawn subset.
    pub fn draw<R: Rng>(&self, rng: &mut R) -> Vec<bool> {
        match &self.cdf {
            Some(cdf) => {
                let u = rng.gen::<f64>() * cdf[cdf.len() - 1];
                let idx = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
                let mask = idx + 1;
                (0..self.m).map(|i| mask >> i & 1 == 1).collect()
            }
            None => {
                let total = self.first_cdf[self.m - 1];
                let u = rng.gen::<f64>() * total;
                let first = self.first_cdf.partition_point(|&c| c <= u).min(self.m - 1);
                (0..self.m).map(|i| i == first || (i > first && rng.gen::<f64>() < self.q)).collect()
            }
        }
    }
}

fn union_of(q: f64, m: usize) -> f64 {
    -libm::expm1(m as f64 * libm::log1p(-q))
}

/// Conditional per-block subsample of a block-model sample.
pub fn subsample_blocks(d: &BlockDesign, present: &[usize], p_tilde: f64, seed: u64) -> Result<Graph> {
    let m = d.edges_per_block();
    if m > EXACT_OUTCOME_CAP {
        return Err(Error::BlockTooLarge(m));
    }
    if p_tilde <= 0.0 || present.is_empty() {
        return Ok(Graph::empty(d.n));
    }
    let sampler = NonEmptySubsetSampler::new(m, p_tilde);
    let mut rng = stream(seed, Phase::BlockSubsample, 0);
    let mut edges = Vec::new();
    for &b in present {
        let pts = &d.blocks[b];
        let flags = sampler.draw(&mut rng);
        let mut k = 0;
        for x in 0..pts.len() {
            for y in x + 1..pts.len() {
                if flags[k] {
                    edges.push((pts[x], pts[y]));
                }
                k += 1;
            }
        }
    }
    Ok(Graph::from_edges_lossy(d.n, edges))
}

/// Skeletons and their blow-ups for every matching.
#[derive(Clone, Debug)]
pub struct LayerSet {
    /// Block indices of each matching; skeleton vertex `j` is block `matchings[i][j]`.
    pub matchings: Vec<Vec<usize>>,
    /// `G_i ~ G(|M_i|, p')`.
    pub skeletons: Vec<Graph>,
    /// Blow-up of `G_i` by the blocks of `M_i`, on the host vertex set.
    pub layers: Vec<Graph>,
    /// Blow-up of the cube of `G_i`.
    pub cube_layers: Vec<Graph>,
}

impl LayerSet {
    pub fn z(&self) -> usize {
        self.matchings.len()
    }

    /// For each host vertex, its skeleton vertex in layer `i`, if covered.
    pub fn skeleton_vertex_map(&self, d: &BlockDesign, i: usize) -> Vec<Option<usize>> {
        let mut map = vec![None; d.n];
        for (j, &b) in self.matchings[i].iter().enumerate() {
            for &v in &d.blocks[b] {
                map[v] = Some(j);
            }
        }
        map
    }
}

/// Blow-up of a skeleton whose vertices are blocks.
pub fn blow_up_by_blocks(d: &BlockDesign, blocks: &[usize], skeleton: &Graph) -> Graph {
    let mut edges = Vec::with_capacity(skeleton.m() * d.block_size * d.block_size);
    for (x, y) in skeleton.edges() {
        for &u in &d.blocks[blocks[x]] {
            for &v in &d.blocks[blocks[y]] {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges_lossy(d.n, edges)
}

pub fn build_layers(d: &BlockDesign, matchings: &[Vec<usize>], p_prime: f64, seed: u64) -> LayerSet {
    let mut skeletons = Vec::new();
    let mut layers = Vec::new();
    let mut cube_layers = Vec::new();
    for (i, m) in matchings.iter().enumerate() {
        let g = sample_gnp_with(m.len(), p_prime, &mut stream(seed, Phase::Skeleton, i as u64));
        layers.push(blow_up_by_blocks(d, m, &g));
        cube_layers.push(blow_up_by_blocks(d, m, &graph_power(&g, 3)));
        skeletons.push(g);
    }
    LayerSet { matchings: matchings.to_vec(), skeletons, layers, cube_layers }
}

/// Conditional per-biclique subsample of every layer.
pub fn subsample_layers(d: &BlockDesign, layers: &LayerSet, p_tilde_prime: f64, seed: u64) -> Vec<Graph> {
    let m = d.block_size * d.block_size;
    let sampler = (p_tilde_prime > 0.0).then(|| NonEmptySubsetSampler::new(m, p_tilde_prime));
    (0..layers.z())
        .map(|i| {
            let Some(sampler) = &sampler else { return Graph::empty(d.n) };
            let mut rng = stream(seed, Phase::LayerSubsample, i as u64);
            let mut edges = Vec::new();
            for (x, y) in layers.skeletons[i].edges() {
                let (bx, by) = (&d.blocks[layers.matchings[i][x]], &d.blocks[layers.matchings[i][y]]);
                let flags = sampler.draw(&mut rng);
                let mut k = 0;
                for &u in bx {
                    for &v in by {
                        if flags[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
            }
            Graph::from_edges_lossy(d.n, edges)
        })
        .collect()
}

/// Layers coupled inside independent `G(n, p̃')` samples.
#[derive(Clone, Debug)]
pub struct LayerCoupling {
    /// `F_i ~ G(n, p̃')`.
    pub f: Vec<Graph>,
    /// Edges of `F_i` joining two distinct blocks of `M_i`.
    pub l: Vec<Graph>,
    pub f_union: Graph,
    pub l_union: Graph,
    /// Every `L_i ⊆ F_i` and `L ⊆ F`.
    pub contained: bool,
}

pub fn couple_layers_into_gnp(d: &BlockDesign, matchings: &[Vec<usize>], z: usize, p_tilde_prime: f64, seed: u64) -> LayerCoupling {
    let z = z.min(matchings.len());
    let mut f = Vec::with_capacity(z);
    let mut l = Vec::with_capacity(z);
    for (i, m) in matchings.iter().take(z).enumerate() {
        let fi = sample_gnp_with(d.n, p_tilde_prime, &mut stream(seed, Phase::Coupling, i as u64));
        let mut owner = vec![usize::MAX; d.n];
        for (j, &b) in m.iter().enumerate() {
            for &v in &d.blocks[b] {
                owner[v] = j;
            }
        }
        let li = fi.filter_edges(|_, (u, v)| owner[u] != usize::MAX && owner[v] != usize::MAX && owner[u] != owner[v]);
        f.push(fi);
        l.push(li);
    }
    let f_union = Graph::union(d.n, &f.iter().collect::<Vec<_>>());
    let l_union = Graph::union(d.n, &l.iter().collect::<Vec<_>>());
    let contained = f.iter().zip(&l).all(|(fi, li)| li.is_subgraph_of(fi)) && l_union.is_subgraph_of(&f_union);
    LayerCoupling { f, l, f_union, l_union, contained }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::affine_plane;
    use crate::rng::from_seed;

    #[test]
    fn pair_indexing_is_bijective() {
        let mut k = 0;
        for v in 1..60 {
            for u in 0..v {
                assert_eq!(pair_of(k), (u, v));
                k += 1;
            }
        }
    }

    #[test]
    fn gnp_extremes_and_density() {
        assert_eq!(sample_gnp(10, 0.0, 1).m(), 0);
        assert_eq!(sample_gnp(10, 1.0, 1), Graph::complete(10));
        let g = sample_gnp(400, 0.1, 5);
        let expected = 0.1 * 79800.0;
        assert!((g.m() as f64 - expected).abs() < 5.0 * libm::sqrt(expected));
        assert_eq!(g, sample_gnp(400, 0.1, 5));
    }

    #[test]
    fn block_model_full_presence() {
        let d = BlockDesign::fano();
        let s = sample_block_model(&d, 1.0, 3);
        assert_eq!(s.graph, Graph::complete(7));
        assert_eq!(s.present.len(), 7);
    }

    #[test]
    fn subsample_respects_cap() {
        let d = affine_plane(7).unwrap();
        assert_eq!(subsample_blocks(&d, &[0], 0.1, 1), Err(Error::BlockTooLarge(21)));
    }

    #[test]
    fn subsample_is_nonempty_per_block() {
        let d = BlockDesign::fano();
        let all: Vec<usize> = (0..7).collect();
        for seed in 0..50 {
            let g = subsample_blocks(&d, &all, 0.05, seed).unwrap();
            let idx = d.pair_index();
            let mut hit = [false; 7];
            for (u, v) in g.edges() {
                hit[idx.block_of(u, v).unwrap()] = true;
            }
            assert!(hit.iter().all(|&h| h));
        }
    }

    #[test]
    fn first_success_sampler_matches_law() {
        let s = NonEmptySubsetSampler::new(20, 0.05);
        assert!(!s.is_exact_enumeration());
        let mut rng = from_seed(9);
        let trials = 40000;
        let mut size_one = 0;
        for _ in 0..trials {
            let k = s.draw(&mut rng).iter().filter(|&&b| b).count();
            assert!(k >= 1);
            if k == 1 {
                size_one += 1;
            }
        }
        let expected = 20.0 * s.outcome_probability(1);
        let got = size_one as f64 / trials as f64;
        assert!((got - expected).abs() < 4.0 * libm::sqrt(expected * (1.0 - expected) / trials as f64));
    }

    #[test]
    fn layers_examples() {
        let d = affine_plane(3).unwrap();
        let class = d.parallel_classes.clone().unwrap()[0].clone();
        let m = vec![class[..2].to_vec()];
        let ls = build_layers(&d, &m, 1.0, 0);
        assert_eq!(ls.layers[0].m(), 9);
        let m = vec![class.clone()];
        let ls = build_layers(&d, &m, 1.0, 0);
        assert_eq!(ls.skeletons[0], Graph::complete(3));
        assert_eq!(ls.cube_layers[0].m(), 27);
        let sub = subsample_layers(&d, &ls, 0.2, 4);
        assert!(sub[0].is_subgraph_of(&ls.layers[0]));
    }

    #[test]
    fn coupling_contains() {
        let d = affine_plane(5).unwrap();
        let classes = d.parallel_classes.clone().unwrap();
        let c = couple_layers_into_gnp(&d, &classes, 3, 0.3, 2);
        assert!(c.contained);
        assert_eq!(c.f.len(), 3);
    }
}
