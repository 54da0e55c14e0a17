//! Extraction of `K` pairwise regular, dense red sets.

use super::{nicely_distributed_blocks, pair_density, regularity_partition, Densifier, PartitionConfig, PartitionResult, RegularPairReport};
use crate::bitset::BitSet;
use crate::design::BlockDesign;
use crate::error::Result;
use crate::graph::{find_monochromatic_clique, Colour, Graph, SearchLimits, TwoColouring};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Red-edge threshold of the meta colouring.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThresholdMode {
    /// At least this many red edges.
    Absolute(f64),
    /// At least `f · |V_i||V_j| · p_scale` red edges.
    Relative(f64),
}

#[derive(Clone, Copy, Debug)]
pub struct RedSetsConfig {
    /// Number of sets wanted.
    pub k: usize,
    pub c_prime: usize,
    pub rho: f64,
    pub beta: f64,
    /// Bar factor for nicely distributed blocks.
    pub xi: f64,
    pub tau: f64,
    pub threshold: ThresholdMode,
    pub partition: PartitionConfig,
    pub limits: SearchLimits,
    /// Cap on the `K`-tuples scored by the densifier pipeline.
    pub max_tuples: usize,
}

impl RedSetsConfig {
    pub fn new(k: usize, c_prime: usize, partition: PartitionConfig) -> Self {
        RedSetsConfig {
            k,
            c_prime,
            rho: 0.5,
            beta: 0.5,
            xi: 1.0 / 200.0,
            tau: 0.25,
            threshold: ThresholdMode::Relative(0.5),
            partition,
            limits: SearchLimits::default(),
            max_tuples: 200_000,
        }
    }
}

/// A block `B` with `B' ⊆ B ∩ R` and no blue `K_{C'}` in `(R ∩ B) − B'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueCertificate {
    pub block: usize,
    pub b_prime: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RedSetStage {
    Precondition,
    CertificateValidation,
    Partition,
    NiceBlocks,
    MetaColouring,
    MetaClique,
    TupleScoring,
}

#[derive(Clone, Debug)]
pub struct RedSets {
    pub sets: Vec<Vec<usize>>,
    /// Indices of the sets among the partition's parts.
    pub part_indices: Vec<usize>,
    /// Reports for the pairs `i < j` of `sets`, lexicographic.
    pub reports: Vec<RegularPairReport>,
    /// Red densities, same order as `reports`.
    pub densities: Vec<f64>,
    /// `τ · p_scale`.
    pub density_target: f64,
    /// Layers scoring the chosen tuple (densifier pipeline only).
    pub score: usize,
    pub partition: PartitionResult,
}

impl RedSets {
    pub fn meets_density_target(&self) -> bool {
        self.densities.iter().all(|&d| d >= self.density_target)
    }
}

#[derive(Clone, Debug)]
pub enum RedSetsOutcome {
    Found(RedSets),
    Failed { stage: RedSetStage, detail: String },
}

impl RedSetsOutcome {
    pub fn found(&self) -> Option<&RedSets> {
        match self {
            RedSetsOutcome::Found(r) => Some(r),
            RedSetsOutcome::Failed { .. } => None,
        }
    }

    fn fail(stage: RedSetStage, detail: String) -> Self {
        RedSetsOutcome::Failed { stage, detail }
    }
}

fn red_subgraph_on(c: &TwoColouring, base: &Graph, r: &[usize]) -> Graph {
    let keep = BitSet::from_iter(base.n(), r.iter().copied());
    base.filter_edges(|_, (u, v)| keep.contains(u) && keep.contains(v) && c.is(u, v, Colour::Red))
}

fn finish(red: &Graph, partition: PartitionResult, chosen: Vec<usize>, target: f64, score: usize) -> Result<RedSets> {
    let mut reports = Vec::new();
    let mut densities = Vec::new();
    for (x, &i) in chosen.iter().enumerate() {
        for &j in &chosen[x + 1..] {
            reports.push(partition.report(i, j).clone());
            densities.push(pair_density(red, &partition.parts[i], &partition.parts[j])?.value());
        }
    }
    Ok(RedSets {
        sets: chosen.iter().map(|&i| partition.parts[i].clone()).collect(),
        part_indices: chosen,
        reports,
        densities,
        density_target: target,
        score,
        partition,
    })
}

/// Pipeline from blocks carrying few blue cliques to `K` regular red sets.
pub fn find_regular_red_sets_from_cliques(
    c: &TwoColouring,
    design: &BlockDesign,
    r: &[usize],
    certificates: &[CliqueCertificate],
    cfg: &RedSetsConfig,
) -> Result<RedSetsOutcome> {
    use RedSetStage::*;
    let g = c.graph();
    let in_r = BitSet::from_iter(g.n(), r.iter().copied());
    if certificates.is_empty() {
        return Ok(RedSetsOutcome::fail(CertificateValidation, String::from("no certificates")));
    }
    let max_prime = libm::floor(cfg.rho * design.block_size as f64 + 1e-9) as usize;
    let mut candidates = Vec::new();
    for cert in certificates {
        let block = &design.blocks[cert.block];
        if cert.b_prime.len() > max_prime || cert.b_prime.iter().any(|v| !block.contains(v) || !in_r.contains(*v)) {
            return Ok(RedSetsOutcome::fail(CertificateValidation, format!("block {}: B' is not a small subset of B ∩ R", cert.block)));
        }
        let rest: Vec<usize> = block.iter().copied().filter(|&v| in_r.contains(v) && !cert.b_prime.contains(&v)).collect();
        if let Some(k) = find_monochromatic_clique(c, &rest, Colour::Blue, cfg.c_prime, cfg.limits)? {
            return Ok(RedSetsOutcome::fail(CertificateValidation, format!("block {}: blue clique {k:?}", cert.block)));
        }
        let b0: Vec<usize> = block.iter().copied().filter(|v| !cert.b_prime.contains(v)).collect();
        candidates.push((cert.block, b0));
    }
    let red = red_subgraph_on(c, g, r);
    let partition = regularity_partition(&red, r, &cfg.partition, None);
    let t = partition.parts.len();
    if t < cfg.k {
        return Ok(RedSetsOutcome::fail(Partition, format!("{t} parts, {} needed", cfg.k)));
    }
    let nice = nicely_distributed_blocks(&partition.parts, &candidates, cfg.beta, design.block_size, cfg.xi);
    if nice.blocks.is_empty() {
        return Ok(RedSetsOutcome::fail(NiceBlocks, String::from("no nicely distributed block")));
    }
    let bar = cfg.xi * design.block_size as f64 / t as f64;
    let mut owner = vec![usize::MAX; g.n()];
    for (i, p) in partition.parts.iter().enumerate() {
        for &v in p {
            owner[v] = i;
        }
    }
    let mut supported = vec![false; t];
    for (b, b0) in &candidates {
        if !nice.blocks.contains(b) {
            continue;
        }
        let mut hits = vec![0usize; t];
        b0.iter().filter(|&&v| owner[v] != usize::MAX).for_each(|&v| hits[owner[v]] += 1);
        for i in 0..t {
            if hits[i] as f64 >= bar {
                supported[i] = true;
            }
        }
    }
    let complete = Graph::complete(t);
    let mut colours = Vec::with_capacity(complete.m());
    let mut red_pairs = 0;
    for (i, j) in complete.edges() {
        let (a, b) = (&partition.parts[i], &partition.parts[j]);
        let edges = pair_density(&red, a, b)?.edges as f64;
        let bar = match cfg.threshold {
            ThresholdMode::Absolute(x) => x,
            ThresholdMode::Relative(f) => f * (a.len() * b.len()) as f64 * cfg.partition.p_scale,
        };
        let is_red = supported[i] && supported[j] && partition.report(i, j).is_regular() && edges >= bar;
        red_pairs += usize::from(is_red);
        colours.push(if is_red { Colour::Red } else { Colour::Blue });
    }
    if red_pairs == 0 && cfg.k > 1 {
        return Ok(RedSetsOutcome::fail(MetaColouring, String::from("no red pair in the meta colouring")));
    }
    let meta = TwoColouring::new(complete, colours)?;
    let all: Vec<usize> = (0..t).filter(|&i| supported[i]).collect();
    let Some(chosen) = find_monochromatic_clique(&meta, &all, Colour::Red, cfg.k, cfg.limits)? else {
        return Ok(RedSetsOutcome::fail(MetaClique, format!("no red K_{} among {} supported parts", cfg.k, all.len())));
    };
    let target = cfg.tau * cfg.partition.p_scale;
    Ok(RedSetsOutcome::Found(finish(&red, partition, chosen, target, 0)?))
}

/// Pipeline from layers carrying red densifiers to `K` regular red sets.
/// `densifiers[i]` belongs to `layers[i]`; `colouring` must cover the layer union.
pub fn find_regular_red_sets_from_densifiers(
    layers: &[Graph],
    colouring: &TwoColouring,
    r: &[usize],
    densifiers: &[Option<Densifier>],
    cfg: &RedSetsConfig,
) -> Result<RedSetsOutcome> {
    use RedSetStage::*;
    let z = layers.len();
    let have = densifiers.iter().filter(|d| d.is_some()).count();
    if z == 0 || densifiers.len() != z || 2 * have < z || have == 0 {
        return Ok(RedSetsOutcome::fail(Precondition, format!("{have} densifiers for {z} layers")));
    }
    let n = colouring.graph().n();
    let union = Graph::union(n, &layers.iter().collect::<Vec<_>>());
    let red = red_subgraph_on(colouring, &union, r);
    let partition = regularity_partition(&red, r, &cfg.partition, None);
    let t = partition.parts.len();
    if t < cfg.k {
        return Ok(RedSetsOutcome::fail(Partition, format!("{t} parts, {} needed", cfg.k)));
    }
    // meets[i][k][f]: part k meets family f of layer i's densifier in β·|part| vertices.
    let mut owner = vec![usize::MAX; n];
    for (i, p) in partition.parts.iter().enumerate() {
        for &v in p {
            owner[v] = i;
        }
    }
    let meets: Vec<Vec<Vec<bool>>> = densifiers
        .iter()
        .flatten()
        .map(|d| {
            let mut m = vec![vec![false; d.families.len()]; t];
            for f in 0..d.families.len() {
                let mut hits = vec![0usize; t];
                d.family_vertices(f).iter().filter(|&&v| owner[v] != usize::MAX).for_each(|&v| hits[owner[v]] += 1);
                for k in 0..t {
                    m[k][f] = hits[k] as f64 >= cfg.beta * partition.parts[k].len() as f64;
                }
            }
            m
        })
        .collect();
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut tuple: Vec<usize> = (0..cfg.k).collect();
    let mut scored = 0usize;
    loop {
        let regular = tuple.iter().enumerate().all(|(x, &i)| tuple[x + 1..].iter().all(|&j| partition.report(i, j).is_regular()));
        if regular {
            let score = meets.iter().filter(|m| distinct_families(m, &tuple)).count();
            if best.as_ref().is_none_or(|b| score > b.0) {
                best = Some((score, tuple.clone()));
            }
        }
        scored += 1;
        if scored >= cfg.max_tuples || !next_combination(&mut tuple, t) {
            break;
        }
    }
    match best {
        Some((score, chosen)) if score > 0 => {
            let target = cfg.tau * cfg.partition.p_scale;
            Ok(RedSetsOutcome::Found(finish(&red, partition, chosen, target, score)?))
        }
        Some(_) => Ok(RedSetsOutcome::fail(TupleScoring, String::from("no tuple is nice for any layer"))),
        None => Ok(RedSetsOutcome::fail(TupleScoring, format!("no pairwise regular {}-tuple", cfg.k))),
    }
}

/// Whether the tuple's parts can be matched to distinct families they meet.
fn distinct_families(meets: &[Vec<bool>], tuple: &[usize]) -> bool {
    let q = meets.first().map_or(0, |m| m.len());
    let mut owner = vec![usize::MAX; q];
    fn augment(meets: &[Vec<bool>], tuple: &[usize], x: usize, seen: &mut [bool], owner: &mut [usize]) -> bool {
        for f in 0..owner.len() {
            if meets[tuple[x]][f] && !seen[f] {
                seen[f] = true;
                if owner[f] == usize::MAX || augment(meets, tuple, owner[f], seen, owner) {
                    owner[f] = x;
                    return true;
                }
            }
        }
        false
    }
    (0..tuple.len()).all(|x| augment(meets, tuple, x, &mut vec![false; q], &mut owner))
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
