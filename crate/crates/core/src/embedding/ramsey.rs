//! End-to-end search for a monochromatic copy of a subcubic pattern.

use super::blowup::{monochromatic_tree_blowup, qpartition_or_cliques, restrict_colouring, BlowupOutcome, LayerInstance, LayerSplit, SplitParams, TreeBlowupParams};
use super::cycles::{embed_cycles_pipeline, CandidateAssignment, CyclePipeline, CyclePipelineOutcome};
use super::map::{validate_embedding, EmbeddingMap};
use super::search::{find_copy, Search};
use crate::bitset::BitSet;
use crate::decomposition::{build_tree_blowup_container, decompose_cubic, tree_decomposition_small, Decomposition, TreeBlowupContainer};
use crate::error::{Error, Result};
use crate::graph::{find_monochromatic_clique, Colour, Graph, SearchLimits, TwoColouring};
use crate::host::LayeredHost;
use crate::random::{block_union, subsample_blocks, subsample_layers};
use crate::regularity::{
    cleanup_partition, find_regular_red_sets_from_cliques, find_regular_red_sets_from_densifiers, pair_density, regularity_partition, Densifier,
    PartitionConfig, RedSetsConfig, RedSetsOutcome, ThresholdMode,
};
use crate::rng::{stream, Phase};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use rand::seq::SliceRandom;

#[derive(Clone, Debug)]
pub struct RamseyConfig {
    /// Shortest induced cycle removed by the decomposition.
    pub ell: usize,
    /// Labels of the distance-two colouring; twice as many cycle sets.
    pub classes: usize,
    /// Parts of the regularity partition.
    pub parts: usize,
    pub eps: f64,
    /// A pair is dense when its density is at least this share of the overall density.
    pub density_ratio: f64,
    /// Share of `n` a probe set needs before the second case is taken.
    pub case_two_fraction: f64,
    /// Probe set sizes as shares of `n`, largest first.
    pub probe_sizes: Vec<f64>,
    pub probes_per_size: usize,
    pub probe_budget: u64,
    /// Layers examined by the densifier-or-cliques split.
    pub max_layers: usize,
    /// Cleanup keeps vertices with at least this share of the expected degree into every set.
    pub cleanup_ratio: f64,
    /// Anchors need `⌈ñd / threshold_divisor⌉` free neighbours in a half.
    pub threshold_divisor: f64,
    pub nice_beta: f64,
    pub search_budget: u64,
    pub limits: SearchLimits,
    /// Run the first case when the second fails.
    pub fallback_case_one: bool,
    /// Retry the cycles in the whole target colour when the subsample fails.
    pub fallback_full_colour: bool,
    pub seed: u64,
}

impl Default for RamseyConfig {
    fn default() -> Self {
        RamseyConfig {
            ell: 5,
            classes: 10,
            parts: 24,
            eps: 0.7,
            density_ratio: 0.5,
            case_two_fraction: 0.2,
            probe_sizes: vec![1.0, 0.5, 0.25],
            probes_per_size: 2,
            probe_budget: 200_000,
            max_layers: 8,
            cleanup_ratio: 0.1,
            threshold_divisor: 20.0,
            nice_beta: 0.9,
            search_budget: 2_000_000,
            limits: SearchLimits::default(),
            fallback_case_one: true,
            fallback_full_colour: true,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RamseyCase {
    /// Both colours contain the low-treewidth part on every probe set.
    One,
    /// Some large probe set misses it in one colour.
    Two,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageLog {
    pub stage: &'static str,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RamseyReport {
    pub colour: Option<Colour>,
    pub map: Option<EmbeddingMap>,
    pub case: Option<RamseyCase>,
    pub log: Vec<StageLog>,
}

impl RamseyReport {
    pub fn success(&self) -> bool {
        self.map.is_some()
    }

    /// The first failed stage, if the run failed.
    pub fn failed_stage(&self) -> Option<&StageLog> {
        if self.success() {
            None
        } else {
            self.log.iter().rev().find(|l| !l.ok)
        }
    }
}

struct Run {
    log: Vec<StageLog>,
}

impl Run {
    fn note(&mut self, stage: &'static str, ok: bool, detail: String) {
        self.log.push(StageLog { stage, ok, detail });
    }
}

fn density(g: &Graph, n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        g.m() as f64 / (n * (n - 1) / 2) as f64
    }
}

/// The decomposed pattern and its low-treewidth part.
struct Pattern<'a> {
    h: &'a Graph,
    decomposition: Decomposition,
    j: Graph,
    container: Option<TreeBlowupContainer>,
}

/// Searches the host for a copy of `h` whose edges all have one colour.
pub fn ramsey_embed(host: &LayeredHost, colouring: &TwoColouring, h: &Graph, cfg: &RamseyConfig) -> Result<RamseyReport> {
    if let Some(v) = (0..h.n()).find(|&v| h.degree(v) > 3) {
        return Err(Error::DegreeExceeded { vertex: v, degree: h.degree(v) });
    }
    let n = host.n();
    if h.n() > n {
        return Err(Error::PatternTooLarge { pattern: h.n(), host: n });
    }
    if colouring.graph().n() != n {
        return Err(Error::InvalidInput(format!("colouring on {} vertices for a host on {n}", colouring.graph().n())));
    }
    let mut run = Run { log: Vec::new() };
    if h.n() == 0 {
        run.note("pattern", true, "empty pattern".into());
        return Ok(RamseyReport { colour: Some(Colour::Red), map: Some(EmbeddingMap::default()), case: None, log: run.log });
    }
    let decomposition = decompose_cubic(h, cfg.ell)?;
    let j = h.induced_subgraph(&decomposition.j);
    run.note(
        "decompose",
        true,
        format!("{} cycles, remainder on {} vertices with {} edges", decomposition.cycles.len(), j.n(), j.m()),
    );
    let td = tree_decomposition_small(&j, crate::decomposition::EXACT_TREEWIDTH_CAP);
    let container = match build_tree_blowup_container(&j, &td, 3) {
        Ok(c) => {
            run.note("container", true, format!("width {}, tree on {} nodes, k = {}", td.width, c.tree.n(), c.k));
            Some(c)
        }
        Err(e) => {
            run.note("container", false, format!("{e}"));
            None
        }
    };
    let pattern = Pattern { h, decomposition, j, container };

    let (case, lacking) = probe(host, colouring, &pattern, cfg, &mut run);
    if case == RamseyCase::Two {
        let (chi, u) = lacking.unwrap();
        let target = chi.other();
        let work = if target == Colour::Red { colouring.clone() } else { colouring.swapped() };
        match case_two(host, &work, &u, &pattern, cfg, &mut run)? {
            Some(map) => return finish(host, colouring, &pattern, map, target, case, run),
            None if !cfg.fallback_case_one => return Ok(RamseyReport { colour: None, map: None, case: Some(case), log: run.log }),
            None => run.note("fallback", true, "second case failed; running the first".into()),
        }
    }
    match case_one(host, colouring, &pattern, cfg, &mut run)? {
        Some((target, map)) => finish(host, colouring, &pattern, map, target, RamseyCase::One, run),
        None => Ok(RamseyReport { colour: None, map: None, case: Some(case), log: run.log }),
    }
}

fn finish(host: &LayeredHost, colouring: &TwoColouring, p: &Pattern<'_>, map: EmbeddingMap, colour: Colour, case: RamseyCase, mut run: Run) -> Result<RamseyReport> {
    let check = validate_embedding(p.h, &host.host, &map, Some((colouring, colour)), None);
    if check.is_valid() {
        run.note("validation", true, format!("{} copy validated", colour.name()));
        Ok(RamseyReport { colour: Some(colour), map: Some(map), case: Some(case), log: run.log })
    } else {
        run.note("validation", false, check.failures.join("; "));
        Ok(RamseyReport { colour: None, map: None, case: Some(case), log: run.log })
    }
}

/// Largest probe set on which one colour misses the low-treewidth part.
fn probe(host: &LayeredHost, colouring: &TwoColouring, p: &Pattern<'_>, cfg: &RamseyConfig, run: &mut Run) -> (RamseyCase, Option<(Colour, Vec<usize>)>) {
    let n = host.n();
    if p.j.m() == 0 {
        run.note("probe", true, "remainder has no edges; both colours contain it".into());
        return (RamseyCase::One, None);
    }
    let adj = [colouring.subgraph(Colour::Red).adjacency_sets(), colouring.subgraph(Colour::Blue).adjacency_sets()];
    let mut capped = 0;
    let mut idx = 0u64;
    for &share in &cfg.probe_sizes {
        let size = (libm::round(share * n as f64) as usize).clamp(p.j.n(), n);
        for _ in 0..cfg.probes_per_size {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut stream(cfg.seed, Phase::Probe, idx));
            idx += 1;
            let mut u = order[..size].to_vec();
            u.sort_unstable();
            let allowed = BitSet::from_iter(n, u.iter().copied());
            for (ci, colour) in [Colour::Red, Colour::Blue].into_iter().enumerate() {
                match find_copy(&p.j, &adj[ci], &allowed, None, cfg.probe_budget) {
                    Search::Absent => {
                        let case = if size as f64 >= cfg.case_two_fraction * n as f64 { RamseyCase::Two } else { RamseyCase::One };
                        run.note("probe", true, format!("{} misses the remainder on a set of {size} vertices", colour.name()));
                        return (case, Some((colour, u)));
                    }
                    Search::Capped => capped += 1,
                    Search::Found(_) => {}
                }
            }
        }
    }
    run.note("probe", true, format!("both colours contain the remainder on every probe set ({capped} capped searches)"));
    (RamseyCase::One, None)
}

fn partition_config(cfg: &RamseyConfig, p_scale: f64, salt: u64) -> PartitionConfig {
    PartitionConfig::new(cfg.eps, p_scale, cfg.parts, cfg.parts, cfg.seed ^ salt)
}

/// Regular dense sets of one colour: partition the colour class of `g` and
/// take a clique of good pairs.
fn regular_sets(g: &Graph, vertices: &[usize], k: usize, cfg: &RamseyConfig, salt: u64) -> Result<core::result::Result<Vec<Vec<usize>>, String>> {
    let n = g.n();
    let p_scale = density(g, n).max(1e-9);
    let part = regularity_partition(g, vertices, &partition_config(cfg, p_scale, salt), None);
    let t = part.parts.len();
    if t < k {
        return Ok(Err(format!("{t} parts, {k} needed")));
    }
    let complete = Graph::complete(t);
    let mut colours = Vec::with_capacity(complete.m());
    for (i, j) in complete.edges() {
        let d = pair_density(g, &part.parts[i], &part.parts[j])?.value();
        let good = part.report(i, j).is_regular() && d >= cfg.density_ratio * p_scale;
        colours.push(if good { Colour::Red } else { Colour::Blue });
    }
    let meta = TwoColouring::new(complete, colours)?;
    let all: Vec<usize> = (0..t).collect();
    match find_monochromatic_clique(&meta, &all, Colour::Red, k, cfg.limits)? {
        Some(chosen) => Ok(Ok(chosen.into_iter().map(|i| part.parts[i].clone()).collect())),
        None => Ok(Err(format!("no {k} pairwise regular dense parts among {t}"))),
    }
}

fn case_one(host: &LayeredHost, colouring: &TwoColouring, p: &Pattern<'_>, cfg: &RamseyConfig, run: &mut Run) -> Result<Option<(Colour, EmbeddingMap)>> {
    let n = host.n();
    let pr = host.params.probabilities;
    let tilde = subsample_blocks(&host.design, &host.base.present, pr.p_tilde, cfg.seed)?;
    run.note("subsample", true, format!("subsample has {} edges (density {:.4})", tilde.m(), density(&tilde, n)));
    let k = 2 * cfg.classes;
    let all: Vec<usize> = (0..n).collect();
    let red = colouring.subgraph(Colour::Red);
    let red_edges = tilde.edges().filter(|&(u, v)| red.has_edge(u, v)).count();
    let first = if 2 * red_edges >= tilde.m() { Colour::Red } else { Colour::Blue };
    for (salt, target) in [first, first.other()].into_iter().enumerate() {
        let work = if target == Colour::Red { colouring.clone() } else { colouring.swapped() };
        let f = tilde.filter_edges(|_, (u, v)| work.is(u, v, Colour::Red));
        match regular_sets(&f, &all, k, cfg, salt as u64)? {
            Ok(sets) => {
                run.note("regular-sets", true, format!("{k} {} sets from the subsample partition", target.name()));
                if let Some(map) = endgame(host, &work, &f, sets, p, cfg, run)? {
                    return Ok(Some((target, map)));
                }
            }
            Err(detail) => run.note("regular-sets", false, format!("{}: {detail}", target.name())),
        }
    }
    Ok(None)
}

fn case_two(host: &LayeredHost, work: &TwoColouring, u: &[usize], p: &Pattern<'_>, cfg: &RamseyConfig, run: &mut Run) -> Result<Option<EmbeddingMap>> {
    let n = host.n();
    let hp = &host.params;
    let z = host.z().min(cfg.max_layers);
    let tree = p.container.as_ref().map(|c| &c.tree);
    let split = SplitParams {
        c: host.design.block_size,
        c_prime: hp.c_prime.min(host.design.block_size),
        rho: hp.rho,
        gamma: hp.gamma,
        s: hp.s,
        q: hp.q,
        d: 9,
        limits: cfg.limits,
    };
    let mut layers = Vec::with_capacity(z);
    let mut certificates = Vec::new();
    let mut densifiers: Vec<Option<Densifier>> = Vec::new();
    let (mut n_cert, mut n_dens) = (0, 0);
    for i in 0..z {
        let m = &host.layers.matchings[i];
        let layer = Graph::union(n, &[&host.layers.layers[i], &block_union(&host.design, m)]);
        let outcome = qpartition_or_cliques(&host.design, m, &layer, work, u, tree, &split)?;
        match outcome {
            LayerSplit::Certificates(c) => {
                n_cert += 1;
                certificates.extend(c);
                densifiers.push(None);
            }
            LayerSplit::Densifier { densifier, violations } => {
                n_dens += 1;
                densifiers.push(violations.is_empty().then_some(densifier));
            }
            LayerSplit::BlueTree => {
                run.note("split", false, format!("layer {i}: the missing colour holds the truncated tree"));
                densifiers.push(None);
            }
            LayerSplit::Failed(d) => {
                run.note("split", false, format!("layer {i}: {d}"));
                densifiers.push(None);
            }
        }
        layers.push(layer);
    }
    run.note("split", n_cert + n_dens > 0, format!("{z} layers: {n_cert} certificate, {n_dens} densifier"));
    let k = 2 * cfg.classes;
    let (sets, f) = if n_cert >= n_dens && n_cert > 0 {
        let on_base = restrict_colouring(work, &host.base.graph)?;
        let p_scale = density(&on_base.subgraph(Colour::Red), n).max(1e-9);
        let mut rc = RedSetsConfig::new(k, split.c_prime, partition_config(cfg, p_scale, 7));
        rc.beta = cfg.nice_beta;
        rc.rho = hp.rho;
        rc.threshold = ThresholdMode::Relative(cfg.density_ratio);
        rc.limits = cfg.limits;
        match find_regular_red_sets_from_cliques(&on_base, &host.design, u, &certificates, &rc)? {
            RedSetsOutcome::Found(r) => {
                run.note("red-sets", true, format!("{k} sets from clique certificates"));
                let tilde = subsample_blocks(&host.design, &host.base.present, hp.probabilities.p_tilde, cfg.seed)?;
                (r.sets, tilde.filter_edges(|_, (a, b)| work.is(a, b, Colour::Red)))
            }
            RedSetsOutcome::Failed { stage, detail } => {
                run.note("red-sets", false, format!("{stage:?}: {detail}"));
                return Ok(None);
            }
        }
    } else if n_dens > 0 {
        let union = Graph::union(n, &layers.iter().collect::<Vec<_>>());
        let on_layers = restrict_colouring(work, &union)?;
        let p_scale = density(&on_layers.subgraph(Colour::Red), n).max(1e-9);
        let mut rc = RedSetsConfig::new(k, split.c_prime, partition_config(cfg, p_scale, 11));
        rc.limits = cfg.limits;
        match find_regular_red_sets_from_densifiers(&layers, &on_layers, u, &densifiers, &rc)? {
            RedSetsOutcome::Found(r) => {
                run.note("red-sets", true, format!("{k} sets from densifiers scoring {}", r.score));
                let sub = subsample_layers(&host.design, &host.layers, hp.probabilities.p_tilde_prime, cfg.seed);
                let refs: Vec<&Graph> = sub.iter().take(z).collect();
                let f = Graph::union(n, &refs).filter_edges(|_, (a, b)| work.is(a, b, Colour::Red));
                (r.sets, f)
            }
            RedSetsOutcome::Failed { stage, detail } => {
                run.note("red-sets", false, format!("{stage:?}: {detail}"));
                return Ok(None);
            }
        }
    } else {
        return Ok(None);
    };
    endgame(host, work, &f, sets, p, cfg, run)
}

/// Embeds the remainder in the leftover vertices and the cycles in the
/// `2·classes` sets; the target colour of `work` is red.
fn endgame(host: &LayeredHost, work: &TwoColouring, f: &Graph, sets: Vec<Vec<usize>>, p: &Pattern<'_>, cfg: &RamseyConfig, run: &mut Run) -> Result<Option<EmbeddingMap>> {
    let n = host.n();
    let dens = density(f, n);
    let expected = sets.iter().map(Vec::len).min().unwrap_or(0) as f64 * dens;
    let cleaned = match cleanup_partition(f, &sets, cfg.cleanup_ratio * dens, None) {
        Ok(c) => {
            let kept: usize = c.sets.iter().map(Vec::len).sum();
            run.note("cleanup", true, format!("{kept} of {} vertices kept", sets.iter().map(Vec::len).sum::<usize>()));
            c.sets
        }
        Err(e) => {
            run.note("cleanup", true, format!("{e}; uncleaned sets kept"));
            sets
        }
    };
    let halves: Vec<[Vec<usize>; 2]> = (0..cfg.classes).map(|c| [cleaned[2 * c].clone(), cleaned[2 * c + 1].clone()]).collect();
    let threshold = (libm::ceil(expected / cfg.threshold_divisor) as usize).max(1);
    let in_sets = BitSet::from_iter(n, cleaned.iter().flatten().copied());
    let region: Vec<usize> = (0..n).filter(|&v| !in_sets.contains(v)).collect();
    let f_adj = f.adjacency_sets();
    let half_sets: Vec<[BitSet; 2]> = halves.iter().map(|h| [BitSet::from_iter(n, h[0].iter().copied()), BitSet::from_iter(n, h[1].iter().copied())]).collect();
    let typical = BitSet::from_iter(
        n,
        region.iter().copied().filter(|&u| half_sets.iter().all(|h| h.iter().any(|s| f_adj[u].intersection_count(s) >= threshold + 3))),
    );
    let region_set = BitSet::from_iter(n, region.iter().copied());
    run.note("tree-region", true, format!("{} vertices, {} typical, anchor threshold {threshold}", region.len(), typical.count()));

    let h = p.h;
    let mut pre: Vec<Option<usize>> = vec![None; h.n()];
    if p.j.n() > 0 {
        let jmap = embed_remainder(host, work, &region_set, &typical, p, cfg, run)?;
        let Some(jmap) = jmap else { return Ok(None) };
        for (i, &v) in p.decomposition.j.iter().enumerate() {
            pre[v] = Some(jmap[i]);
        }
    }
    let assignment = CandidateAssignment::for_decomposition(h, &p.decomposition, &pre, cfg.classes)?;
    let problems = assignment.validate(h);
    if !problems.is_empty() {
        run.note("assignment", false, problems.join("; "));
        return Ok(None);
    }
    let hosts: Vec<(Graph, &'static str)> = if cfg.fallback_full_colour {
        vec![(f.clone(), "subsample"), (work.subgraph(Colour::Red), "full colour")]
    } else {
        vec![(f.clone(), "subsample")]
    };
    for (g, name) in hosts {
        let pipeline = CyclePipeline { host: &g, sets: &halves, h, cycles: &p.decomposition.cycles, assignment: &assignment, threshold, budget: cfg.search_budget };
        match embed_cycles_pipeline(&pipeline, &pre)? {
            CyclePipelineOutcome::Embedded(img) => {
                run.note("cycles", true, format!("{} cycles embedded in the {name}", p.decomposition.cycles.len()));
                return Ok(Some(EmbeddingMap::new(img)));
            }
            CyclePipelineOutcome::Failed { stage, cycle, vertex, detail } => {
                run.note("cycles", false, format!("{name}: {stage:?} at cycle {cycle}, vertex {vertex:?}: {detail}"));
            }
        }
    }
    Ok(None)
}

/// Embeds the low-treewidth remainder in the red part of the host inside
/// `region`; vertices with a neighbour on a cycle go to typical vertices.
fn embed_remainder(
    host: &LayeredHost,
    work: &TwoColouring,
    region: &BitSet,
    typical: &BitSet,
    p: &Pattern<'_>,
    cfg: &RamseyConfig,
    run: &mut Run,
) -> Result<Option<Vec<usize>>> {
    let n = host.n();
    if let Some(c) = &p.container {
        let fits = c.k * 4 <= host.design.block_size;
        if fits && host.z() > 0 {
            let skeleton = &host.layers.skeletons[0];
            let blocks: Vec<Vec<usize>> = host.layers.matchings[0].iter().map(|&b| host.design.blocks[b].clone()).collect();
            let layer = host.layer_with_blocks(0);
            let support = region.to_vec();
            let inst = LayerInstance { layer: &layer, skeleton, blocks: &blocks, colouring: work, support: &support };
            let params = TreeBlowupParams { t: host.design.block_size, r: host.design.block_size, s: 1, k: c.k, d: 3, limits: cfg.limits };
            match monochromatic_tree_blowup(&inst, &c.tree, &params)? {
                BlowupOutcome::Found { colour: Colour::Red, map, .. } => {
                    let img: Vec<usize> = c.embedding.iter().map(|&(t, s)| map.image[t * c.k + s]).collect();
                    let ok = p.j.edges().all(|(a, b)| work.is(img[a], img[b], Colour::Red));
                    run.note("tree-blowup", ok, "container embedded through the layer".into());
                    if ok {
                        return Ok(Some(img));
                    }
                }
                BlowupOutcome::Found { .. } => run.note("tree-blowup", false, "blow-up found only in the other colour".into()),
                BlowupOutcome::Failed { stage, detail } => run.note("tree-blowup", false, format!("{stage:?}: {detail}")),
            }
        } else {
            run.note("tree-blowup", false, format!("skipped: blow-up factor {} exceeds the block cliques", c.k));
        }
    }
    let red = work.subgraph(Colour::Red).adjacency_sets();
    let cyc = BitSet::from_iter(p.h.n(), p.decomposition.cycles.iter().flatten().copied());
    let domains: Vec<BitSet> = p
        .decomposition
        .j
        .iter()
        .map(|&v| if p.h.neighbors(v).any(|w| cyc.contains(w)) { typical.clone() } else { region.clone() })
        .collect();
    match find_copy(&p.j, &red, &BitSet::full(n), Some(&domains), cfg.search_budget) {
        Search::Found(img) => {
            run.note("remainder", true, format!("remainder on {} vertices embedded directly", p.j.n()));
            Ok(Some(img))
        }
        other => {
            let why = if matches!(other, Search::Capped) { "search capped" } else { "no copy" };
            run.note("remainder", false, why.to_string());
            Ok(None)
        }
    }
}
