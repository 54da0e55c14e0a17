//! Monochromatic tree blow-ups in a layer, and the densifier-or-cliques split.

use super::dichotomy::{tree_or_qpartite, Dichotomy};
use super::fp::{embed_tree_in, TREE_SEARCH_BUDGET};
use super::lift::{dense_pairs_lift, lift_blue_tree};
use super::map::{validate_embedding, EmbeddingMap};
use super::search::Search;
use crate::bitset::BitSet;
use crate::design::BlockDesign;
use crate::error::{Error, Result};
use crate::graph::{auxiliary_colouring, blow_up, find_monochromatic_clique, ClassKind, Colour, Graph, RootedTree, SearchLimits, TwoColouring};
use crate::regularity::{validate_densifier, CliqueCertificate, Densifier, DensifierContext, DensifierParams};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Restricts `c` to the edges of `layer`, which must all be coloured.
pub fn restrict_colouring(c: &TwoColouring, layer: &Graph) -> Result<TwoColouring> {
    let mut colours = Vec::with_capacity(layer.m());
    for (u, v) in layer.edges() {
        match c.colour(u, v) {
            Some(x) => colours.push(x),
            None => return Err(Error::InvalidInput(format!("layer edge ({u}, {v}) is not coloured"))),
        }
    }
    TwoColouring::new(layer.clone(), colours)
}

#[derive(Clone, Copy, Debug)]
pub struct TreeBlowupParams {
    /// Size of the monochromatic clique taken in each block.
    pub t: usize,
    /// Fewest support vertices a block needs.
    pub r: usize,
    /// Biclique size of the auxiliary colouring.
    pub s: usize,
    /// Blow-up factor.
    pub k: usize,
    /// Maximum degree of the tree.
    pub d: usize,
    pub limits: SearchLimits,
}

/// A layer seen as a blow-up of its skeleton.
#[derive(Clone, Copy, Debug)]
pub struct LayerInstance<'a> {
    /// `L = A'_i ∪ M_i` on the host vertex set.
    pub layer: &'a Graph,
    /// The skeleton `G_i`.
    pub skeleton: &'a Graph,
    /// Host vertices of each skeleton vertex.
    pub blocks: &'a [Vec<usize>],
    /// Colouring of a graph containing `layer`.
    pub colouring: &'a TwoColouring,
    /// The set `S`.
    pub support: &'a [usize],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlowupStage {
    Blocks,
    Cliques,
    Auxiliary,
    Dichotomy,
    Lift,
    Matchings,
    SkeletonTree,
    DenseLift,
    Validation,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BlowupOutcome {
    /// `map` sends vertex `v * k + i` of `T ⊠ K_k` into the host.
    Found { colour: Colour, map: EmbeddingMap, via_lift: bool },
    Failed { stage: BlowupStage, detail: String },
}

/// Maximum matching between `left` and `right` in `g`, by augmenting paths;
/// returns the partner of each left vertex.
pub fn bipartite_matching(g: &Graph, left: &[usize], right: &[usize]) -> Vec<Option<usize>> {
    let rset = BitSet::from_iter(g.n(), right.iter().copied());
    let mut owner: Vec<Option<usize>> = vec![None; g.n()];
    let mut partner: Vec<Option<usize>> = vec![None; left.len()];
    fn augment(i: usize, g: &Graph, left: &[usize], rset: &BitSet, seen: &mut BitSet, owner: &mut [Option<usize>], partner: &mut [Option<usize>]) -> bool {
        for y in g.neighbors(left[i]) {
            if !rset.contains(y) || seen.contains(y) {
                continue;
            }
            seen.insert(y);
            if owner[y].is_none_or(|j| augment(j, g, left, rset, seen, owner, partner)) {
                owner[y] = Some(i);
                partner[i] = Some(y);
                return true;
            }
        }
        false
    }
    for i in 0..left.len() {
        let mut seen = BitSet::new(g.n());
        augment(i, g, left, &rset, &mut seen, &mut owner, &mut partner);
    }
    partner
}

/// Finds a monochromatic `T ⊠ K_k` in `L[S]`.
pub fn monochromatic_tree_blowup(inst: &LayerInstance<'_>, tree: &RootedTree, p: &TreeBlowupParams) -> Result<BlowupOutcome> {
    let fail = |stage, detail: String| Ok(BlowupOutcome::Failed { stage, detail });
    let cl = restrict_colouring(inst.colouring, inst.layer)?;
    let support = BitSet::from_iter(inst.layer.n(), inst.support.iter().copied());
    let kept: Vec<(usize, Vec<usize>)> = inst
        .blocks
        .iter()
        .enumerate()
        .map(|(v, b)| (v, b.iter().copied().filter(|&x| support.contains(x)).collect::<Vec<_>>()))
        .filter(|(_, a)| a.len() >= p.r.max(p.t))
        .collect();
    if kept.is_empty() {
        return fail(BlowupStage::Blocks, format!("no block meets S in {} vertices", p.r.max(p.t)));
    }
    let mut cliques: Vec<(usize, Colour, Vec<usize>)> = Vec::new();
    for (v, a) in &kept {
        for colour in [Colour::Red, Colour::Blue] {
            if let Some(q) = find_monochromatic_clique(&cl, a, colour, p.t, p.limits)? {
                cliques.push((*v, colour, q));
                break;
            }
        }
    }
    let reds = cliques.iter().filter(|c| c.1 == Colour::Red).count();
    let chi = if 2 * reds >= cliques.len() { Colour::Red } else { Colour::Blue };
    let w: Vec<&(usize, Colour, Vec<usize>)> = cliques.iter().filter(|c| c.1 == chi).collect();
    if w.is_empty() {
        return fail(BlowupStage::Cliques, "no monochromatic clique in any block".into());
    }
    let parts: Vec<Vec<usize>> = w.iter().map(|c| c.2.clone()).collect();
    let aux = auxiliary_colouring(&cl, &parts, p.s, chi, p.limits)?;
    let trunc = tree.truncate();
    let q = 2 * p.k + 1;
    let report = tree_or_qpartite(&aux.colouring, Some(&trunc.tree), p.d * p.d, q, chi);
    let pattern = blow_up(&tree.to_graph(), p.k, ClassKind::Clique).graph;
    match report.outcome {
        Dichotomy::Tree(phi) => {
            let map = match lift_blue_tree(&cl, &parts, &aux, &trunc, &phi, tree, p.k) {
                Ok(m) => m,
                Err(e) => return fail(BlowupStage::Lift, format!("{e}")),
            };
            let check = validate_embedding(&pattern, inst.layer, &map, Some((&cl, chi)), None);
            if !check.is_valid() {
                return fail(BlowupStage::Validation, check.failures.join("; "));
            }
            Ok(BlowupOutcome::Found { colour: chi, map, via_lift: true })
        }
        Dichotomy::DualFailure { .. } => fail(BlowupStage::Dichotomy, format!("neither a tree nor {q} parts of size {}", report.min_part)),
        Dichotomy::Parts(vparts) => {
            let other = chi.other();
            let skel_parts: Vec<Vec<usize>> = vparts.iter().map(|pp| pp.iter().map(|&i| w[i].0).collect()).collect();
            let block_of: Vec<Option<usize>> = {
                let mut b = vec![None; inst.skeleton.n()];
                for (i, c) in w.iter().enumerate() {
                    b[c.0] = Some(i);
                }
                b
            };
            // Shrink S_j ⊆ V_0 so that every matching covers it.
            let mut s_j: Vec<usize> = skel_parts[0].clone();
            let mut partners: Vec<Vec<usize>> = vec![Vec::new(); s_j.len()];
            for part in &skel_parts[1..] {
                let m = bipartite_matching(inst.skeleton, &s_j, part);
                let mut next = Vec::new();
                let mut next_partners = Vec::new();
                for (i, &x) in s_j.iter().enumerate() {
                    if let Some(y) = m[i] {
                        next.push(x);
                        let mut pp = partners[i].clone();
                        pp.push(y);
                        next_partners.push(pp);
                    }
                }
                s_j = next;
                partners = next_partners;
            }
            if s_j.len() < tree.n() {
                return fail(BlowupStage::Matchings, format!("{} skeleton vertices stay covered, tree has {}", s_j.len(), tree.n()));
            }
            let adj = inst.skeleton.adjacency_sets();
            let allowed = BitSet::from_iter(inst.skeleton.n(), s_j.iter().copied());
            let phi = match embed_tree_in(&adj, &allowed, tree, TREE_SEARCH_BUDGET) {
                Search::Found(img) => img,
                _ => return fail(BlowupStage::SkeletonTree, format!("tree not found in the skeleton on {} vertices", s_j.len())),
            };
            let idx_of = |x: usize| s_j.iter().position(|&y| y == x).unwrap();
            let depth = tree.depths();
            let mut classes = Vec::with_capacity(tree.n() * p.k);
            for v in 0..tree.n() {
                let pp = &partners[idx_of(phi[v])];
                for i in 0..p.k {
                    let slot = if depth[v] % 2 == 0 { i } else { p.k + i };
                    classes.push(parts[block_of[pp[slot]].unwrap()].clone());
                }
            }
            let f_prime = cl.subgraph(other);
            let lift = dense_pairs_lift(&pattern, &classes, &f_prime, pattern.max_degree())?;
            let Some(map) = lift.map else {
                return fail(BlowupStage::DenseLift, format!("{} pairs below the density bar", lift.hypothesis_violations.len()));
            };
            let check = validate_embedding(&pattern, inst.layer, &map, Some((&cl, other)), None);
            if !check.is_valid() {
                return fail(BlowupStage::Validation, check.failures.join("; "));
            }
            Ok(BlowupOutcome::Found { colour: other, map, via_lift: false })
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SplitParams {
    pub c: usize,
    pub c_prime: usize,
    pub rho: f64,
    /// Blocks need `|B ∩ S| ≥ ⌈γC/8⌉`.
    pub gamma: f64,
    pub s: usize,
    pub q: usize,
    /// Maximum degree of the truncated tree.
    pub d: usize,
    pub limits: SearchLimits,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LayerSplit {
    /// Most qualifying blocks hold few disjoint blue `K_{C'}`.
    Certificates(Vec<CliqueCertificate>),
    /// Blue-clique parts split into `q` families; `violations` lists failed clauses.
    Densifier { densifier: Densifier, violations: Vec<String> },
    /// The auxiliary colouring contained the truncated tree in blue.
    BlueTree,
    Failed(String),
}

/// Per-layer split: densifier (many blue cliques) or clique certificates.
/// `layer` is `A_i ∪ M_i`, `matching` the blocks of `M_i`.
pub fn qpartition_or_cliques(
    design: &BlockDesign,
    matching: &[usize],
    layer: &Graph,
    colouring: &TwoColouring,
    support: &[usize],
    tree: Option<&RootedTree>,
    p: &SplitParams,
) -> Result<LayerSplit> {
    let cl = restrict_colouring(colouring, layer)?;
    let sup = BitSet::from_iter(design.n, support.iter().copied());
    let need = (libm::ceil(p.gamma * p.c as f64 / 8.0 - 1e-9) as usize).max(p.c_prime).max(1);
    let bar = p.rho * p.c as f64;
    let mut many: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
    let mut few: Vec<CliqueCertificate> = Vec::new();
    for &b in matching {
        let inside: Vec<usize> = design.blocks[b].iter().copied().filter(|&v| sup.contains(v)).collect();
        if inside.len() < need {
            continue;
        }
        let mut rest = inside.clone();
        let mut found = Vec::new();
        let mut covered = 0usize;
        while (covered as f64) < bar {
            let Some(k) = find_monochromatic_clique(&cl, &rest, Colour::Blue, p.c_prime, p.limits)? else { break };
            rest.retain(|v| !k.contains(v));
            covered += k.len();
            found.push(k);
        }
        if (covered as f64) < bar {
            let mut b_prime: Vec<usize> = found.into_iter().flatten().collect();
            b_prime.sort_unstable();
            few.push(CliqueCertificate { block: b, b_prime });
        } else {
            many.push((b, found));
        }
    }
    let qualifying = few.len() + many.len();
    if qualifying == 0 {
        return Ok(LayerSplit::Failed(format!("no block meets S in {need} vertices")));
    }
    if 2 * few.len() >= qualifying {
        return Ok(LayerSplit::Certificates(few));
    }
    let mut parts = Vec::new();
    let mut parent = Vec::new();
    for (b, ks) in &many {
        for k in ks {
            parts.push(k.clone());
            parent.push(*b);
        }
    }
    let aux = auxiliary_colouring(&cl, &parts, p.s, Colour::Blue, p.limits)?;
    let trunc = tree.map(|t| t.truncate().tree);
    let report = tree_or_qpartite(&aux.colouring, trunc.as_ref(), p.d, p.q, Colour::Blue);
    match report.outcome {
        Dichotomy::Tree(_) => Ok(LayerSplit::BlueTree),
        Dichotomy::DualFailure { .. } => Ok(LayerSplit::Failed(format!("no {} parts of size {}", p.q, report.min_part))),
        Dichotomy::Parts(families) => {
            let smallest = families.iter().map(Vec::len).min().unwrap_or(0);
            let params = DensifierParams {
                c_prime: p.c_prime,
                gamma: (smallest * p.c_prime) as f64 / design.n.max(1) as f64,
                s: p.s,
                q: p.q,
            };
            let densifier = Densifier {
                families: families.iter().map(|f| f.iter().map(|&i| parts[i].clone()).collect()).collect(),
                part_size: p.c_prime,
                parent_block: families.iter().map(|f| f.iter().map(|&i| parent[i]).collect()).collect(),
                params,
            };
            let ctx = DensifierContext { design, matching, layer, colouring: &cl, support, limits: p.limits };
            let violations = validate_densifier(&ctx, &densifier)?;
            Ok(LayerSplit::Densifier { densifier, violations })
        }
    }
}
