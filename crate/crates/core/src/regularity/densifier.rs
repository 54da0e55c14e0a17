//! Red densifiers of a layer and their tiny-scale detection.

use crate::bitset::BitSet;
use crate::design::BlockDesign;
use crate::error::{Error, Result};
use crate::graph::{find_monochromatic_biclique, Colour, Graph, SearchLimits, TwoColouring};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensifierParams {
    pub c_prime: usize,
    pub gamma: f64,
    pub s: usize,
    pub q: usize,
}

impl DensifierParams {
    /// Parts each family must hold: `⌈γ n / C'⌉`, at least one.
    pub fn family_minimum(&self, n: usize) -> usize {
        let f = libm::ceil(self.gamma * n as f64 / self.c_prime.max(1) as f64 - 1e-9) as usize;
        f.max(1)
    }
}

/// `q` families of `C'`-sets, each inside one block of the layer's matching.
#[derive(Clone, Debug, PartialEq)]
pub struct Densifier {
    pub families: Vec<Vec<Vec<usize>>>,
    pub part_size: usize,
    /// Block containing each part, indexed like `families`.
    pub parent_block: Vec<Vec<usize>>,
    pub params: DensifierParams,
}

impl Densifier {
    /// Vertices covered by family `k`.
    pub fn family_vertices(&self, k: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.families[k].iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }
}

/// The layer a densifier lives in.
#[derive(Clone, Copy, Debug)]
pub struct DensifierContext<'a> {
    pub design: &'a BlockDesign,
    /// Block indices of the layer's matching.
    pub matching: &'a [usize],
    /// The layer `A_i` on the host vertex set.
    pub layer: &'a Graph,
    pub colouring: &'a TwoColouring,
    /// The vertex set `S`.
    pub support: &'a [usize],
    pub limits: SearchLimits,
}

fn covered(layer: &Graph, x: &[usize], y: &[usize]) -> bool {
    x.iter().all(|&u| y.iter().all(|&v| layer.has_edge(u, v)))
}

fn blue_biclique(ctx: &DensifierContext<'_>, x: &[usize], y: &[usize], s: usize) -> Result<bool> {
    if !covered(ctx.layer, x, y) {
        return Ok(false);
    }
    Ok(find_monochromatic_biclique(ctx.colouring, x, y, Colour::Blue, s, ctx.limits)?.is_some())
}

/// Every violated clause, described; empty means valid.
pub fn validate_densifier(ctx: &DensifierContext<'_>, d: &Densifier) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let p = d.params;
    let n = ctx.design.n;
    if d.families.len() != p.q {
        out.push(format!("{} families, expected {}", d.families.len(), p.q));
    }
    if d.part_size != p.c_prime {
        out.push(format!("part size {} differs from C' = {}", d.part_size, p.c_prime));
    }
    if d.parent_block.len() != d.families.len()
        || d.parent_block.iter().zip(&d.families).any(|(b, f)| b.len() != f.len())
    {
        out.push(String::from("parent blocks do not match the families"));
        return Ok(out);
    }
    let need = p.family_minimum(n);
    let support = BitSet::from_iter(n, ctx.support.iter().copied());
    let mut seen = vec![false; n];
    for (k, family) in d.families.iter().enumerate() {
        if family.len() < need {
            out.push(format!("family {k} has {} parts, needs {need}", family.len()));
        }
        for (j, part) in family.iter().enumerate() {
            let b = d.parent_block[k][j];
            if part.len() != d.part_size {
                out.push(format!("part {k}.{j} has {} vertices", part.len()));
            }
            if !ctx.matching.contains(&b) || b >= ctx.design.blocks.len() {
                out.push(format!("part {k}.{j} names block {b} outside the matching"));
                continue;
            }
            for &v in part {
                if v >= n || !ctx.design.blocks[b].contains(&v) || !support.contains(v) {
                    out.push(format!("vertex {v} of part {k}.{j} is not in block {b} and S"));
                } else if seen[v] {
                    out.push(format!("vertex {v} is used twice"));
                } else {
                    seen[v] = true;
                }
            }
        }
    }
    for k in 0..d.families.len() {
        for l in k + 1..d.families.len() {
            for x in &d.families[k] {
                for y in &d.families[l] {
                    if blue_biclique(ctx, x, y, p.s)? {
                        out.push(format!("blue K_{{{0},{0}}} between {x:?} and {y:?}", p.s));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Largest number of candidate parts the exhaustive search accepts.
pub const DENSIFIER_CANDIDATE_CAP: usize = 40;

/// Validates `candidate` if given; otherwise searches exhaustively, which
/// needs `q ≤ 3`, at most 4 parts per family and few candidate parts.
pub fn detect_densifier(ctx: &DensifierContext<'_>, params: DensifierParams, candidate: Option<Densifier>) -> Result<Option<Densifier>> {
    if let Some(c) = candidate {
        return Ok(validate_densifier(ctx, &c)?.is_empty().then_some(c));
    }
    let n = ctx.design.n;
    let need = params.family_minimum(n);
    if params.q > 3 || need > 4 {
        return Err(Error::SearchCapped(format!("densifier search with q = {} and {need} parts per family", params.q)));
    }
    let support = BitSet::from_iter(n, ctx.support.iter().copied());
    let mut parts: Vec<(usize, Vec<usize>)> = Vec::new();
    for &b in ctx.matching {
        let inside: Vec<usize> = ctx.design.blocks[b].iter().copied().filter(|&v| support.contains(v)).collect();
        for sub in subsets(&inside, params.c_prime) {
            parts.push((b, sub));
        }
    }
    if parts.len() > DENSIFIER_CANDIDATE_CAP {
        return Err(Error::SearchCapped(format!("{} candidate parts exceed {DENSIFIER_CANDIDATE_CAP}", parts.len())));
    }
    let k = parts.len();
    let mut clash = vec![vec![false; k]; k];
    let mut overlap = vec![vec![false; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let o = parts[i].1.iter().any(|v| parts[j].1.contains(v));
            overlap[i][j] = o;
            overlap[j][i] = o;
            let c = !o && blue_biclique(ctx, &parts[i].1, &parts[j].1, params.s)?;
            clash[i][j] = c;
            clash[j][i] = c;
        }
    }
    let mut state = Search { clash: &clash, overlap: &overlap, q: params.q, need, label: vec![usize::MAX; k], sizes: vec![0; params.q] };
    if !state.run(0) {
        return Ok(None);
    }
    let mut families = vec![Vec::new(); params.q];
    let mut parent_block = vec![Vec::new(); params.q];
    for (i, &l) in state.label.iter().enumerate() {
        if l != usize::MAX {
            families[l].push(parts[i].1.clone());
            parent_block[l].push(parts[i].0);
        }
    }
    Ok(Some(Densifier { families, part_size: params.c_prime, parent_block, params }))
}

struct Search<'a> {
    clash: &'a [Vec<bool>],
    overlap: &'a [Vec<bool>],
    q: usize,
    need: usize,
    label: Vec<usize>,
    sizes: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, i: usize) -> bool {
        if self.sizes.iter().all(|&s| s == self.need) {
            return true;
        }
        let k = self.label.len();
        let missing: usize = self.sizes.iter().map(|&s| self.need - s).sum();
        if i == k || k - i < missing {
            return false;
        }
        // Families are opened in order so relabellings are not revisited.
        let open = self.sizes.iter().take_while(|&&s| s > 0).count();
        for f in 0..self.q.min(open + 1) {
            if self.sizes[f] == self.need {
                continue;
            }
            let ok = (0..i).all(|j| {
                let l = self.label[j];
                l == usize::MAX || (!self.overlap[i][j] && (l == f || !self.clash[i][j]))
            });
            if ok {
                self.label[i] = f;
                self.sizes[f] += 1;
                if self.run(i + 1) {
                    return true;
                }
                self.sizes[f] -= 1;
                self.label[i] = usize::MAX;
            }
        }
        self.run(i + 1)
    }
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    if k > 0 {
        rec(items, k, 0, &mut cur, &mut out);
    }
    out
}
