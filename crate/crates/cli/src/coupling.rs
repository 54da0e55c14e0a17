//! Monte Carlo checks of the subsampling and layer-coupling laws.

use rayon::prelude::*;
use serde::Serialize;
use sizeramsey_core::design::BlockDesign;
use sizeramsey_core::matchings::partition_blocks_into_matchings;
use sizeramsey_core::params::subsample_probability;
use sizeramsey_core::random::{build_layers, couple_layers_into_gnp, sample_block_model, subsample_blocks, subsample_layers};
use sizeramsey_core::rng::{derive_seed, Phase};
use sizeramsey_core::Graph;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::fmt;
use std::str::FromStr;

/// Cells with a smaller expected count are pooled before the chi-square test.
pub const MIN_EXPECTED: f64 = 5.0;
pub const SIGMA_LIMIT: f64 = 3.0;
pub const P_VALUE_LIMIT: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingKind {
    /// Base blocks subsampled to a non-empty edge set.
    Block,
    /// One skeleton edge blown up to `K_{C,C}` and subsampled.
    Biclique,
    /// Layers read off independent `G(n, p̃')` samples.
    LayerUnion,
}

impl FromStr for CouplingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "block" => Ok(CouplingKind::Block),
            "biclique" => Ok(CouplingKind::Biclique),
            "layer-union" => Ok(CouplingKind::LayerUnion),
            _ => Err(format!("unknown coupling kind `{s}`")),
        }
    }
}

impl fmt::Display for CouplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CouplingKind::Block => "block",
            CouplingKind::Biclique => "biclique",
            CouplingKind::LayerUnion => "layer-union",
        })
    }
}

/// Inputs of a coupling test. `p` is the block probability for `block` and
/// the skeleton probability `p'` otherwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingSetup {
    pub c: usize,
    pub p: f64,
    /// Points of the design used by `layer-union`.
    pub n: usize,
    /// Layers used by `layer-union`.
    pub z: usize,
}

impl CouplingSetup {
    pub fn new(c: usize, p: f64) -> Self {
        CouplingSetup { c, p, n: if c == 2 { 8 } else { c * c }, z: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginalStat {
    pub samples: u64,
    pub hits: u64,
    pub observed: f64,
    pub target: f64,
    pub sigma: f64,
    /// `(observed - target) / sigma`; zero when `sigma` is zero and the values agree.
    pub z_score: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareStat {
    pub observations: u64,
    /// Cells after pooling.
    pub cells: usize,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingReport {
    pub kind: CouplingKind,
    pub setup: CouplingSetup,
    pub trials: u64,
    pub seed: u64,
    pub marginal: Option<MarginalStat>,
    /// Outcome law of one block or biclique against the product law.
    pub distribution: Option<ChiSquareStat>,
    /// Per-block tests, in block order.
    pub per_block: Vec<ChiSquareStat>,
    pub containment_violations: u64,
    pub passed: bool,
}

/// Observed outcome masks against exact cell probabilities.
pub fn chi_square(counts: &[u64], probs: &[f64]) -> ChiSquareStat {
    let total: u64 = counts.iter().sum();
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (0.0, 0.0);
    for (&c, &q) in counts.iter().zip(probs) {
        let e = q * total as f64;
        if e < MIN_EXPECTED {
            pooled.0 += c as f64;
            pooled.1 += e;
        } else {
            cells.push((c as f64, e));
        }
    }
    if pooled.1 > 0.0 || pooled.0 > 0.0 {
        match cells.iter_mut().min_by(|a, b| a.1.total_cmp(&b.1)) {
            Some(cell) if pooled.1 < MIN_EXPECTED => {
                cell.0 += pooled.0;
                cell.1 += pooled.1;
            }
            _ => cells.push(pooled),
        }
    }
    if cells.iter().any(|&(o, e)| e == 0.0 && o > 0.0) {
        return ChiSquareStat { observations: total, cells: cells.len(), statistic: f64::INFINITY, dof: cells.len().saturating_sub(1), p_value: 0.0, passed: false };
    }
    let statistic: f64 = cells.iter().filter(|c| c.1 > 0.0).map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len().saturating_sub(1);
    let p_value = if dof == 0 { 1.0 } else { ChiSquared::new(dof as f64).expect("positive dof").sf(statistic) };
    ChiSquareStat { observations: total, cells: cells.len(), statistic, dof, p_value, passed: p_value > P_VALUE_LIMIT }
}

/// Cell probabilities of `m` independent bits with success probability `q`.
pub fn product_law(m: usize, q: f64) -> Vec<f64> {
    (0..1u32 << m).map(|mask| {
        let k = mask.count_ones() as i32;
        q.powi(k) * (1.0 - q).powi(m as i32 - k)
    })
    .collect()
}

pub fn marginal(hits: u64, samples: u64, target: f64) -> MarginalStat {
    let observed = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
    let sigma = if samples == 0 { 0.0 } else { (target * (1.0 - target) / samples as f64).sqrt() };
    let diff = observed - target;
    let z_score = if sigma > 0.0 { diff / sigma } else if diff.abs() < 1e-12 { 0.0 } else { f64::INFINITY };
    MarginalStat { samples, hits, observed, target, sigma, z_score, passed: samples > 0 && z_score.abs() <= SIGMA_LIMIT }
}

/// Bits of `g` on the listed pairs, lowest pair first.
fn mask_on(g: &Graph, pairs: &[(usize, usize)]) -> usize {
    pairs.iter().enumerate().filter(|(_, &(u, v))| g.has_edge(u, v)).fold(0, |m, (i, _)| m | 1 << i)
}

fn block_pairs(block: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..block.len() {
        for y in x + 1..block.len() {
            out.push((block[x], block[y]));
        }
    }
    out
}

fn biclique_pairs(a: &[usize], b: &[usize]) -> Vec<(usize, usize)> {
    a.iter().flat_map(|&u| b.iter().map(move |&v| (u, v))).collect()
}

/// Design for the block test: Fano for `C = 3`, `K_4` pairs for `C = 2`,
/// otherwise the affine plane of order `C`.
pub fn block_test_design(c: usize) -> Result<BlockDesign, sizeramsey_core::Error> {
    match c {
        2 => Ok(BlockDesign::all_pairs(4)),
        3 => Ok(BlockDesign::fano()),
        q => BlockDesign::for_size(q * q, q),
    }
}

#[derive(Default, Clone)]
struct Tally {
    cells: Vec<Vec<u64>>,
    hits: u64,
    samples: u64,
    violations: u64,
}

impl Tally {
    fn new(tables: usize, cells: usize) -> Self {
        Tally { cells: vec![vec![0; cells]; tables], ..Default::default() }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.cells.iter_mut().zip(other.cells) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self.hits += other.hits;
        self.samples += other.samples;
        self.violations += other.violations;
        self
    }
}

fn run_trials<F>(trials: u64, tables: usize, cells: usize, f: F) -> Tally
where
    F: Fn(u64, &mut Tally) + Sync,
{
    (0..trials)
        .into_par_iter()
        .fold(|| Tally::new(tables, cells), |mut t, i| {
            f(i, &mut t);
            t
        })
        .reduce(|| Tally::new(tables, cells), Tally::merge)
}

pub fn coupling_marginal_test(kind: CouplingKind, setup: &CouplingSetup, trials: u64, seed: u64) -> Result<CouplingReport, sizeramsey_core::Error> {
    let c = setup.c;
    let mut report = CouplingReport {
        kind,
        setup: setup.clone(),
        trials,
        seed,
        marginal: None,
        distribution: None,
        per_block: Vec::new(),
        containment_violations: 0,
        passed: false,
    };
    match kind {
        CouplingKind::Block => {
            let d = block_test_design(c)?;
            let m = d.edges_per_block();
            let p_tilde = subsample_probability(setup.p, m);
            let pairs: Vec<Vec<(usize, usize)>> = d.blocks.iter().map(|b| block_pairs(b)).collect();
            let tally = run_trials(trials, d.blocks.len(), 1 << m, |i, t| {
                let s = derive_seed(seed, Phase::Trial, i);
                let base = sample_block_model(&d, setup.p, s);
                let g = subsample_blocks(&d, &base.present, p_tilde, s).expect("block fits the enumeration cap");
                for (b, pr) in pairs.iter().enumerate() {
                    t.cells[b][mask_on(&g, pr)] += 1;
                }
                for &b in &base.present {
                    t.samples += 1;
                    t.hits += g.has_edge(pairs[b][0].0, pairs[b][0].1) as u64;
                }
            });
            let law = product_law(m, p_tilde);
            report.per_block = tally.cells.iter().map(|cells| chi_square(cells, &law)).collect();
            let pooled: Vec<u64> = (0..law.len()).map(|k| tally.cells.iter().map(|c| c[k]).sum()).collect();
            report.distribution = Some(chi_square(&pooled, &law));
            report.marginal = Some(marginal(tally.hits, tally.samples, p_tilde / setup.p));
        }
        CouplingKind::Biclique => {
            let d = BlockDesign::canonical(2 * c, c, vec![(0..c).collect(), (c..2 * c).collect()], None);
            let matchings = vec![vec![0, 1]];
            let p_tilde = subsample_probability(setup.p, c * c);
            let pairs = biclique_pairs(&d.blocks[0], &d.blocks[1]);
            let tally = run_trials(trials, 1, 1 << (c * c), |i, t| {
                let s = derive_seed(seed, Phase::Trial, i);
                let layers = build_layers(&d, &matchings, setup.p, s);
                let sub = subsample_layers(&d, &layers, p_tilde, s);
                let mask = mask_on(&sub[0], &pairs);
                t.cells[0][mask] += 1;
                if layers.skeletons[0].m() > 0 {
                    t.samples += 1;
                    t.hits += (mask & 1) as u64;
                }
            });
            report.distribution = Some(chi_square(&tally.cells[0], &product_law(c * c, p_tilde)));
            report.marginal = Some(marginal(tally.hits, tally.samples, p_tilde / setup.p));
        }
        CouplingKind::LayerUnion => {
            let d = BlockDesign::for_size(setup.n, c)?;
            let all: Vec<usize> = (0..d.blocks.len()).collect();
            let matchings = partition_blocks_into_matchings(&d, &all, 1.0, Some(setup.z)).matchings;
            if matchings.is_empty() || matchings[0].len() < 2 {
                return Err(sizeramsey_core::Error::Precondition(format!("no matching with two blocks for n = {}, C = {c}", setup.n)));
            }
            let p_tilde = subsample_probability(setup.p, c * c);
            let (b0, b1) = (matchings[0][0], matchings[0][1]);
            let pairs = biclique_pairs(&d.blocks[b0], &d.blocks[b1]);
            let z = matchings.len();
            let tally = run_trials(trials, 1, 1 << (c * c), |i, t| {
                let s = derive_seed(seed, Phase::Trial, i);
                let cp = couple_layers_into_gnp(&d, &matchings, z, p_tilde, s);
                let per_layer = cp.l.iter().zip(&cp.f).all(|(l, f)| l.is_subgraph_of(f));
                if !(per_layer && cp.l_union.is_subgraph_of(&cp.f_union)) {
                    t.violations += 1;
                }
                t.cells[0][mask_on(&cp.l[0], &pairs)] += 1;
            });
            report.containment_violations = tally.violations;
            report.distribution = Some(chi_square(&tally.cells[0], &product_law(c * c, p_tilde)));
        }
    }
    report.passed = report.containment_violations == 0
        && report.marginal.as_ref().is_none_or(|m| m.passed)
        && report.distribution.as_ref().is_none_or(|d| d.passed);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_of_exact_counts_is_zero() {
        let law = product_law(2, 0.5);
        let s = chi_square(&[250, 250, 250, 250], &law);
        assert_eq!(s.statistic, 0.0);
        assert_eq!(s.dof, 3);
        assert!((s.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chi_square_rejects_a_wrong_law() {
        let s = chi_square(&[400, 100, 100, 400], &product_law(2, 0.5));
        assert!(s.p_value < 1e-6 && !s.passed);
    }

    #[test]
    fn small_cells_are_pooled() {
        let s = chi_square(&[990, 5, 4, 1], &[0.99, 0.005, 0.004, 0.001]);
        assert!(s.cells < 4);
    }

    #[test]
    fn product_law_sums_to_one() {
        for m in 1..6 {
            let total: f64 = product_law(m, 0.3).iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn marginal_z_score() {
        let m = marginal(500, 1000, 0.5);
        assert_eq!(m.z_score, 0.0);
        assert!(m.passed);
        assert!(!marginal(600, 1000, 0.5).passed);
    }

    #[test]
    fn pair_block_marginal_is_one() {
        let r = coupling_marginal_test(CouplingKind::Block, &CouplingSetup::new(2, 0.3), 2000, 4).unwrap();
        let m = r.marginal.unwrap();
        assert_eq!(m.hits, m.samples);
        assert_eq!(m.target, 1.0);
        assert!(m.passed);
    }

    #[test]
    fn small_runs_are_deterministic() {
        for kind in [CouplingKind::Block, CouplingKind::Biclique, CouplingKind::LayerUnion] {
            let a = coupling_marginal_test(kind, &CouplingSetup::new(2, 0.4), 500, 9).unwrap();
            let b = coupling_marginal_test(kind, &CouplingSetup::new(2, 0.4), 500, 9).unwrap();
            assert_eq!(a, b);
        }
    }
}
