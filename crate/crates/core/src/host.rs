//! Assembly of the layered host `Γ = G ∪ A'_1 ∪ … ∪ A'_z` and its audits.

use crate::design::BlockDesign;
use crate::error::Result;
use crate::graph::Graph;
use crate::matchings::{edge_multiplicity_report, partition_blocks_into_matchings, MatchingPartition, MultiplicityReport};
use crate::params::{probabilities_from, ParameterSet};
use crate::random::{build_layers, sample_block_model, BlockSample, LayerSet};
use crate::rng::{derive_seed, Phase};
use alloc::string::String;
use alloc::vec::Vec;

/// Where a host edge comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeSource {
    Base,
    Layer(usize),
}

#[derive(Clone, Debug)]
pub struct LayeredHost {
    /// Parameters with the probability chain completed for the achieved `z`.
    pub params: ParameterSet,
    /// Seed that produced this host (after any resampling).
    pub seed: u64,
    pub design: BlockDesign,
    pub base: BlockSample,
    pub partition: MatchingPartition,
    pub layers: LayerSet,
    pub host: Graph,
    /// Number of samples drawn, including the accepted one.
    pub attempts: usize,
}

impl LayeredHost {
    pub fn n(&self) -> usize {
        self.design.n
    }

    pub fn z(&self) -> usize {
        self.layers.z()
    }

    /// Sources of a host edge; empty if `uv` is not a host edge.
    pub fn provenance(&self, u: usize, v: usize) -> Vec<EdgeSource> {
        let mut out = Vec::new();
        if self.base.graph.has_edge(u, v) {
            out.push(EdgeSource::Base);
        }
        for (i, a) in self.layers.cube_layers.iter().enumerate() {
            if a.has_edge(u, v) {
                out.push(EdgeSource::Layer(i));
            }
        }
        out
    }

    /// `A'_i ∪ M_i`: the cube layer plus the cliques on the blocks of the matching.
    pub fn layer_with_blocks(&self, i: usize) -> Graph {
        let cliques = crate::random::block_union(&self.design, &self.layers.matchings[i]);
        Graph::union(self.n(), &[&self.layers.cube_layers[i], &cliques])
    }
}

/// Samples `G`, partitions its blocks, builds the layers and unions them.
pub fn assemble_host(params: &ParameterSet, seed: u64) -> Result<LayeredHost> {
    let design = BlockDesign::for_size(params.n, params.c)?;
    let p = params.probabilities;
    let base = sample_block_model(&design, p.p, seed);
    let partition = partition_blocks_into_matchings(&design, &base.present, params.eta, params.z);
    let layers = build_layers(&design, &partition.matchings, p.p_prime, seed);
    let mut parts: Vec<&Graph> = Vec::with_capacity(layers.z() + 1);
    parts.push(&base.graph);
    parts.extend(layers.cube_layers.iter());
    let host = Graph::union(design.n, &parts);
    let mut params = params.clone();
    params.probabilities = probabilities_from(p.p, p.p_prime, params.c, layers.z())?;
    Ok(LayeredHost { params, seed, design, base, partition, layers, host, attempts: 1 })
}

/// Assembles, audits, and resamples with derived seeds until the audit passes
/// or `budget` samples are spent. The last sample is returned either way.
pub fn assemble_host_audited(params: &ParameterSet, seed: u64, budget: usize) -> Result<(LayeredHost, HostAudit)> {
    let mut attempt = 0;
    loop {
        let s = if attempt == 0 { seed } else { derive_seed(seed, Phase::Resample, attempt as u64) };
        let mut h = assemble_host(params, s)?;
        h.attempts = attempt + 1;
        let audit = audit_host(&h);
        attempt += 1;
        if audit.passed || attempt >= budget.max(1) {
            return Ok((h, audit));
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeBudgetReport {
    pub base_edges: usize,
    /// `C(n, 2) p`.
    pub expected_base_edges: f64,
    /// `(1 + γ) C(n, 2) p`.
    pub base_threshold: f64,
    pub base_within: bool,
    pub cube_layer_edges: usize,
    pub host_edges: usize,
    /// `n^{3/2 + 2δ}`.
    pub host_threshold: f64,
    pub host_within: bool,
}

pub fn host_edge_budget_report(h: &LayeredHost) -> EdgeBudgetReport {
    let n = h.n() as f64;
    let pairs = n * (n - 1.0) / 2.0;
    let p = h.params.probabilities.p;
    let expected = pairs * p;
    let base_threshold = (1.0 + h.params.gamma) * expected;
    let host_threshold = libm::pow(n, 1.5 + 2.0 * h.params.delta);
    EdgeBudgetReport {
        base_edges: h.base.graph.m(),
        expected_base_edges: expected,
        base_threshold,
        base_within: h.base.graph.m() as f64 <= base_threshold,
        cube_layer_edges: h.layers.cube_layers.iter().map(|g| g.m()).sum(),
        host_edges: h.host.m(),
        host_threshold,
        host_within: h.host.m() as f64 <= host_threshold,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HostAudit {
    pub budget: EdgeBudgetReport,
    pub multiplicity: MultiplicityReport,
    pub passed: bool,
}

/// Base edge count within budget, no edge in five or more layers, and at most
/// `n^{3/2}` edges in two or more layers.
pub fn audit_host(h: &LayeredHost) -> HostAudit {
    let budget = host_edge_budget_report(h);
    let multiplicity = edge_multiplicity_report(h.n(), &h.layers.layers);
    let passed = budget.base_within && multiplicity.at_least_five == 0 && !multiplicity.exceeds_three_halves;
    HostAudit { budget, multiplicity, passed }
}

/// One link `left ≫ right` of the constant hierarchy.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainLink {
    pub left: String,
    pub right: String,
    pub left_value: f64,
    pub right_value: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParameterReport {
    /// `1 / (4ℓ - 6)`.
    pub delta_threshold: f64,
    /// `δ > 1 / (4ℓ - 6)` and `ℓ ≥ 5`.
    pub hard_ok: bool,
    pub links: Vec<ChainLink>,
    pub ratio: f64,
    /// Probability chain consistent to relative error `1e-9`.
    pub probabilities_consistent: bool,
}

impl ParameterReport {
    pub fn chain_ok(&self) -> bool {
        self.links.iter().all(|l| l.passed)
    }

    /// Hard gates always; the hierarchy only when `strict`.
    pub fn passed(&self, strict: bool) -> bool {
        self.hard_ok && self.probabilities_consistent && (!strict || self.chain_ok())
    }
}

/// Checks the hard constraint and flags hierarchy links with `left < ratio * right`.
pub fn validate_parameters(params: &ParameterSet, ratio: f64) -> ParameterReport {
    let inv = |x: f64| if x > 0.0 { 1.0 / x } else { f64::INFINITY };
    let chain: [(&str, f64); 12] = [
        ("1/eta", inv(params.eta)),
        ("C", params.c as f64),
        ("T3", params.t3 as f64),
        ("1/eps3", inv(params.eps3)),
        ("C_prime", params.c_prime as f64),
        ("T2", params.t2 as f64),
        ("1/eps2", inv(params.eps2)),
        ("T1", params.t1 as f64),
        ("1/eps1", inv(params.eps1)),
        ("ell", params.ell as f64),
        ("1/delta", inv(params.delta)),
        ("", 0.0),
    ];
    let mut links = Vec::new();
    let mut push = |l: (&str, f64), r: (&str, f64)| {
        links.push(ChainLink {
            left: l.0.into(),
            right: r.0.into(),
            left_value: l.1,
            right_value: r.1,
            passed: l.1 >= ratio * r.1,
        })
    };
    push(("1/c", inv(params.c_small)), chain[1]);
    for w in chain[..11].windows(2) {
        push(w[0], w[1]);
    }
    let delta_threshold = if params.ell >= 2 { 1.0 / (4.0 * params.ell as f64 - 6.0) } else { f64::INFINITY };
    let hard_ok = params.ell >= 5 && params.delta > delta_threshold && params.delta < 0.5;
    let pr = params.probabilities;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300);
    let probabilities_consistent = match probabilities_from(pr.p, pr.p_prime, params.c, 0) {
        Ok(d) => close(d.p_tilde, pr.p_tilde) && close(d.p_tilde_prime, pr.p_tilde_prime),
        Err(_) => false,
    };
    ParameterReport { delta_threshold, hard_ok, links, ratio, probabilities_consistent }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hard_constraint() {
        let mut p = ParameterSet::desk(99, 3).unwrap();
        p.delta = 0.1;
        p.ell = 5;
        p.rederive(0).unwrap();
        assert!(validate_parameters(&p, 10.0).hard_ok);
        p.ell = 4;
        assert!(!validate_parameters(&p, 10.0).hard_ok);
    }

    #[test]
    fn chain_link_flagged() {
        let mut p = ParameterSet::desk(99, 3).unwrap();
        p.t3 = 300;
        let r = validate_parameters(&p, 10.0);
        let link = r.links.iter().find(|l| l.left == "C" && l.right == "T3").unwrap();
        assert!(!link.passed);
        assert!(r.passed(false));
        assert!(!r.passed(true));
    }

    #[test]
    fn zero_layers_gives_base() {
        let mut p = ParameterSet::desk(99, 3).unwrap();
        p.z = Some(0);
        let h = assemble_host(&p, 4).unwrap();
        assert_eq!(h.host, h.base.graph);
        assert_eq!(h.z(), 0);
    }

    #[test]
    fn full_probabilities_give_complete_host() {
        let mut p = ParameterSet::desk(9, 3).unwrap();
        p.probabilities.p = 1.0;
        p.probabilities.p_prime = 1.0;
        p.eta = 0.0;
        let h = assemble_host(&p, 1).unwrap();
        assert_eq!(h.host, Graph::complete(9));
        assert_eq!(h.z(), 4);
        let (u, v) = h.layers.cube_layers[0].edge(0);
        let prov = h.provenance(u, v);
        assert!(prov.contains(&EdgeSource::Base) && prov.contains(&EdgeSource::Layer(0)));
    }

    #[test]
    fn assembly_is_deterministic() {
        let p = ParameterSet::desk(99, 3).unwrap();
        let a = assemble_host(&p, 11).unwrap();
        let b = assemble_host(&p, 11).unwrap();
        assert_eq!(a.host, b.host);
        assert_eq!(a.partition, b.partition);
        let (h, audit) = assemble_host_audited(&p, 11, 3).unwrap();
        assert!(h.attempts <= 3);
        assert_eq!(audit.passed || h.attempts == 3, true);
    }
}
