//! Acceptance criteria. Each test prints one PASS/FAIL line straight to
//! stderr and then asserts. A lock runs them one at a time so the runtime
//! limits are measured without contention.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sizeramsey::colour::{colour_host, Strategy};
use sizeramsey::coupling::{coupling_marginal_test, CouplingKind, CouplingSetup};
use sizeramsey::experiment::{report_csv, report_json, run_experiment, ExperimentConfig, PatternSource};
use sizeramsey_core::decomposition::{decompose_cubic, validate_decomposition};
use sizeramsey_core::design::{affine_plane, is_prime, steiner_triple, validate_design, BlockDesign};
use sizeramsey_core::embedding::{embed_tree_fp, expansion_check, ramsey_embed, validate_embedding, RamseyConfig};
use sizeramsey_core::graph::{free_trees, is_induced_cycle, RootedTree};
use sizeramsey_core::host::{assemble_host, LayeredHost};
use sizeramsey_core::matchings::{edge_multiplicity_report, partition_blocks_into_matchings};
use sizeramsey_core::params::ParameterSet;
use sizeramsey_core::random::{
    build_layers, couple_layers_into_gnp, random_regular, sample_block_model, sample_gnp, subsample_blocks, subsample_layers,
};
use sizeramsey_core::regularity::{regularity_check, CheckMode, Verdict};
use sizeramsey_core::{Colour, Graph, TwoColouring};
use std::io::Write;
use std::sync::Mutex;
use std::time::{Duration, Instant};

static SERIAL: Mutex<()> = Mutex::new(());

fn criterion<F: FnOnce() -> (bool, String)>(id: u32, name: &str, limit: Duration, f: F) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let verdict = if ok && in_time { "PASS" } else { "FAIL" };
    let line = format!(
        "criterion {id:>2} {verdict} {name}: {detail} [{:.2}s of {}s]\n",
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {id} failed: {detail}");
    assert!(in_time, "criterion {id} exceeded {limit:?}: {elapsed:?}");
}

#[test]
fn criterion_01_design_exactness() {
    criterion(1, "design exactness", Duration::from_secs(10), || {
        let mut bad = Vec::new();
        let mut systems = 0;
        for n in (7..=1000).filter(|n| n % 6 == 1 || n % 6 == 3) {
            systems += 1;
            match steiner_triple(n) {
                Ok(d) if validate_design(&d).is_valid() && d.blocks.len() == n * (n - 1) / 6 => {}
                _ => bad.push(format!("sts {n}")),
            }
        }
        let mut planes = 0;
        for q in (2..=31).filter(|&q| is_prime(q)) {
            planes += 1;
            match affine_plane(q) {
                Ok(d) if validate_design(&d).is_valid() && d.blocks.len() == q * (q + 1) => {}
                _ => bad.push(format!("affine {q}")),
            }
        }
        (bad.is_empty(), format!("{systems} triple systems, {planes} affine planes, failures {bad:?}"))
    });
}

#[test]
fn criterion_02_coupling_marginal() {
    criterion(2, "block subsample marginal", Duration::from_secs(30), || {
        let r = coupling_marginal_test(CouplingKind::Block, &CouplingSetup::new(3, 0.271), 100_000, 2).unwrap();
        let m = r.marginal.unwrap();
        let target_ok = (m.target - 0.1 / 0.271).abs() < 1e-9;
        (
            m.passed && target_ok,
            format!("observed {:.5} target {:.5} z {:.2} over {} present blocks", m.observed, m.target, m.z_score, m.samples),
        )
    });
}

#[test]
fn criterion_03_distribution_law() {
    criterion(3, "two-step law on Fano", Duration::from_secs(60), || {
        let r = coupling_marginal_test(CouplingKind::Block, &CouplingSetup::new(3, 0.271), 100_000, 3).unwrap();
        let pooled = r.distribution.unwrap();
        let min_block = r.per_block.iter().map(|s| s.p_value).fold(1.0, f64::min);
        (
            pooled.passed && r.per_block.len() == 7,
            format!(
                "pooled chi2 {:.2} dof {} p {:.4}; smallest per-block p {:.4}",
                pooled.statistic, pooled.dof, pooled.p_value, min_block
            ),
        )
    });
}

#[test]
fn criterion_04_layer_coupling() {
    criterion(4, "layer coupling", Duration::from_secs(60), || {
        let union = coupling_marginal_test(CouplingKind::LayerUnion, &CouplingSetup::new(2, 0.5), 100_000, 4).unwrap();
        let biclique = coupling_marginal_test(CouplingKind::Biclique, &CouplingSetup::new(2, 0.5), 100_000, 5).unwrap();
        let (l, a) = (union.distribution.unwrap(), biclique.distribution.unwrap());
        (
            union.containment_violations == 0 && l.passed && a.passed,
            format!(
                "{} containment violations; biclique law p {:.4} (subsampled layer), p {:.4} (coupled layer)",
                union.containment_violations, a.p_value, l.p_value
            ),
        )
    });
}

/// Parts, inducedness, lengths and back-degrees checked directly.
fn decomposition_ok(h: &Graph, j: &[usize], cycles: &[Vec<usize>], ell: usize) -> bool {
    let mut part = vec![usize::MAX; h.n()];
    for &v in j {
        part[v] = 0;
    }
    for (i, c) in cycles.iter().enumerate() {
        if c.len() < ell || !is_induced_cycle(h, c) {
            return false;
        }
        for &v in c {
            if part[v] != usize::MAX {
                return false;
            }
            part[v] = i + 1;
        }
    }
    part.iter().all(|&p| p != usize::MAX) && (0..h.n()).all(|v| h.neighbors(v).filter(|&w| part[w] < part[v]).count() <= 1)
}

#[test]
fn criterion_05_decomposition() {
    criterion(5, "cubic decomposition", Duration::from_secs(60), || {
        let mut bad = Vec::new();
        let mut done = 0;
        let mut seed = 0u64;
        while done < 100 {
            let n = 10 + 2 * (seed as usize % 96);
            seed += 1;
            let Some(h) = random_regular(n, 3, seed) else { continue };
            done += 1;
            let d = decompose_cubic(&h, 5).unwrap();
            if !validate_decomposition(&h, &d, 5).is_valid() || !decomposition_ok(&h, &d.j, &d.cycles, 5) {
                bad.push(seed);
            }
        }
        let p = Graph::petersen();
        let d = decompose_cubic(&p, 5).unwrap();
        let petersen_ok = d.j.is_empty() && d.cycles.len() == 2 && d.cycles.iter().all(|c| c.len() == 5 && is_induced_cycle(&p, c));
        (
            bad.is_empty() && petersen_ok,
            format!("{done} random cubic graphs, failures {bad:?}; Petersen cycles {:?}, J {:?}", d.cycles, d.j),
        )
    });
}

/// A bipartite instance with sides `0..na` and `na..na + nb`; `rows[a]` is a mask over `B`.
struct Instance {
    na: usize,
    nb: usize,
    rows: Vec<u32>,
    eps: f64,
    p: f64,
}

impl Instance {
    fn graph(&self) -> Graph {
        let edges = (0..self.na).flat_map(|a| (0..self.nb).filter(move |&b| self.rows[a] >> b & 1 == 1).map(move |b| (a, self.na + b)));
        Graph::new(self.na + self.nb, edges).unwrap()
    }

    fn edges(&self, u: u32, w: u32) -> u32 {
        (0..self.na).filter(|&a| u >> a & 1 == 1).map(|a| (self.rows[a] & w).count_ones()).sum()
    }

    fn density(&self, u: u32, w: u32) -> f64 {
        self.edges(u, w) as f64 / (u.count_ones() * w.count_ones()) as f64
    }
}

fn at_least(eps: f64, size: usize) -> u32 {
    ((eps * size as f64 - 1e-9).ceil() as u32).max(1)
}

/// Largest `|d(U, W) - d(A, B)|` over every qualifying `U`, `W`, walking `W` in Gray-code order.
fn brute_max_deviation(inst: &Instance) -> f64 {
    let full_a = (1u32 << inst.na) - 1;
    let full_b = (1u32 << inst.nb) - 1;
    let base = inst.density(full_a, full_b);
    let (ka, kb) = (at_least(inst.eps, inst.na), at_least(inst.eps, inst.nb));
    let mut best = 0.0f64;
    for u in 1..=full_a {
        if u.count_ones() < ka {
            continue;
        }
        let col: Vec<i64> = (0..inst.nb).map(|b| (0..inst.na).filter(|&a| u >> a & 1 == 1 && inst.rows[a] >> b & 1 == 1).count() as i64).collect();
        let (mut w, mut sum, mut size) = (0u32, 0i64, 0u32);
        for i in 1u32..=full_b {
            let bit = i.trailing_zeros() as usize;
            w ^= 1 << bit;
            if w >> bit & 1 == 1 {
                sum += col[bit];
                size += 1;
            } else {
                sum -= col[bit];
                size -= 1;
            }
            if size >= kb {
                let d = sum as f64 / (u.count_ones() * size) as f64;
                best = best.max((d - base).abs());
            }
        }
    }
    best
}

/// Every `X' ⊆ A`, `Y' ⊆ B` of relative size at least `eps2` has density within
/// `eps p` of `d(A, B)` and is `(eps / eps2, p)`-regular. For each `Y'` the extreme
/// densities over `W ⊆ Y'` are tabulated per `U`, then pushed up to supersets.
fn inheritance_violations(inst: &Instance, eps2: f64) -> usize {
    let (na, nb) = (inst.na, inst.nb);
    let eps_sub = inst.eps / eps2;
    let full_a = (1u32 << na) - 1;
    let base = inst.density(full_a, (1u32 << nb) - 1);
    let cols: Vec<Vec<u32>> = (0..=full_a)
        .map(|u| (0..nb).map(|b| (0..na).filter(|&a| u >> a & 1 == 1 && inst.rows[a] >> b & 1 == 1).count() as u32).collect())
        .collect();
    let (xa, yb) = (at_least(eps2, na), at_least(eps2, nb));
    let mut violations = 0;
    let mut hi = vec![f64::NEG_INFINITY; 1 << na];
    let mut lo = vec![f64::INFINITY; 1 << na];
    for y in 1u32..(1 << nb) {
        let ny = y.count_ones();
        if ny < yb {
            continue;
        }
        let kw = at_least(eps_sub, ny as usize);
        let mut extremes = vec![(f64::NEG_INFINITY, f64::INFINITY); 1 << na];
        for u in 1..=full_a {
            let mut vals: Vec<u32> = (0..nb).filter(|&b| y >> b & 1 == 1).map(|b| cols[u as usize][b]).collect();
            vals.sort_unstable_by(|a, b| b.cmp(a));
            let nu = u.count_ones() as f64;
            let (mut top, mut bottom) = (0u32, 0u32);
            let mut e = (f64::NEG_INFINITY, f64::INFINITY);
            for k in 1..=vals.len() {
                top += vals[k - 1];
                bottom += vals[vals.len() - k];
                if k as u32 >= kw {
                    e.0 = e.0.max(top as f64 / (nu * k as f64));
                    e.1 = e.1.min(bottom as f64 / (nu * k as f64));
                }
            }
            extremes[u as usize] = e;
        }
        let mut thresholds: Vec<u32> = (xa..=na as u32).map(|m| at_least(eps_sub, m as usize)).collect();
        thresholds.dedup();
        for &s in &thresholds {
            for u in 0..=full_a as usize {
                let ok = (u as u32).count_ones() >= s;
                hi[u] = if ok { extremes[u].0 } else { f64::NEG_INFINITY };
                lo[u] = if ok { extremes[u].1 } else { f64::INFINITY };
            }
            for bit in 0..na {
                for u in 0..=full_a as usize {
                    if u >> bit & 1 == 1 {
                        let v = u ^ (1 << bit);
                        hi[u] = hi[u].max(hi[v]);
                        lo[u] = lo[u].min(lo[v]);
                    }
                }
            }
            for x in 1..=full_a {
                let nx = x.count_ones();
                if nx < xa || at_least(eps_sub, nx as usize) != s {
                    continue;
                }
                let d = inst.density(x, y);
                let density_ok = (d - base).abs() <= inst.eps * inst.p;
                let regular = hi[x as usize] - d <= eps_sub * inst.p && d - lo[x as usize] <= eps_sub * inst.p;
                if !(density_ok && regular) {
                    violations += 1;
                }
            }
        }
    }
    violations
}

fn regularity_corpus() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    (0..200)
        .map(|i| {
            let na = rng.gen_range(2..=12);
            let nb = rng.gen_range(2..=12);
            let q = [0.03, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97][i % 7];
            let rows = (0..na).map(|_| (0..nb).filter(|_| rng.gen::<f64>() < q).fold(0u32, |m, b| m | 1 << b)).collect();
            Instance { na, nb, rows, eps: [0.2, 0.3, 0.4, 0.45][i % 4], p: 0.93 }
        })
        .collect()
}

#[test]
fn criterion_06_regularity_oracle() {
    criterion(6, "regularity oracle equivalence", Duration::from_secs(300), || {
        let eps2 = 0.5;
        let mut disagreements = Vec::new();
        let mut regular = 0;
        let mut inheritance_failures = 0;
        for (i, inst) in regularity_corpus().iter().enumerate() {
            let g = inst.graph();
            let a: Vec<usize> = (0..inst.na).collect();
            let b: Vec<usize> = (inst.na..inst.na + inst.nb).collect();
            let r = regularity_check(&g, &a, &b, inst.eps, inst.p, CheckMode::Exact).unwrap();
            let brute_regular = brute_max_deviation(inst) <= inst.eps * inst.p;
            let agrees = match &r.verdict {
                Verdict::Regular { certified } => brute_regular && *certified,
                Verdict::Irregular { u1, u2, .. } => {
                    let mu = u1.iter().fold(0u32, |m, &v| m | 1 << v);
                    let mw = u2.iter().fold(0u32, |m, &v| m | 1 << (v - inst.na));
                    let full = inst.density((1 << inst.na) - 1, (1 << inst.nb) - 1);
                    !brute_regular
                        && u1.iter().all(|&v| v < inst.na)
                        && u2.iter().all(|&v| v >= inst.na)
                        && mu.count_ones() >= at_least(inst.eps, inst.na)
                        && mw.count_ones() >= at_least(inst.eps, inst.nb)
                        && (inst.density(mu, mw) - full).abs() > inst.eps * inst.p
                }
                Verdict::SearchCapped => false,
            };
            if !agrees {
                disagreements.push(i);
            }
            if brute_regular {
                regular += 1;
                inheritance_failures += inheritance_violations(inst, eps2);
            }
        }
        (
            disagreements.is_empty() && inheritance_failures == 0 && regular > 0,
            format!(
                "200 instances, {regular} regular; verdict disagreements {disagreements:?}; {inheritance_failures} inheritance violations"
            ),
        )
    });
}

/// Whether every set of at most `s` vertices has at least `k|X|` vertices in its
/// neighbourhood union, by enumerating masks.
fn brute_expanding(g: &Graph, s: usize, k: usize) -> bool {
    let n = g.n();
    let nbr: Vec<u32> = (0..n).map(|v| g.neighbors(v).fold(0u32, |m, w| m | 1 << w)).collect();
    (1u32..1 << n).all(|x| {
        let size = x.count_ones() as usize;
        if size > s {
            return true;
        }
        let gamma = (0..n).filter(|&v| x >> v & 1 == 1).fold(0u32, |m, v| m | nbr[v]);
        gamma.count_ones() as usize >= k * size
    })
}

#[test]
fn criterion_07_fp_soundness() {
    criterion(7, "tree embedding in expanders", Duration::from_secs(300), || {
        let trees: Vec<Vec<Graph>> = (1..=8).map(free_trees).collect();
        let mut checked = vec![0usize; 9];
        let mut failures = Vec::new();
        let mut oracle_mismatch = 0;
        let mut hosts = 0;
        for n in 6..=14usize {
            for (j, q) in [0.4, 0.6, 0.8, 1.0].into_iter().enumerate() {
                for rep in 0..3u64 {
                    let seed = (n as u64) * 100 + j as u64 * 10 + rep;
                    let host = if q == 1.0 { Graph::complete(n) } else { sample_gnp(n, q, seed) };
                    hosts += 1;
                    for (size, family) in (1..=8usize).zip(&trees) {
                        for t in family {
                            let rooted = RootedTree::from_graph(t, 0).unwrap();
                            let d = rooted.max_degree().max(1);
                            let s = (2 * size).saturating_sub(2).max(1);
                            let report = expansion_check(&host, s, d + 1);
                            if !report.exact || report.passed() != brute_expanding(&host, s, d + 1) {
                                oracle_mismatch += 1;
                            }
                            if !report.passed() {
                                continue;
                            }
                            checked[size] += 1;
                            let out = embed_tree_fp(&host, &rooted, d).unwrap();
                            let ok = out.map.as_ref().is_some_and(|m| validate_embedding(&rooted.to_graph(), &host, m, None, None).is_valid());
                            if !ok {
                                failures.push((n, seed, size));
                            }
                        }
                    }
                    if q == 1.0 {
                        break;
                    }
                }
            }
        }
        let total: usize = checked.iter().sum();
        (
            failures.is_empty() && oracle_mismatch == 0 && total > 0,
            format!(
                "{hosts} hosts; hypothesis held for {total} (tree, host) pairs by tree size {:?}; {oracle_mismatch} oracle mismatches; failures {failures:?}",
                &checked[1..]
            ),
        )
    });
}

#[test]
fn criterion_08_matching_resolvability() {
    criterion(8, "matching resolvability", Duration::from_secs(1), || {
        let ag = affine_plane(3).unwrap();
        let all: Vec<usize> = (0..ag.blocks.len()).collect();
        let m = partition_blocks_into_matchings(&ag, &all, 0.0, None);
        let perfect = m.matchings.iter().all(|mm| mm.len() == 3 && covers(&ag, mm) == 9);
        let fano = BlockDesign::fano();
        let all: Vec<usize> = (0..7).collect();
        let f = partition_blocks_into_matchings(&fano, &all, 0.1, None);
        (
            m.matchings.len() == 4 && perfect && f.matchings.is_empty(),
            format!("AG(2,3): {} matchings, all perfect {perfect}; Fano: {} matchings", m.matchings.len(), f.matchings.len()),
        )
    });
}

fn covers(d: &BlockDesign, matching: &[usize]) -> usize {
    let mut seen = vec![false; d.n];
    for &b in matching {
        for &v in &d.blocks[b] {
            seen[v] = true;
        }
    }
    seen.iter().filter(|&&s| s).count()
}

fn planted_host() -> LayeredHost {
    let mut p = ParameterSet::desk(501, 3).unwrap();
    p.delta = 0.4;
    p.z = Some(4);
    p.eta = 0.1;
    p.rederive(0).unwrap();
    assemble_host(&p, 1).unwrap()
}

#[test]
fn criterion_09_planted_end_to_end() {
    criterion(9, "planted end-to-end", Duration::from_secs(600), || {
        let host = planted_host();
        let base = host.base.graph.clone();
        let colourings = [
            ("all-red", TwoColouring::uniform(host.host.clone(), Colour::Red)),
            ("layer-flip", TwoColouring::from_fn(host.host.clone(), |u, v| if base.has_edge(u, v) { Colour::Red } else { Colour::Blue })),
        ];
        let mut wins = Vec::new();
        for (_, colouring) in &colourings {
            let mut ok = 0;
            for s in 0..10u64 {
                let h = random_regular(30, 3, 100 + s).unwrap();
                let r = ramsey_embed(&host, colouring, &h, &RamseyConfig { seed: s, ..Default::default() }).unwrap();
                if let (Some(map), Some(c)) = (&r.map, r.colour) {
                    if validate_embedding(&h, &host.host, map, Some((colouring, c)), None).is_valid() {
                        ok += 1;
                    }
                }
            }
            wins.push(ok);
        }
        (
            wins[0] == 10 && wins[1] >= 8,
            format!("host n = {}, {} layers, {} edges; all-red {}/10, layer-flip {}/10", host.n(), host.z(), host.host.m(), wins[0], wins[1]),
        )
    });
}

#[test]
fn criterion_10_edge_budget() {
    criterion(10, "edge budget audit", Duration::from_secs(300), || {
        let mut params = ParameterSet::desk(1999, 3).unwrap();
        params.eta = 0.2;
        let n = params.n as f64;
        let expected = n * (n - 1.0) / 2.0 * params.probabilities.p;
        let results: Vec<(usize, usize, usize)> = {
            use rayon::prelude::*;
            (0..100u64)
                .into_par_iter()
                .map(|seed| {
                    let h = assemble_host(&params, seed).unwrap();
                    (h.base.graph.m(), edge_multiplicity_report(h.n(), &h.layers.layers).max_multiplicity, h.z())
                })
                .collect()
        };
        let fewest_layers = results.iter().map(|r| r.2).min().unwrap_or(0);
        let hosts_at_five = results.iter().filter(|r| r.1 >= 5).count();
        let (lo, hi) = (0.9 * expected, 1.1 * expected);
        let outside = results.iter().filter(|(m, _, _)| (*m as f64) < lo || (*m as f64) > hi).count();
        let worst = results.iter().map(|r| r.1).max().unwrap_or(0);
        let min = results.iter().map(|r| r.0).min().unwrap_or(0);
        let max = results.iter().map(|r| r.0).max().unwrap_or(0);
        (
            outside == 0 && worst < 5 && fewest_layers >= 2,
            format!(
                "e(G) in [{min}, {max}] against [{lo:.0}, {hi:.0}], {outside} outside; at least {fewest_layers} layers per host, largest layer multiplicity {worst}, {hosts_at_five} hosts with an edge in 5 or more layers"
            ),
        )
    });
}

#[test]
fn criterion_11_determinism() {
    criterion(11, "determinism", Duration::from_secs(300), || {
        let mut diffs = Vec::new();
        let mut compared = 0;
        let mut check = |name: &str, same: bool| {
            compared += 1;
            if !same {
                diffs.push(name.to_string());
            }
        };
        check("gnp", sample_gnp(60, 0.3, 9) == sample_gnp(60, 0.3, 9));
        check("regular", random_regular(40, 3, 9) == random_regular(40, 3, 9));
        let d = steiner_triple(31).unwrap();
        let b1 = sample_block_model(&d, 0.4, 9);
        let b2 = sample_block_model(&d, 0.4, 9);
        check("block model", b1.graph == b2.graph && b1.present == b2.present);
        check("block subsample", subsample_blocks(&d, &b1.present, 0.2, 9).unwrap() == subsample_blocks(&d, &b2.present, 0.2, 9).unwrap());
        let matchings = partition_blocks_into_matchings(&d, &b1.present, 0.5, None).matchings;
        let l1 = build_layers(&d, &matchings, 0.3, 9);
        let l2 = build_layers(&d, &matchings, 0.3, 9);
        check("layers", l1.skeletons == l2.skeletons && l1.cube_layers == l2.cube_layers);
        check("layer subsample", subsample_layers(&d, &l1, 0.05, 9) == subsample_layers(&d, &l2, 0.05, 9));
        let c1 = couple_layers_into_gnp(&d, &matchings, 3, 0.05, 9);
        let c2 = couple_layers_into_gnp(&d, &matchings, 3, 0.05, 9);
        check("coupling", c1.f == c2.f && c1.l == c2.l);
        let host = planted_host();
        let again = planted_host();
        check("host", host.host == again.host && host.partition.matchings == again.partition.matchings);
        for s in ["all-red", "all-blue", "uniform-random:0.3", "block-monochrome", "layer-flip", "greedy-anti-tree"] {
            let st: Strategy = s.parse().unwrap();
            check(s, colour_host(&host, &st, 4).colours() == colour_host(&again, &st, 4).colours());
        }
        for kind in [CouplingKind::Block, CouplingKind::Biclique, CouplingKind::LayerUnion] {
            let setup = CouplingSetup::new(2, 0.4);
            check(&kind.to_string(), coupling_marginal_test(kind, &setup, 5000, 1).unwrap() == coupling_marginal_test(kind, &setup, 5000, 1).unwrap());
        }
        let mut p = ParameterSet::desk(501, 3).unwrap();
        p.delta = 0.4;
        p.z = Some(4);
        p.eta = 0.1;
        p.rederive(0).unwrap();
        let cfg = ExperimentConfig::new(p, PatternSource::RandomCubic { n: 20, seed: 3 }, Strategy::UniformRandom { bias: 0.5 }, 6, 21);
        let r1 = run_experiment(&cfg).unwrap();
        let r2 = run_experiment(&cfg).unwrap();
        check("experiment csv", report_csv(&r1).into_bytes() == report_csv(&r2).into_bytes());
        check("experiment json", report_json(&r1).into_bytes() == report_json(&r2).into_bytes());
        (diffs.is_empty(), format!("{compared} samplers and reports compared, differing: {diffs:?}"))
    });
}
