use proptest::prelude::*;
use sizeramsey_core::design::BlockDesign;
use sizeramsey_core::params::derive_probabilities;
use sizeramsey_core::random::{build_layers, couple_layers_into_gnp, sample_block_model, subsample_blocks};
use sizeramsey_core::matchings::partition_blocks_into_matchings;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// `1 - (1 - x)^m`, by its alternating binomial series when `mx` is small.
fn union_of(x: f64, m: usize) -> f64 {
    if m as f64 * x >= 0.5 {
        return 1.0 - (1.0 - x).powi(m as i32);
    }
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..=m {
        term *= -((m - k + 1) as f64) / k as f64 * x;
        sum -= term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn design(pick: usize) -> BlockDesign {
    [(7, 3), (9, 3), (13, 3), (25, 5)].map(|(n, c)| BlockDesign::for_size(n, c).unwrap())[pick % 4].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn probability_chain_round_trip(n in 7usize..100_000, delta in 0.01f64..0.49, c in 2usize..9, z in 0usize..50) {
        let p = derive_probabilities(n, delta, c, z).unwrap();
        let m = c * (c - 1) / 2;
        prop_assert!(rel(union_of(p.p_tilde, m), p.p) <= 1e-12);
        prop_assert!(rel(union_of(p.p_tilde_prime, c * c), p.p_prime) <= 1e-12);
        if z > 0 {
            prop_assert!(rel(union_of(p.p_prime, z), p.p_union) <= 1e-12);
            prop_assert!(rel(union_of(p.p_tilde_prime, z), p.p_tilde_union) <= 1e-12);
        }
    }

    #[test]
    fn block_model_edges_follow_blocks(pick in 0usize..4, p in 0.0f64..1.0, seed in any::<u64>()) {
        let d = design(pick);
        let s = sample_block_model(&d, p, seed);
        let idx = d.pair_index();
        for u in 0..d.n {
            for v in u + 1..d.n {
                let b = idx.block_of(u, v).unwrap();
                prop_assert_eq!(s.graph.has_edge(u, v), s.present.binary_search(&b).is_ok());
            }
        }
    }

    #[test]
    fn subsample_stays_inside_and_touches_every_block(pick in 0usize..4, p in 0.05f64..1.0, pt in 0.01f64..0.9, seed in any::<u64>()) {
        let d = design(pick);
        let s = sample_block_model(&d, p, seed);
        let g = subsample_blocks(&d, &s.present, pt, seed ^ 1).unwrap();
        prop_assert!(g.is_subgraph_of(&s.graph));
        for &b in &s.present {
            let bl = &d.blocks[b];
            let inside = bl.iter().enumerate().any(|(i, &u)| bl[i + 1..].iter().any(|&v| g.has_edge(u, v)));
            prop_assert!(inside, "block {} lost all its edges", b);
        }
    }

    #[test]
    fn coupled_layers_sit_inside_the_union(seed in any::<u64>(), pt in 0.01f64..0.5) {
        let d = design(3);
        let all: Vec<usize> = (0..d.blocks.len()).collect();
        let part = partition_blocks_into_matchings(&d, &all, 0.0, None);
        let z = part.z();
        prop_assert!(z > 0);
        let c = couple_layers_into_gnp(&d, &part.matchings, z, pt, seed);
        prop_assert!(c.contained);
        prop_assert!(c.l_union.is_subgraph_of(&c.f_union));
        for (f, l) in c.f.iter().zip(&c.l) {
            prop_assert!(l.is_subgraph_of(f));
        }
    }

    #[test]
    fn cube_layers_contain_their_skeleton_lifts(seed in any::<u64>(), pp in 0.05f64..0.6) {
        let d = design(3);
        let all: Vec<usize> = (0..d.blocks.len()).collect();
        let part = partition_blocks_into_matchings(&d, &all, 0.0, None);
        let ls = build_layers(&d, &part.matchings, pp, seed);
        prop_assert_eq!(ls.z(), part.z());
        for i in 0..ls.z() {
            prop_assert!(ls.layers[i].is_subgraph_of(&ls.cube_layers[i]));
        }
    }
}
