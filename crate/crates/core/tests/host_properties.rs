use proptest::prelude::*;
use sizeramsey_core::design::{affine_plane, BlockDesign};
use sizeramsey_core::host::{assemble_host, EdgeSource};
use sizeramsey_core::matchings::partition_blocks_into_matchings;
use sizeramsey_core::params::ParameterSet;
use sizeramsey_core::random::sample_block_model;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matchings_are_disjoint_and_account_for_every_block(pick in 0usize..3, p in 0.05f64..1.0, eta in 0.0f64..0.5, seed in any::<u64>(), cap in proptest::option::of(0usize..6)) {
        let d = [BlockDesign::for_size(13, 3).unwrap(), BlockDesign::for_size(25, 5).unwrap(), BlockDesign::for_size(49, 7).unwrap()][pick].clone();
        let present = sample_block_model(&d, p, seed).present;
        let part = partition_blocks_into_matchings(&d, &present, eta, cap);
        if let Some(z) = cap {
            prop_assert!(part.z() <= z);
        }
        let mut all: Vec<usize> = part.matchings.iter().flatten().copied().chain(part.leftover.iter().copied()).collect();
        all.sort_unstable();
        prop_assert_eq!(&all, &present);
        for m in &part.matchings {
            let mut seen = vec![false; d.n];
            for &b in m {
                for &v in &d.blocks[b] {
                    prop_assert!(!seen[v], "point {} covered twice", v);
                    seen[v] = true;
                }
            }
            prop_assert!((m.len() * d.block_size) as f64 >= (1.0 - eta) * d.n as f64);
        }
    }
}

#[test]
fn resolvable_designs_split_into_perfect_matchings() {
    for q in [3, 5, 7, 11] {
        let d = affine_plane(q).unwrap();
        let all: Vec<usize> = (0..d.blocks.len()).collect();
        let part = partition_blocks_into_matchings(&d, &all, 0.0, None);
        assert_eq!(part.z(), q + 1);
        assert!(part.leftover.is_empty());
        assert!(part.matchings.iter().all(|m| m.len() * d.block_size == d.n));
    }
}

fn host_params(n: usize, c: usize) -> ParameterSet {
    let mut p = ParameterSet::desk(n, c).unwrap();
    p.delta = 0.4;
    p.eta = 0.1;
    p.z = Some(4);
    p.rederive(0).unwrap();
    p
}

#[test]
fn host_edges_carry_provenance() {
    for (n, c, seed) in [(121, 11, 3), (169, 13, 1), (201, 3, 2)] {
        let h = assemble_host(&host_params(n, c), seed).unwrap();
        let again = assemble_host(&host_params(n, c), seed).unwrap();
        assert_eq!(h.host, again.host);
        let mut multi = 0;
        for (u, v) in h.host.edges() {
            let src = h.provenance(u, v);
            assert!(!src.is_empty());
            if !src.contains(&EdgeSource::Base) {
                assert!(!h.base.graph.has_edge(u, v));
            }
            multi += usize::from(src.len() >= 2);
        }
        let sum = h.base.graph.m() + h.layers.cube_layers.iter().map(|a| a.m()).sum::<usize>();
        assert!(h.host.m() <= sum);
        assert_eq!(h.host.m() == sum, multi == 0);
        assert!(h.provenance(0, 0).is_empty());
    }
}
