use proptest::prelude::*;
use sizeramsey_core::decomposition::decompose_cubic;
use sizeramsey_core::embedding::{embed_cycle, embed_tree_fp, fp_hypothesis, validate_embedding, CandidateAssignment, EmbeddingMap, CYCLE_BUDGET};
use sizeramsey_core::graph::{free_trees, RootedTree};
use sizeramsey_core::random::{random_regular, sample_gnp};
use sizeramsey_core::{Colour, Graph, TwoColouring};

/// Every injective choice of one candidate per position, closing the cycle.
fn brute_cycle(g: &Graph, cands: &[Vec<usize>], pick: &mut Vec<usize>) -> bool {
    let i = pick.len();
    if i == cands.len() {
        return g.has_edge(pick[i - 1], pick[0]);
    }
    for &x in &cands[i] {
        if !pick.contains(&x) && (i == 0 || g.has_edge(pick[i - 1], x)) {
            pick.push(x);
            if brute_cycle(g, cands, pick) {
                return true;
            }
            pick.pop();
        }
    }
    false
}

#[test]
fn fp_succeeds_whenever_the_hypothesis_holds() {
    let mut checked = 0;
    for seed in 0..30u64 {
        let n = 6 + (seed as usize % 9);
        let host = sample_gnp(n, 0.55 + 0.015 * seed as f64, seed);
        for size in 1..=8usize {
            for g in free_trees(size) {
                let t = RootedTree::from_graph(&g, 0).unwrap();
                let d = t.max_degree().max(1);
                let hyp = fp_hypothesis(&host, size, d);
                assert!(hyp.exact);
                if !hyp.passed() {
                    continue;
                }
                checked += 1;
                let out = embed_tree_fp(&host, &t, d).unwrap();
                let map = out.map.expect("the hypothesis guarantees a copy");
                assert!(validate_embedding(&t.to_graph(), &host, &map, None, None).is_valid());
            }
        }
    }
    assert!(checked > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_two_labels_fit_in_ten(half in 3usize..60, seed in any::<u64>()) {
        let Some(h) = random_regular(2 * half, 3, seed) else { return Ok(()) };
        let d = decompose_cubic(&h, 5).unwrap();
        let a = CandidateAssignment::for_decomposition(&h, &d, &vec![None; h.n()], 10).unwrap();
        prop_assert!(a.validate(&h).is_empty());
    }

    #[test]
    fn cycle_search_is_complete_on_small_instances(p in 0.2f64..0.7, seed in any::<u64>(), len in 3usize..7, sizes in proptest::collection::vec(1usize..4, 6), picks in proptest::collection::vec(0usize..12, 24)) {
        let g = sample_gnp(12, p, seed);
        let mut k = 0;
        let cands: Vec<Vec<usize>> = (0..len).map(|i| {
            let s = sizes[i].min(12 / len);
            let c = picks[k..k + s].to_vec();
            k += s;
            c
        }).collect();
        let got = embed_cycle(&g, &cands, CYCLE_BUDGET);
        prop_assert_eq!(got.is_ok(), brute_cycle(&g, &cands, &mut Vec::new()));
        if let Ok(map) = got {
            let slots: Vec<Option<Vec<usize>>> = cands.iter().cloned().map(Some).collect();
            prop_assert!(validate_embedding(&Graph::cycle(len), &g, &map, None, Some(&slots)).is_valid());
        }
    }

    #[test]
    fn validator_rejects_corruptions(n in 6usize..12, seed in any::<u64>(), i in 0usize..5, j in 0usize..5) {
        let host = Graph::complete(n);
        let pattern = Graph::cycle(5);
        let c = TwoColouring::from_fn(host.clone(), |u, v| if (u + v) % 3 == 0 { Colour::Blue } else { Colour::Red });
        let good = EmbeddingMap::new(vec![0, 1, 2, 3, 4]);
        prop_assert!(validate_embedding(&pattern, &host, &good, None, None).is_valid());
        let mut dup = good.clone();
        dup.image[i] = good.image[j];
        prop_assert_eq!(validate_embedding(&pattern, &host, &dup, None, None).is_valid(), i == j);
        let blue_edge = (0..5).any(|v| c.is(good.image[v], good.image[(v + 1) % 5], Colour::Blue));
        prop_assert_eq!(validate_embedding(&pattern, &host, &good, Some((&c, Colour::Red)), None).is_valid(), !blue_edge);
        let sparse = sample_gnp(n, 0.5, seed);
        let ok = (0..5).all(|v| sparse.has_edge(v, (v + 1) % 5));
        prop_assert_eq!(validate_embedding(&pattern, &sparse, &good, None, None).is_valid(), ok);
        let outside: Vec<Option<Vec<usize>>> = (0..5).map(|v| Some(if v == i { vec![n - 1] } else { vec![v] })).collect();
        prop_assert_eq!(validate_embedding(&pattern, &host, &good, None, Some(&outside)).is_valid(), i == n - 1);
    }
}
