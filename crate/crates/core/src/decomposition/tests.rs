use super::*;
use crate::random::random_regular;
use alloc::vec;

/// Treewidth by the subset recursion over elimination prefixes.
fn treewidth_oracle(g: &Graph) -> usize {
    let n = g.n();
    let full = (1usize << n) - 1;
    let q = |s: usize, v: usize| -> usize {
        // Vertices outside s ∪ {v} reachable from v through s.
        let mut seen = 1usize << v;
        let mut stack = vec![v];
        let mut count = 0;
        while let Some(x) = stack.pop() {
            for y in g.neighbors(x) {
                if seen >> y & 1 == 1 {
                    continue;
                }
                seen |= 1 << y;
                if s >> y & 1 == 1 {
                    stack.push(y);
                } else {
                    count += 1;
                }
            }
        }
        count
    };
    let mut tw = vec![usize::MAX; full + 1];
    tw[0] = 0;
    for s in 1..=full {
        for v in 0..n {
            if s >> v & 1 == 1 {
                let rest = s & !(1 << v);
                tw[s] = tw[s].min(tw[rest].max(q(rest, v)));
            }
        }
    }
    tw[full]
}

#[test]
fn decomposition_examples() {
    let d = decompose_cubic(&Graph::cycle(12), 5).unwrap();
    assert!(d.j.is_empty());
    assert_eq!(d.cycles.len(), 1);
    assert_eq!(d.cycles[0].len(), 12);
    let d = decompose_cubic(&Graph::complete(4), 5).unwrap();
    assert_eq!(d.j, vec![0, 1, 2, 3]);
    assert!(d.cycles.is_empty());
    let p = Graph::petersen();
    let d = decompose_cubic(&p, 5).unwrap();
    assert!(d.j.is_empty());
    assert_eq!(d.cycles.iter().map(|c| c.len()).collect::<Vec<_>>(), vec![5, 5]);
    assert!(validate_decomposition(&p, &d, 5).is_valid());
    assert_eq!(decompose_cubic(&Graph::complete(5), 5), Err(Error::DegreeExceeded { vertex: 0, degree: 4 }));
    assert!(matches!(decompose_cubic(&Graph::cycle(6), 4), Err(Error::InvalidInput(_))));
}

#[test]
fn validation_reports_swapped_vertices() {
    let p = Graph::petersen();
    let mut d = decompose_cubic(&p, 5).unwrap();
    let (a, b) = (d.cycles[0][0], d.cycles[1][0]);
    d.cycles[0][0] = b;
    d.cycles[1][0] = a;
    let r = validate_decomposition(&p, &d, 5);
    assert!(!r.cycle_violations.is_empty());
    d.cycles[0].pop();
    let r = validate_decomposition(&p, &d, 5);
    assert!(!r.partition_violations.is_empty());
    assert!(!r.is_valid());
}

#[test]
fn random_cubic_decompositions_validate() {
    for seed in 0..20u64 {
        let n = 10 + 4 * (seed as usize % 10);
        let h = random_regular(n, 3, seed).unwrap();
        for ell in [5, 7] {
            let d = decompose_cubic(&h, ell).unwrap();
            let r = validate_decomposition(&h, &d, ell);
            assert!(r.is_valid(), "seed {seed} ell {ell}: {r:?}");
            assert!(d.cycles.len() <= n / ell);
            assert!(r.treewidth_bound <= 2 * ell);
        }
    }
}

#[test]
fn treewidth_examples() {
    let t = tree_decomposition_small(&Graph::path(6), 5);
    assert_eq!((t.width, t.exact), (1, true));
    let t = tree_decomposition_small(&Graph::complete(4), 5);
    assert_eq!(t.width, 3);
    let t = tree_decomposition_small(&Graph::grid(3, 3), 5);
    assert_eq!((t.width, t.exact), (3, true));
    assert!(t.is_valid_for(&Graph::grid(3, 3)));
    let t = tree_decomposition_small(&Graph::complete(6), 2);
    assert!(!t.within_cap);
}

#[test]
fn treewidth_matches_subset_oracle() {
    for seed in 0..30u64 {
        let g = crate::random::sample_gnp(9, 0.2 + 0.02 * (seed % 20) as f64, seed);
        let t = tree_decomposition_small(&g, 10);
        assert!(t.is_valid_for(&g), "seed {seed}");
        assert!(t.exact);
        assert_eq!(t.width, treewidth_oracle(&g), "seed {seed}");
    }
    let pg = Graph::petersen();
    assert_eq!(tree_decomposition_small(&pg, 10).width, treewidth_oracle(&pg));
}

#[test]
fn container_examples() {
    let one = Graph::empty(1);
    let c = build_tree_blowup_container(&one, &tree_decomposition_small(&one, 4), 3).unwrap();
    assert_eq!((c.tree.n(), c.k), (1, 1));
    let p = Graph::path(7);
    let c = build_tree_blowup_container(&p, &tree_decomposition_small(&p, 4), 2).unwrap();
    assert!(validate_container(&p, &c));
    let k4 = Graph::complete(4);
    let td = tree_decomposition_small(&k4, 4);
    let c = build_tree_blowup_container(&k4, &td, 3).unwrap();
    assert!(c.k <= 162 && validate_container(&k4, &c));
    assert_eq!(ContainerBounds::for_width(3, 3).k, 162);
}

#[test]
fn containers_for_random_remainders() {
    for seed in 0..10u64 {
        let h = random_regular(40, 3, seed).unwrap();
        let d = decompose_cubic(&h, 6).unwrap();
        let j = h.induced_subgraph(&d.j);
        let td = tree_decomposition_small(&j, 12);
        assert!(td.is_valid_for(&j));
        let c = build_tree_blowup_container(&j, &td, 3).unwrap();
        assert!(validate_container(&j, &c));
        let two = Graph::disjoint_union(&[&j, &Graph::cycle(5)]);
        let c = build_tree_blowup_container(&two, &tree_decomposition_small(&two, 12), 3).unwrap();
        assert!(validate_container(&two, &c));
    }
}
