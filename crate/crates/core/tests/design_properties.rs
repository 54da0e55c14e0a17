use sizeramsey_core::design::{affine_plane, is_prime, steiner_triple, validate_design, BlockDesign};

fn pair_slots_match(d: &BlockDesign) -> bool {
    let slots: usize = d.blocks.iter().map(|b| b.len() * (b.len() - 1) / 2).sum();
    slots == d.n * (d.n - 1) / 2
}

#[test]
fn triple_systems_up_to_a_thousand() {
    for n in (7..=1000).filter(|n| n % 6 == 1 || n % 6 == 3) {
        let d = steiner_triple(n).unwrap();
        assert!(pair_slots_match(&d), "n = {n}");
        assert!(validate_design(&d).is_valid(), "n = {n}");
    }
}

#[test]
fn affine_planes_up_to_a_thousand_points() {
    for q in (2..=31).filter(|&q| is_prime(q)) {
        let d = affine_plane(q).unwrap();
        assert!(pair_slots_match(&d));
        assert!(validate_design(&d).is_valid(), "q = {q}");
        let classes = d.parallel_classes.as_ref().unwrap();
        let class_of: Vec<usize> = {
            let mut c = vec![usize::MAX; d.blocks.len()];
            for (i, cl) in classes.iter().enumerate() {
                cl.iter().for_each(|&b| c[b] = i);
            }
            c
        };
        assert!(class_of.iter().all(|&c| c != usize::MAX));
        for a in 0..d.blocks.len() {
            for b in a + 1..d.blocks.len() {
                let meet = d.blocks[a].iter().filter(|v| d.blocks[b].contains(v)).count();
                assert_eq!(meet, usize::from(class_of[a] != class_of[b]), "q = {q}, blocks {a} {b}");
            }
        }
    }
}
