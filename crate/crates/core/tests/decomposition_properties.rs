use proptest::prelude::*;
use sizeramsey_core::decomposition::{decompose_cubic, treewidth_bound, validate_decomposition};
use sizeramsey_core::random::random_regular;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cubic_decompositions_validate(half in 2usize..101, seed in any::<u64>(), ell in 5usize..9) {
        let n = 2 * half;
        let Some(h) = random_regular(n, 3, seed) else { return Ok(()) };
        let d = decompose_cubic(&h, ell).unwrap();
        prop_assert!(d.cycles.len() <= n / ell);
        prop_assert_eq!(d.parts().iter().map(|p| p.len()).sum::<usize>(), n);
        let r = validate_decomposition(&h, &d, ell);
        prop_assert!(r.is_valid(), "{:?}", r);
        prop_assert!(r.treewidth_bound <= 2 * ell);
        prop_assert_eq!(treewidth_bound(ell, 3), 2 * (ell - 1) + 2);
    }
}
