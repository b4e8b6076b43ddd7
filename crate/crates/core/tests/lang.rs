mod common;

use minifix_core::lang::{binarize, cf_signature, parse, pretty_print};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let p = common::random_program(seed);
        let text = pretty_print(&p);
        let back = parse(&text).unwrap();
        prop_assert!(back.same_tree(&p), "{}", text);
        prop_assert_eq!(pretty_print(&back), text);
    }

    #[test]
    fn control_flow_signatures_balance(seed in any::<u64>()) {
        let p = common::random_program(seed);
        prop_assert!(cf_signature(&p).is_balanced());
    }

    #[test]
    fn binarization_keeps_every_node(seed in any::<u64>()) {
        let p = common::random_program(seed);
        let b = binarize(&p.root);
        prop_assert_eq!(b.len(), p.size());
        let h = b.heights();
        prop_assert_eq!(h[b.root().unwrap() as usize] as usize, h.iter().copied().max().unwrap() as usize);
    }

    #[test]
    fn renaming_preserves_control_flow(seed in any::<u64>()) {
        let p = common::random_program(seed);
        let r = common::renamed(&p, &|v| Some(format!("{v}_r")));
        prop_assert_eq!(cf_signature(&p), cf_signature(&r));
        prop_assert_eq!(r.same_tree(&p), p.vars().is_empty());
    }
}
