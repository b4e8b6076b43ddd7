//! Fix generation from discrepancies and test-driven search for a minimal
//! repairing subset.

mod apply;
mod fix;
mod group;
mod minimize;
mod prune;

use thiserror::Error;

pub use apply::apply_fixes;
pub use fix::{gen_fixes, Anchor, Fix, FixKind};
pub use group::{group_fixes, singleton_groups, FixGroup, GroupReason};
pub use minimize::{minimize, MinimalFixSet, MinimizeConfig, DEFAULT_MAX_CARD};
pub use prune::reachability_filter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepairError {
    #[error("two fixes target {0:?}")]
    ConflictingFixes(Anchor),
    #[error("applying every fix still fails the tests")]
    InvalidCandidate,
    #[error("no repair within {max_card} change(s)")]
    ExceedsThreshold { max_card: usize },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::{alpha_conversion, discrepancies};
    use crate::interp::{OutputMatch, TestCase, TestSuite};
    use crate::lang::{parse, pretty_print, Ast};
    use crate::Value;

    fn suite(n: i64, expected: &str) -> TestSuite {
        TestSuite {
            entry: "f".into(),
            tests: vec![TestCase {
                name: "t".into(),
                args: vec![Value::Int(n)],
                expected_output: expected.into(),
                expected_return: None,
            }],
            budget: Some(10_000),
            output_match: OutputMatch::default(),
        }
    }

    fn fixes_for(pe: &Ast, pc: &Ast) -> (Ast, Vec<Fix>) {
        let (pac, _) = alpha_conversion(pe, pc, 1);
        let d = discrepancies(pe, &pac).unwrap();
        (pac.clone(), gen_fixes(pe, &d))
    }

    const CORRECT: &str = "func f(n: int) {
    var ch = true;
    for (i = 0; i < n; i += 1) {
        if (ch) {
            print(\"X\");
        } else {
            print(\"O\");
        }
        ch = !ch;
    }
}";

    const MISSING_FLIP: &str = "func f(size: int) {
    var b = true;
    for (k = 0; k < size; k += 1) {
        if (b) {
            print(\"X\");
        } else {
            print(\"O\");
        }
    }
    print(\"done\");
}";

    #[test]
    fn one_insertion_repairs_missing_flip() {
        let pe = parse(MISSING_FLIP).unwrap();
        let pc = parse(CORRECT).unwrap();
        let (pac, fixes) = fixes_for(&pe, &pc);
        let s = suite(3, "X\nO\nX\ndone\n");
        let full = apply_fixes(&pe, &fixes).unwrap();
        assert!(full.same_tree(&pac), "{}", pretty_print(&full));
        // The corpus program lacks the final print, so the full rewrite fails.
        assert_eq!(
            minimize(&pe, &fixes, &s, &MinimizeConfig::default()).unwrap_err(),
            RepairError::InvalidCandidate
        );
        let pc2 = parse(&CORRECT.replace("    }\n}", "    }\n    print(\"done\");\n}")).unwrap();
        let (_, fixes) = fixes_for(&pe, &pc2);
        assert_eq!(fixes.len(), 1);
        let m = minimize(&pe, &fixes, &s, &MinimizeConfig::default()).unwrap();
        assert_eq!(m.cardinality, 1);
        assert_eq!(m.fixes[0].kind, FixKind::Insertion);
        assert_eq!(m.fixes[0].line, 9);
    }

    #[test]
    fn empty_subset_leaves_program_alone() {
        let pe = parse(MISSING_FLIP).unwrap();
        assert!(apply_fixes(&pe, &[]).unwrap().same_tree(&pe));
    }

    #[test]
    fn insertion_grows_by_statement_size() {
        let pe = parse("func f(n: int) { print(n); }").unwrap();
        let pc = parse("func f(n: int) { print(n); print(n + 1); }").unwrap();
        let (_, fixes) = fixes_for(&pe, &pc);
        assert_eq!(fixes.len(), 1);
        let out = apply_fixes(&pe, &fixes).unwrap();
        assert_eq!(out.size(), pe.size() + fixes[0].replacement.as_ref().unwrap().size());
    }

    #[test]
    fn conflicting_anchors_are_rejected() {
        let pe = parse("func f(n: int) { print(n); }").unwrap();
        let pc = parse("func f(n: int) { print(n + 1); }").unwrap();
        let (_, fixes) = fixes_for(&pe, &pc);
        let doubled = vec![fixes[0].clone(), fixes[0].clone()];
        assert!(matches!(
            apply_fixes(&pe, &doubled),
            Err(RepairError::ConflictingFixes(_))
        ));
    }

    #[test]
    fn already_correct_needs_nothing() {
        let pe = parse(CORRECT).unwrap();
        let m = minimize(&pe, &[], &suite(2, "X\nO\n"), &MinimizeConfig::default()).unwrap();
        assert_eq!(m.cardinality, 0);
    }

    #[test]
    fn dead_branch_fix_is_pruned() {
        let pe = parse("func f(n: int) { if (false) { print(1); } print(n); }").unwrap();
        let pc = parse("func f(n: int) { if (false) { print(2); } print(n + 1); }").unwrap();
        let (_, fixes) = fixes_for(&pe, &pc);
        assert_eq!(fixes.len(), 2);
        let (kept, excluded) = reachability_filter(&fixes, &pe, &suite(1, "2\n"));
        assert_eq!(kept.len(), 1);
        assert_eq!(excluded.len(), 1);
        assert_eq!(
            crate::lang::simple_to_string(excluded[0].replacement.as_ref().unwrap()),
            "print(2)"
        );
    }

    #[test]
    fn insertion_into_unreached_block_is_pruned() {
        let pe = parse("func f(n: int) { while (n < 0) { n += 1; } print(n); }").unwrap();
        let pc = parse("func f(n: int) { while (n < 0) { n += 1; print(0); } print(n); }").unwrap();
        let (_, fixes) = fixes_for(&pe, &pc);
        let (kept, excluded) = reachability_filter(&fixes, &pe, &suite(1, "1\n"));
        assert!(kept.is_empty());
        assert_eq!(excluded[0].kind, FixKind::Insertion);
    }

    #[test]
    fn new_variable_groups_with_its_uses() {
        let pe = parse("func f(n: int) { var i = 0; while (i < n) { i += 1; } print(i); }").unwrap();
        let pc = parse("func f(n: int) { var i = 0; var t = 0; while (i < n) { t += i; i += 1; } print(i); }").unwrap();
        let (_, fixes) = fixes_for(&pe, &pc);
        assert_eq!(fixes.len(), 2);
        let groups = group_fixes(&fixes, &pe);
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].reason, GroupReason::DefUseDependency);
    }

    #[test]
    fn header_edits_share_a_group() {
        let pe = parse("func f(n: int) { for (i = 1; i <= n; i += 1) { print(i); } }").unwrap();
        let pc = parse("func f(n: int) { for (i = 0; i < n; i += 1) { print(i + 1); } }").unwrap();
        let (_, fixes) = fixes_for(&pe, &pc);
        let groups = group_fixes(&fixes, &pe);
        assert_eq!(fixes.len(), 3);
        assert_eq!(groups.len(), 2);
        assert!(groups
            .iter()
            .any(|g| g.reason == GroupReason::SameStatement && g.members.len() == 2));
    }

    #[test]
    fn needing_more_than_the_cutoff_fails() {
        let pe = parse("func f(n: int) { print(n); print(n); print(n); print(n); }").unwrap();
        let pc = parse("func f(n: int) { print(n + 1); print(n + 2); print(n + 3); print(n + 4); }").unwrap();
        let (_, fixes) = fixes_for(&pe, &pc);
        let s = suite(0, "1\n2\n3\n4\n");
        assert_eq!(
            minimize(&pe, &fixes, &s, &MinimizeConfig::default()).unwrap_err(),
            RepairError::ExceedsThreshold { max_card: 3 }
        );
        let wide = MinimizeConfig {
            max_card: 4,
            ..MinimizeConfig::default()
        };
        assert_eq!(minimize(&pe, &fixes, &s, &wide).unwrap().cardinality, 4);
    }
}
