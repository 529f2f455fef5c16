mod common;

use ik4::formula::{ClosureSet, Formula, LabelPoset};
use ik4::ltree::FinitePoset;
use ik4::parse;
use proptest::prelude::*;
use std::sync::Arc;

fn spaced(text: &str, gaps: &[bool]) -> String {
    // Tokens never contain spaces, so spaces may go around any operator.
    let mut out = String::new();
    let mut k = 0;
    for c in text.chars() {
        if matches!(c, '(' | ')' | '~' | '&' | '|') || c == '-' || c == '[' || c == '<' {
            if gaps.get(k).copied().unwrap_or(false) {
                out.push(' ');
            }
            k += 1;
        }
        out.push(c);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closure_is_no_longer_than_the_formula(a in common::formula(common::atoms(&["p", "q", "r"]), 6)) {
        let c = ClosureSet::new(&a);
        prop_assert!(c.len() <= a.length());
        prop_assert!(c.contains(&a));
        for m in c.members() {
            for child in m.children() {
                prop_assert!(c.contains(child));
            }
        }
    }

    #[test]
    fn render_then_parse_is_identity(a in common::formula(common::atoms(&["p", "q"]), 5)) {
        prop_assert_eq!(parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn parse_then_render_is_canonical(
        a in common::formula(common::atoms(&["p", "q"]), 4),
        gaps in proptest::collection::vec(any::<bool>(), 64),
    ) {
        let canonical = a.to_string();
        let text = spaced(&canonical, &gaps);
        prop_assert_eq!(parse(&text).unwrap().to_string(), canonical);
    }
}

#[test]
fn explicit_parentheses_are_dropped() {
    assert_eq!(parse("((p) -> (q -> r))").unwrap().to_string(), "p -> q -> r");
    assert_eq!(parse("(p -> q) -> r").unwrap().to_string(), "(p -> q) -> r");
    assert_eq!(parse("(p & q) | r").unwrap().to_string(), "p & q | r");
}

#[test]
fn label_poset_cardinality() {
    let seeds = ["p", "[]p", "p -> q", "[](p | q) -> <>p | []q", "<>(p -> q) -> ([]p -> <>q)"];
    for s in seeds {
        let a = parse(s).unwrap();
        let p = LabelPoset::new(Arc::new(ClosureSet::new(&a)));
        let n = p.closure().len();
        assert!(n <= 10);
        assert_eq!(p.labels().len() as u128, 1 + (1u128 << n));
        assert_eq!(p.cardinality(), Some(1 + (1u128 << n)));
        assert!(p.cardinality().unwrap() <= 1 + (1u128 << a.length()));
    }
}

#[test]
fn label_order_is_a_partial_order() {
    for s in ["p", "[]p", "p & q", "p -> q", "[]p -> <>p"] {
        let p = common::label_poset(s);
        assert!(p.closure().len() <= 4, "{s}");
        let ls = p.elements();
        for a in &ls {
            assert!(p.leq(a, a));
            for b in &ls {
                if p.leq(a, b) && p.leq(b, a) {
                    assert_eq!(a, b);
                }
                for c in &ls {
                    if p.leq(a, b) && p.leq(b, c) {
                        assert!(p.leq(a, c));
                    }
                }
            }
        }
    }
}

#[test]
fn negation_is_implication_of_falsum() {
    assert_eq!(parse("~p").unwrap(), Formula::implies(Formula::atom("p"), Formula::Bot));
}
