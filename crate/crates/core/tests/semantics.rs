mod common;

use ik4::enumeration::{countermodel_search, FrameFilter, SearchOutcome};
use ik4::formula::{ClosureSet, Formula};
use ik4::oracle::{accessibility_violation, FiniteModelOracle, WorldOracle};
use ik4::semantics::{check_heredity, extension, forces, ClosureMode, Model, Relation, Variant};
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};

fn models() -> &'static [Model] {
    static MODELS: OnceLock<Vec<Model>> = OnceLock::new();
    MODELS.get_or_init(|| common::ik4_models(3, &common::atoms(&["p", "q"])))
}

fn relation(n: usize, pairs: &[(usize, usize)]) -> Relation {
    Relation::from_pairs(n, pairs.iter().map(|&(a, b)| (a % n, b % n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn variants_agree_and_truth_persists(
        idx in 0..models().len(),
        a in common::formula(common::atoms(&["p", "q"]), 3),
    ) {
        let m = &models()[idx];
        let bd = extension(m, &a, Variant::BD);
        for v in [Variant::FS, Variant::P, Variant::W] {
            prop_assert_eq!(&extension(m, &a, v), &bd, "{:?} on {}", v, a);
        }
        for s in 0..m.size() {
            prop_assert_eq!(forces(m, s, &a, Variant::BD).unwrap(), bd.contains(s));
        }
        prop_assert!(check_heredity(m, [&a]).is_empty());
    }

    #[test]
    fn closures_are_monotone_and_idempotent(
        n in 1usize..6,
        r in proptest::collection::vec((0usize..6, 0usize..6), 0..12),
        extra in proptest::collection::vec((0usize..6, 0usize..6), 0..4),
    ) {
        let r = relation(n, &r);
        let s = r.union(&relation(n, &extra));
        let plus = r.closure(ClosureMode::Transitive);
        let star = r.closure(ClosureMode::ReflexiveTransitive);
        prop_assert!(r.is_subset(&plus) && plus.is_subset(&star));
        prop_assert!(plus.is_transitive() && star.is_preorder());
        prop_assert_eq!(plus.closure(ClosureMode::Transitive), plus.clone());
        prop_assert_eq!(star.closure(ClosureMode::ReflexiveTransitive), star);
        prop_assert!(plus.is_subset(&s.closure(ClosureMode::Transitive)));
    }

    #[test]
    fn oracle_traces_respect_the_frame(
        idx in 0..models().len(),
        a in common::formula(common::atoms(&["p", "q"]), 3),
    ) {
        let m = &models()[idx];
        let o = FiniteModelOracle::new(m.clone(), Arc::new(ClosureSet::new(&a))).unwrap();
        let c = o.closure().clone();
        for s in 0..m.size() {
            for t in 0..m.size() {
                if o.accessible(s, t) {
                    prop_assert_eq!(accessibility_violation(&o, s, t), None);
                }
                if o.leq(s, t) {
                    prop_assert!(o.trace(s).is_subset(o.trace(t)));
                }
            }
            for id in 0..c.len() {
                if o.trace(s).contains(id) {
                    continue;
                }
                let Some(t) = o.maximal_extension(s, id).unwrap() else {
                    prop_assert!(o.is_maximal(s, id).unwrap());
                    continue;
                };
                prop_assert!(m.frame().lt(s, t) && !o.trace(t).contains(id));
                prop_assert!(o.is_maximal(t, id).unwrap());
                for u in 0..m.size() {
                    if m.frame().lt(t, u) {
                        prop_assert!(o.trace(u).contains(id));
                    }
                }
            }
        }
    }
}

#[test]
fn search_is_deterministic_and_verified() {
    for text in ["[]p -> <>p", "p | ~p", "<>p -> []p", "[]p -> [][]q", "~~p -> p"] {
        let f = ik4::parse(text).unwrap();
        let first = countermodel_search(&f, 3, &FrameFilter::ik4());
        assert_eq!(countermodel_search(&f, 3, &FrameFilter::ik4()), first);
        let SearchOutcome::Countermodel { model, world } = first else {
            panic!("{text} has a small countermodel");
        };
        assert!(FrameFilter::ik4().accepts(model.frame()));
        assert!(!forces(&model, world, &f, Variant::BD).unwrap());
    }
}

#[test]
fn each_variant_differs_somewhere_without_the_conditions() {
    // Off the IK4 class the four clause sets do come apart.
    let pool: Vec<Formula> = ["[]p", "<>p"].iter().map(|t| ik4::parse(t).unwrap()).collect();
    let unrestricted: Vec<Model> = (1..=2)
        .flat_map(|n| ik4::enumeration::enumerate_models(n, FrameFilter::none(), &common::atoms(&["p"])).collect::<Vec<_>>())
        .collect();
    for v in [Variant::FS, Variant::P, Variant::W] {
        let differs = unrestricted
            .iter()
            .any(|m| pool.iter().any(|f| extension(m, f, v) != extension(m, f, Variant::BD)));
        assert!(differs, "{v:?}");
    }
}
