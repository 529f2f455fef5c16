mod common;

use ik4::clip::{
    build_saturated_model, check_truth_lemma, degree, is_clean, saturate, slice, validate, Clip, Procedure,
    SaturationConfig, SaturationResult, TraceEvent, SENTINEL,
};
use ik4::formula::{ClosureSet, Formula};
use ik4::ltree::{validate_embedding, Embedding};
use ik4::oracle::{accessibility_violation, FiniteModelOracle};
use ik4::semantics::{extension, FrameCondition, Model, Variant};
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};

fn three_world_models() -> &'static [Model] {
    static MODELS: OnceLock<Vec<Model>> = OnceLock::new();
    MODELS.get_or_init(|| common::ik4_models(3, &common::atoms(&["p", "q"])))
}

fn check_run(m: &Model, a: &Formula) {
    let closure = Arc::new(ClosureSet::new(a));
    let o = FiniteModelOracle::new(m.clone(), closure.clone()).unwrap();
    let config = SaturationConfig {
        record_trace: true,
        check_invariants: true,
        ..SaturationConfig::default()
    };
    let refuted = extension(m, a, Variant::BD);
    for s0 in (0..m.size()).filter(|&s| !refuted.contains(s)) {
        let r = saturate(&o, s0, &config).unwrap();
        assert!(r.beta_f >= 1 && r.beta_f < r.alpha_f);
        assert!(validate(&r.clip, &o).is_ok());

        // Cleanness at the end of the run.
        assert!(is_clean(&r.clip, &o, Procedure::Maximality, r.alpha_f + 1).unwrap());
        for p in [Procedure::Accessibility, Procedure::Dc, Procedure::Fc] {
            assert!(is_clean(&r.clip, &o, p, r.alpha_f).unwrap(), "{p} at {a}");
        }
        assert_eq!(r.clip.rank_tips(r.alpha_f + 1).count(), 0);
        for t in r.clip.tips() {
            assert!(degree(&r.clip, &o, t.id).unwrap() <= closure.len());
        }
        // Along every ▷ edge the traces are related as the modal clauses
        // require.
        for (i, j) in r.clip.tri_edges() {
            let (s, t) = (r.clip.tip(i).world, r.clip.tip(j).world);
            assert_eq!(accessibility_violation(&o, s, t), None);
        }

        // The stored loop embedding really is one between the two slices.
        let top = slice(&r.clip, &o, &r.poset, r.alpha_f).unwrap();
        let low = slice(&r.clip, &o, &r.poset, r.beta_f).unwrap();
        let mut map = r.loop_embedding.clone();
        map.insert(SENTINEL, SENTINEL);
        validate_embedding(&top, &low, &Embedding { map }).unwrap();

        // Tip ids come from a counter.
        let mut last = 0;
        for e in &r.trace {
            if let TraceEvent::Repair { new_tip, .. } = e {
                assert!(*new_tip > last);
                last = *new_tip;
            }
        }
        assert_eq!(r.clip.len(), last + 1);

        replay(&r, &o, closure.len());

        let sm = build_saturated_model(&r, &o).unwrap();
        for c in [FrameCondition::Transitive, FrameCondition::Downward, FrameCondition::Forward] {
            assert!(sm.model.frame().satisfies(c), "{c} fails for {a}");
        }
        assert_eq!(check_truth_lemma(&r.clip, &o, &sm), vec![]);
        let root = sm.world_of(0).unwrap();
        assert!(!extension(&sm.model, a, Variant::BD).contains(root));
    }
}

/// The clip made of the first `n` tips of `c`.
fn prefix(c: &Clip<usize>, n: usize) -> Clip<usize> {
    let tips = c.tips().take(n).map(|t| (t.world, t.rank, t.height));
    let keep = |&(a, b): &(usize, usize)| a < n && b < n;
    Clip::from_parts(tips, c.lt_edges().filter(keep), c.tri_edges().filter(keep)).unwrap()
}

/// Walks the trace of a run and checks the per-repair measures and the
/// cleanness reached at every dreary check.
fn replay(r: &SaturationResult<usize>, o: &FiniteModelOracle, sigma: usize) {
    let mut tips = 1;
    let mut max_height = 0;
    let mut pass: Option<(Procedure, usize)> = None;
    let mut height_at_start = 0;
    for e in &r.trace {
        match e {
            TraceEvent::Repair { defect, new_tip } => {
                let key = (defect.kind.procedure(), defect.rank);
                if pass != Some(key) {
                    pass = Some(key);
                    height_at_start = max_height;
                }
                let new = r.clip.tip(*new_tip);
                if key.0 == Procedure::Maximality {
                    let old = defect.kind.first_tip();
                    assert!(degree(&r.clip, o, *new_tip).unwrap() < degree(&r.clip, o, old).unwrap());
                    assert!(new.height <= height_at_start + sigma);
                } else {
                    assert!(new.height <= height_at_start, "{} raised the height", key.0);
                }
                max_height = max_height.max(new.height);
                tips += 1;
            }
            TraceEvent::DrearyCheck { alpha, .. } => {
                let c = prefix(&r.clip, tips);
                assert!(is_clean(&c, o, Procedure::Maximality, alpha + 1).unwrap());
                for p in [Procedure::Accessibility, Procedure::Dc, Procedure::Fc] {
                    assert!(is_clean(&c, o, p, *alpha).unwrap(), "{p} at rank {alpha}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn saturation_reproduces_the_oracle(
        idx in 0..three_world_models().len(),
        a in common::formula(common::atoms(&["p", "q"]), 3),
    ) {
        check_run(&three_world_models()[idx], &a);
    }
}

#[test]
fn clip_frames_are_upward_confluent() {
    let models = three_world_models();
    let a = ik4::parse("[](p | q) -> <>p | []q").unwrap();
    let closure = Arc::new(ClosureSet::new(&a));
    for m in models.iter().step_by(7) {
        let o = FiniteModelOracle::new(m.clone(), closure.clone()).unwrap();
        for s0 in 0..m.size() {
            let r = saturate(&o, s0, &SaturationConfig::default()).unwrap();
            let plain = ik4::clip::assemble_model(&r.clip, &o, &[]).unwrap();
            assert!(plain.model.frame().satisfies(FrameCondition::Upward));
        }
    }
}
