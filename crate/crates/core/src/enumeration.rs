//! Exhaustive generation of small frames and valuations, and bounded
//! countermodel search.

use crate::bitset::BitSet;
use crate::formula::{Atom, Formula};
use crate::semantics::{
    extension, forces, relation_closure, ClosureMode, Frame, FrameCondition, Model, Relation,
    Valuation, Variant,
};
use rayon::prelude::*;
use std::collections::BTreeSet;

/// Conditions a frame must satisfy (`require`) and must fail (`forbid`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrameFilter {
    pub require: BTreeSet<FrameCondition>,
    pub forbid: BTreeSet<FrameCondition>,
}

impl FrameFilter {
    pub fn none() -> Self {
        Self::default()
    }

    /// Transitive, downward confluent and forward confluent.
    pub fn ik4() -> Self {
        Self::requiring([
            FrameCondition::Transitive,
            FrameCondition::Downward,
            FrameCondition::Forward,
        ])
    }

    pub fn requiring(conds: impl IntoIterator<Item = FrameCondition>) -> Self {
        FrameFilter {
            require: conds.into_iter().collect(),
            forbid: BTreeSet::new(),
        }
    }

    pub fn forbidding(mut self, conds: impl IntoIterator<Item = FrameCondition>) -> Self {
        self.forbid.extend(conds);
        self
    }

    pub fn accepts(&self, frame: &Frame) -> bool {
        self.require.iter().all(|&c| frame.satisfies(c))
            && self.forbid.iter().all(|&c| !frame.satisfies(c))
    }
}

/// Every preorder on `n` elements, in increasing order, each listed once.
pub fn preorders(n: usize) -> Vec<Relation> {
    assert!((1..=5).contains(&n), "preorder enumeration supports 1..=5 worlds");
    let off_diagonal: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut seen = BTreeSet::new();
    for mask in 0u64..1 << off_diagonal.len() {
        let gens = off_diagonal
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p);
        let closed = relation_closure(&Relation::from_pairs(n, gens), ClosureMode::ReflexiveTransitive);
        seen.insert(closed);
    }
    seen.into_iter().collect()
}

/// Every frame with `n` worlds accepted by `filter`: preorders in
/// increasing order, then modal relations by increasing bitmask.
pub fn enumerate_frames(n: usize, filter: FrameFilter) -> impl Iterator<Item = Frame> {
    assert!(n * n < 64, "too many worlds to enumerate modal relations");
    let cells = n * n;
    preorders(n).into_iter().flat_map(move |leq| {
        let filter = filter.clone();
        (0u64..1 << cells).filter_map(move |mask| {
            let rel = Relation::from_pairs(
                n,
                (0..cells).filter(|i| mask >> i & 1 == 1).map(|i| (i / n, i % n)),
            );
            let frame = Frame::new(leq.clone(), rel).expect("enumerated preorder");
            filter.accepts(&frame).then_some(frame)
        })
    })
}

/// Every valuation sending each atom to an upward-closed set. Atoms vary
/// fastest from the end of the list.
pub fn enumerate_valuations(frame: &Frame, atoms: &[Atom]) -> impl Iterator<Item = Valuation> {
    let ups = frame.up_sets();
    let atoms = atoms.to_vec();
    let total = ups.len().checked_pow(atoms.len() as u32).expect("too many valuations");
    (0..total).map(move |mut code| {
        let mut val = Valuation::new();
        for atom in atoms.iter().rev() {
            val.insert(atom.clone(), ups[code % ups.len()].clone());
            code /= ups.len();
        }
        val
    })
}

/// Every model with `n` worlds over frames accepted by `filter`.
pub fn enumerate_models(
    n: usize,
    filter: FrameFilter,
    atoms: &[Atom],
) -> impl Iterator<Item = Model> + '_ {
    enumerate_frames(n, filter).flat_map(move |frame| {
        enumerate_valuations(&frame, atoms)
            .map(move |v| Model::new(frame.clone(), v).expect("enumerated valuation"))
            .collect::<Vec<_>>()
    })
}

/// Every formula over `atoms`, `⊤` and `⊥` with connective depth at most
/// `depth`, shallower formulas first. Sizes grow doubly exponentially: one
/// atom gives 3, 36 and 3963 formulas at depths 0, 1 and 2.
pub fn formulas_up_to_depth(atoms: &[Atom], depth: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = atoms.iter().map(|p| Formula::Atom(p.clone())).collect();
    all.extend([Formula::Top, Formula::Bot]);
    for _ in 0..depth {
        let prev = all.clone();
        let mut seen: BTreeSet<Formula> = prev.iter().cloned().collect();
        let mut next = prev.clone();
        let mut push = |f: Formula| {
            if seen.insert(f.clone()) {
                next.push(f);
            }
        };
        for a in &prev {
            push(Formula::boxed(a.clone()));
            push(Formula::dia(a.clone()));
        }
        for a in &prev {
            for b in &prev {
                push(Formula::implies(a.clone(), b.clone()));
                push(Formula::and(a.clone(), b.clone()));
                push(Formula::or(a.clone(), b.clone()));
            }
        }
        all = next;
    }
    all
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Countermodel { model: Model, world: usize },
    ExhaustedBound(usize),
}

const BLOCK: usize = 4096;

/// Scans frame sizes `1..=bound` in enumeration order and returns the first
/// model and world refuting `f` under the plain clauses.
pub fn countermodel_search(f: &Formula, bound: usize, filter: &FrameFilter) -> SearchOutcome {
    assert!(bound >= 1, "bound must be at least 1");
    let atoms: Vec<Atom> = f.atoms().into_iter().collect();
    for n in 1..=bound {
        let mut frames = enumerate_frames(n, filter.clone());
        loop {
            let block: Vec<Frame> = frames.by_ref().take(BLOCK).collect();
            if block.is_empty() {
                break;
            }
            // find_map_first keeps the earliest hit, so the answer does not
            // depend on scheduling.
            let hit = block
                .par_iter()
                .find_map_first(|frame| refute_on_frame(frame, f, &atoms));
            if let Some((model, world)) = hit {
                assert!(filter.accepts(model.frame()), "countermodel frame fails the filter");
                assert!(
                    !forces(&model, world, f, Variant::BD).expect("world in range"),
                    "countermodel does not refute the formula"
                );
                return SearchOutcome::Countermodel { model, world };
            }
        }
    }
    SearchOutcome::ExhaustedBound(bound)
}

fn refute_on_frame(frame: &Frame, f: &Formula, atoms: &[Atom]) -> Option<(Model, usize)> {
    enumerate_valuations(frame, atoms).find_map(|v| {
        let m = Model::new(frame.clone(), v).ok()?;
        let ext = extension(&m, f, Variant::BD);
        let all = BitSet::full(m.size());
        let world = all.iter().find(|&s| !ext.contains(s))?;
        Some((m, world))
    })
}
