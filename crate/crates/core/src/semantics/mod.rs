//! Finite birelational frames and models.
//!
//! A frame is a set of worlds `0..size` with a preorder `leq` and a modal
//! relation `rel`. The preorder is always stored closed; `rel` is stored as
//! given. Satisfaction comes in four flavours ([`Variant`]) which differ only
//! in their modal clauses.

mod io;
mod relation;

pub use io::{parse_model, render_model, ModelFileError};
pub use relation::{relation_closure, ClosureMode, Relation};

use crate::bitset::BitSet;
use crate::formula::{Atom, ClosureNode, ClosureSet, Formula};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("frame must have at least one world")]
    NoWorlds,
    #[error("world {world} out of range for a frame of {size} worlds")]
    WorldOutOfRange { world: usize, size: usize },
    #[error("the intuitionistic relation is not a preorder")]
    NotPreorder,
    #[error("relations have sizes {leq} and {rel}")]
    SizeMismatch { leq: usize, rel: usize },
    #[error("valuation of `{atom}` is not upward closed: contains {lower} but not {upper}")]
    NotUpClosed { atom: Atom, lower: usize, upper: usize },
    #[error("valuation of `{atom}` has width {found}, expected {expected}")]
    ValuationWidth { atom: Atom, expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frame {
    leq: Relation,
    rel: Relation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameCondition {
    Transitive,
    Upward,
    Downward,
    Forward,
}

impl FrameCondition {
    pub const ALL: [FrameCondition; 4] = [
        FrameCondition::Transitive,
        FrameCondition::Upward,
        FrameCondition::Downward,
        FrameCondition::Forward,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrameCondition::Transitive => "transitive",
            FrameCondition::Upward => "upward",
            FrameCondition::Downward => "downward",
            FrameCondition::Forward => "forward",
        }
    }
}

impl fmt::Display for FrameCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrameCondition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FrameCondition::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown frame condition `{s}`"))
    }
}

impl Frame {
    /// `leq` must already be a preorder.
    pub fn new(leq: Relation, rel: Relation) -> Result<Self, SemanticsError> {
        if leq.size() == 0 {
            return Err(SemanticsError::NoWorlds);
        }
        if leq.size() != rel.size() {
            return Err(SemanticsError::SizeMismatch {
                leq: leq.size(),
                rel: rel.size(),
            });
        }
        if !leq.is_preorder() {
            return Err(SemanticsError::NotPreorder);
        }
        Ok(Frame { leq, rel })
    }

    /// Closes `le` reflexively and transitively; `r` is taken verbatim.
    pub fn from_generators(
        size: usize,
        le: impl IntoIterator<Item = (usize, usize)>,
        r: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, SemanticsError> {
        let le: Vec<_> = le.into_iter().collect();
        let r: Vec<_> = r.into_iter().collect();
        for &(a, b) in le.iter().chain(&r) {
            for w in [a, b] {
                if w >= size {
                    return Err(SemanticsError::WorldOutOfRange { world: w, size });
                }
            }
        }
        let leq = relation_closure(&Relation::from_pairs(size, le), ClosureMode::ReflexiveTransitive);
        Frame::new(leq, Relation::from_pairs(size, r))
    }

    pub fn size(&self) -> usize {
        self.leq.size()
    }

    pub fn leq(&self) -> &Relation {
        &self.leq
    }

    pub fn rel(&self) -> &Relation {
        &self.rel
    }

    pub fn le(&self, s: usize, t: usize) -> bool {
        self.leq.contains(s, t)
    }

    pub fn lt(&self, s: usize, t: usize) -> bool {
        self.le(s, t) && !self.le(t, s)
    }

    pub fn r(&self, s: usize, t: usize) -> bool {
        self.rel.contains(s, t)
    }

    /// Some triple witnessing the failure of `cond`, in the order the
    /// condition quantifies it:
    /// - transitive: `s R t`, `t R u`, not `s R u`;
    /// - upward: `s R t`, `u ≤ t`, no `v ≤ s` with `v R u`;
    /// - downward: `s ≤ t`, `t R u`, no `v` with `s R v`, `v ≤ u`;
    /// - forward: `t ≤ s`, `t R u`, no `v` with `s R v`, `u ≤ v`.
    pub fn violation(&self, cond: FrameCondition) -> Option<(usize, usize, usize)> {
        let n = self.size();
        let exists = |pred: &dyn Fn(usize) -> bool| (0..n).any(pred);
        for s in 0..n {
            for t in 0..n {
                for u in 0..n {
                    let bad = match cond {
                        FrameCondition::Transitive => {
                            self.r(s, t) && self.r(t, u) && !self.r(s, u)
                        }
                        FrameCondition::Upward => {
                            self.r(s, t) && self.le(u, t) && !exists(&|v| self.le(v, s) && self.r(v, u))
                        }
                        FrameCondition::Downward => {
                            self.le(s, t) && self.r(t, u) && !exists(&|v| self.r(s, v) && self.le(v, u))
                        }
                        FrameCondition::Forward => {
                            self.le(t, s) && self.r(t, u) && !exists(&|v| self.r(s, v) && self.le(u, v))
                        }
                    };
                    if bad {
                        return Some((s, t, u));
                    }
                }
            }
        }
        None
    }

    pub fn satisfies(&self, cond: FrameCondition) -> bool {
        self.violation(cond).is_none()
    }

    /// The set of worlds above `s`.
    pub fn up(&self, s: usize) -> &BitSet {
        self.leq.successors(s)
    }

    pub fn is_up_closed(&self, set: &BitSet) -> bool {
        set.iter().all(|s| self.up(s).is_subset(set))
    }

    /// All upward-closed subsets of the worlds, in increasing mask order.
    pub fn up_sets(&self) -> Vec<BitSet> {
        let n = self.size();
        assert!(n < 24, "too many worlds to list up-sets");
        (0..1u64 << n)
            .map(|m| BitSet::from_mask(n, m))
            .filter(|s| self.is_up_closed(s))
            .collect()
    }
}

/// Atoms absent from the map are false everywhere.
pub type Valuation = BTreeMap<Atom, BitSet>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    frame: Frame,
    valuation: Valuation,
}

impl Model {
    pub fn new(frame: Frame, valuation: Valuation) -> Result<Self, SemanticsError> {
        let n = frame.size();
        for (atom, set) in &valuation {
            if set.len() != n {
                return Err(SemanticsError::ValuationWidth {
                    atom: atom.clone(),
                    expected: n,
                    found: set.len(),
                });
            }
            for s in set.iter() {
                if let Some(t) = frame.up(s).iter().find(|&t| !set.contains(t)) {
                    return Err(SemanticsError::NotUpClosed {
                        atom: atom.clone(),
                        lower: s,
                        upper: t,
                    });
                }
            }
        }
        Ok(Model { frame, valuation })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn size(&self) -> usize {
        self.frame.size()
    }

    pub fn holds(&self, atom: &str, s: usize) -> bool {
        self.valuation.get(atom).is_some_and(|v| v.contains(s))
    }

    fn atom_set(&self, atom: &str) -> BitSet {
        self.valuation
            .get(atom)
            .cloned()
            .unwrap_or_else(|| BitSet::new(self.size()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// Plain modal clauses over `R`.
    BD,
    /// `□` over `≤` then `R`; `◇` as in BD.
    FS,
    /// `□` as in FS; `◇` over `≥` then `R`.
    P,
    /// `□` as in FS; `◇` for every `≤`-successor.
    W,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::BD, Variant::FS, Variant::P, Variant::W];
}

/// Pointwise satisfaction, a direct transcription of the inductive clauses.
pub fn forces(m: &Model, s: usize, f: &Formula, v: Variant) -> Result<bool, SemanticsError> {
    if s >= m.size() {
        return Err(SemanticsError::WorldOutOfRange {
            world: s,
            size: m.size(),
        });
    }
    Ok(forces_at(m, s, f, v))
}

fn forces_at(m: &Model, s: usize, f: &Formula, v: Variant) -> bool {
    let fr = &m.frame;
    let worlds = 0..m.size();
    match f {
        Formula::Atom(p) => m.holds(p, s),
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Implies(a, b) => worlds
            .filter(|&t| fr.le(s, t))
            .all(|t| !forces_at(m, t, a, v) || forces_at(m, t, b, v)),
        Formula::And(a, b) => forces_at(m, s, a, v) && forces_at(m, s, b, v),
        Formula::Or(a, b) => forces_at(m, s, a, v) || forces_at(m, s, b, v),
        Formula::Box(a) => match v {
            Variant::BD => fr.rel.successors(s).iter().all(|t| forces_at(m, t, a, v)),
            Variant::FS | Variant::P | Variant::W => worlds
                .filter(|&t| fr.le(s, t))
                .all(|t| fr.rel.successors(t).iter().all(|u| forces_at(m, u, a, v))),
        },
        Formula::Dia(a) => match v {
            Variant::BD | Variant::FS => fr.rel.successors(s).iter().any(|t| forces_at(m, t, a, v)),
            Variant::P => worlds
                .filter(|&t| fr.le(t, s))
                .any(|t| fr.rel.successors(t).iter().any(|u| forces_at(m, u, a, v))),
            Variant::W => worlds
                .filter(|&t| fr.le(s, t))
                .all(|t| fr.rel.successors(t).iter().any(|u| forces_at(m, u, a, v))),
        },
    }
}

/// The set of worlds forcing `f`, computed set-at-a-time.
pub fn extension(m: &Model, f: &Formula, v: Variant) -> BitSet {
    let fr = &m.frame;
    let n = m.size();
    match f {
        Formula::Atom(p) => m.atom_set(p),
        Formula::Top => BitSet::full(n),
        Formula::Bot => BitSet::new(n),
        Formula::Implies(a, b) => implies_set(fr, &extension(m, a, v), &extension(m, b, v)),
        Formula::And(a, b) => {
            let mut x = extension(m, a, v);
            x.intersect_with(&extension(m, b, v));
            x
        }
        Formula::Or(a, b) => {
            let mut x = extension(m, a, v);
            x.union_with(&extension(m, b, v));
            x
        }
        Formula::Box(a) => box_set(fr, &extension(m, a, v), v),
        Formula::Dia(a) => dia_set(fr, &extension(m, a, v), v),
    }
}

/// Extensions of every member of `closure`, indexed by position.
pub fn closure_extensions(m: &Model, closure: &ClosureSet, v: Variant) -> Vec<BitSet> {
    let fr = &m.frame;
    let n = m.size();
    let mut ext = vec![BitSet::new(n); closure.len()];
    for &id in closure.bottom_up() {
        let set = match closure.node(id) {
            ClosureNode::Atom(p) => m.atom_set(p),
            ClosureNode::Top => BitSet::full(n),
            ClosureNode::Bot => BitSet::new(n),
            ClosureNode::Implies(a, b) => implies_set(fr, &ext[*a], &ext[*b]),
            ClosureNode::And(a, b) => {
                let mut x = ext[*a].clone();
                x.intersect_with(&ext[*b]);
                x
            }
            ClosureNode::Or(a, b) => {
                let mut x = ext[*a].clone();
                x.union_with(&ext[*b]);
                x
            }
            ClosureNode::Box(a) => box_set(fr, &ext[*a], v),
            ClosureNode::Dia(a) => dia_set(fr, &ext[*a], v),
        };
        ext[id] = set;
    }
    ext
}

pub(crate) fn implies_set(fr: &Frame, a: &BitSet, b: &BitSet) -> BitSet {
    let n = fr.size();
    // Worlds refuting a→b locally; s forces a→b iff none of them is above s.
    let mut bad = a.clone();
    bad.difference_with(b);
    BitSet::from_indices(n, (0..n).filter(|&s| !fr.up(s).intersects(&bad)))
}

pub(crate) fn box_set(fr: &Frame, a: &BitSet, v: Variant) -> BitSet {
    let n = fr.size();
    let local = BitSet::from_indices(n, (0..n).filter(|&s| fr.rel.successors(s).is_subset(a)));
    match v {
        Variant::BD => local,
        _ => BitSet::from_indices(n, (0..n).filter(|&s| fr.up(s).is_subset(&local))),
    }
}

pub(crate) fn dia_set(fr: &Frame, a: &BitSet, v: Variant) -> BitSet {
    let n = fr.size();
    let local = BitSet::from_indices(n, (0..n).filter(|&s| fr.rel.successors(s).intersects(a)));
    match v {
        Variant::BD | Variant::FS => local,
        Variant::P => BitSet::from_indices(
            n,
            (0..n).filter(|&s| (0..n).any(|t| fr.le(t, s) && local.contains(t))),
        ),
        Variant::W => BitSet::from_indices(n, (0..n).filter(|&s| fr.up(s).is_subset(&local))),
    }
}

pub fn true_in_model(m: &Model, f: &Formula, v: Variant) -> bool {
    extension(m, f, v).count() == m.size()
}

/// A valuation and world at which a formula fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Falsifier {
    pub valuation: Valuation,
    pub world: usize,
}

/// Validity over all valuations of the atoms of `f`. Other atoms cannot
/// affect the truth value of `f`, so they are left unassigned.
pub fn valid_in_frame(frame: &Frame, f: &Formula, v: Variant) -> Result<(), Falsifier> {
    let atoms: Vec<Atom> = f.atoms().into_iter().collect();
    for valuation in crate::enumeration::enumerate_valuations(frame, &atoms) {
        let m = Model {
            frame: frame.clone(),
            valuation,
        };
        let ext = extension(&m, f, v);
        if let Some(world) = (0..m.size()).find(|&s| !ext.contains(s)) {
            return Err(Falsifier {
                valuation: m.valuation,
                world,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeredityViolation {
    pub formula: Formula,
    pub lower: usize,
    pub upper: usize,
}

/// Pairs `s ≤ t` with `s ⊨ A` and `t ⊭ A` (BD), over every formula in `pool`.
pub fn check_heredity<'a>(
    m: &Model,
    pool: impl IntoIterator<Item = &'a Formula>,
) -> Vec<HeredityViolation> {
    let mut out = Vec::new();
    for f in pool {
        let ext = extension(m, f, Variant::BD);
        for (s, t) in m.frame.leq.pairs() {
            if ext.contains(s) && !ext.contains(t) {
                out.push(HeredityViolation {
                    formula: f.clone(),
                    lower: s,
                    upper: t,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    fn model(frame: Frame, val: &[(&str, &[usize])]) -> Model {
        let n = frame.size();
        let valuation = val
            .iter()
            .map(|(p, ws)| (Atom::from(*p), BitSet::from_indices(n, ws.iter().copied())))
            .collect();
        Model::new(frame, valuation).unwrap()
    }

    #[test]
    fn single_world_without_successors() {
        let m = model(Frame::from_generators(1, [], []).unwrap(), &[]);
        for v in Variant::ALL {
            assert!(forces(&m, 0, &f("[]F"), v).unwrap());
            assert!(!forces(&m, 0, &f("<>T"), v).unwrap());
        }
        for cond in FrameCondition::ALL {
            assert!(m.frame().satisfies(cond));
        }
    }

    #[test]
    fn excluded_middle_fails_on_two_chain() {
        let m = model(Frame::from_generators(2, [(0, 1)], []).unwrap(), &[("p", &[1])]);
        assert!(!forces(&m, 0, &f("p | ~p"), Variant::BD).unwrap());
        assert!(!true_in_model(&m, &f("p"), Variant::BD));
        assert!(true_in_model(&m, &f("[]T"), Variant::BD));
        assert!(true_in_model(&m, &f("~<>F"), Variant::BD));
    }

    #[test]
    fn out_of_range_world_is_an_error() {
        let m = model(Frame::from_generators(1, [], []).unwrap(), &[]);
        assert_eq!(
            forces(&m, 3, &f("p"), Variant::BD),
            Err(SemanticsError::WorldOutOfRange { world: 3, size: 1 })
        );
    }

    #[test]
    fn condition_witnesses() {
        let fr = Frame::from_generators(3, [(0, 1)], [(1, 2)]).unwrap();
        assert_eq!(fr.violation(FrameCondition::Downward), Some((0, 1, 2)));
        let fr = Frame::from_generators(3, [(1, 0)], [(1, 2)]).unwrap();
        assert_eq!(fr.violation(FrameCondition::Forward), Some((0, 1, 2)));
        let fr = Frame::from_generators(3, [], [(0, 1), (1, 2)]).unwrap();
        assert_eq!(fr.violation(FrameCondition::Transitive), Some((0, 1, 2)));
        // s R t and u ≤ t with nothing below s reaching u.
        let fr = Frame::from_generators(3, [(2, 1)], [(0, 1)]).unwrap();
        assert_eq!(fr.violation(FrameCondition::Upward), Some((0, 1, 2)));
    }

    #[test]
    fn valuation_must_be_up_closed() {
        let fr = Frame::from_generators(2, [(0, 1)], []).unwrap();
        let val: Valuation = [(Atom::from("p"), BitSet::from_indices(2, [0]))].into();
        assert_eq!(
            Model::new(fr, val),
            Err(SemanticsError::NotUpClosed {
                atom: Atom::from("p"),
                lower: 0,
                upper: 1
            })
        );
    }

    #[test]
    fn validity_examples() {
        let refl = Frame::from_generators(1, [], [(0, 0)]).unwrap();
        assert!(valid_in_frame(&refl, &f("<>p -> p"), Variant::BD).is_ok());
        assert!(valid_in_frame(&refl, &f("[]T"), Variant::BD).is_ok());
        // With the plain clauses this instance holds pointwise on every frame;
        // once [] also looks along ≤ it needs downward confluence.
        let ad = f("[](p | q) -> <>p | []q");
        let non_dc = Frame::from_generators(3, [(0, 1)], [(1, 2)]).unwrap();
        assert!(valid_in_frame(&non_dc, &ad, Variant::BD).is_ok());
        let bad = valid_in_frame(&non_dc, &ad, Variant::FS).unwrap_err();
        let m = Model::new(non_dc, bad.valuation).unwrap();
        assert!(!forces(&m, bad.world, &ad, Variant::FS).unwrap());
    }

    #[test]
    fn heredity_on_single_world_and_non_dc_frame() {
        let m = model(Frame::from_generators(1, [], [(0, 0)]).unwrap(), &[("p", &[0])]);
        assert!(check_heredity(&m, [&f("[]p"), &f("<>p -> p")]).is_empty());
        // 0 ≤ 1, 1 R 2, p at 2: 0 forces []~p vacuously, 1 does not.
        let m = model(Frame::from_generators(3, [(0, 1)], [(1, 2)]).unwrap(), &[("p", &[2])]);
        let pool = [f("<>p"), f("[]~p")];
        let v = check_heredity(&m, &pool);
        assert_eq!(
            v,
            vec![HeredityViolation {
                formula: f("[]~p"),
                lower: 0,
                upper: 1
            }]
        );
    }

    #[test]
    fn extension_matches_pointwise_on_closure() {
        let m = model(
            Frame::from_generators(3, [(0, 1)], [(0, 2), (1, 2)]).unwrap(),
            &[("p", &[2]), ("q", &[1])],
        );
        let a = f("[](p | q) -> <>p | []q & ~<>(p -> q)");
        let c = ClosureSet::new(&a);
        for v in Variant::ALL {
            let ext = closure_extensions(&m, &c, v);
            for (id, member) in c.members().iter().enumerate() {
                assert_eq!(ext[id], extension(&m, member, v));
                for s in 0..3 {
                    assert_eq!(ext[id].contains(s), forces(&m, s, member, v).unwrap());
                }
            }
        }
    }
}
