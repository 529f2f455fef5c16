//! World oracles: the existence queries the saturation procedure needs,
//! answered by a fixed structure of worlds.
//!
//! [`FiniteModelOracle`] answers them from a finite model whose frame is
//! transitive, downward confluent and forward confluent. Every witness the
//! procedure asks for is demanded by a truth condition that holds in that
//! model, so a finite model can stand in for an abstract canonical one.

use crate::bitset::BitSet;
use crate::formula::{ClosureNode, ClosureSet, Formula, SubformulaId};
use crate::semantics::{closure_extensions, FrameCondition, Model, Variant};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("subformula id {id} is outside a closure of {len} formulas")]
    NotInClosure { id: SubformulaId, len: usize },
    #[error("frame is not {condition}: witness triple {triple:?}")]
    FrameCondition {
        condition: FrameCondition,
        triple: (usize, usize, usize),
    },
    #[error("`{formula}` holds at world {lower} but not at {upper} although {lower} <= {upper}")]
    Heredity {
        formula: Formula,
        lower: usize,
        upper: usize,
    },
    #[error("oracle contract violated: {0}")]
    Contract(String),
}

/// What a modal or confluence witness must satisfy, relative to a source
/// world `s`. All of them are `R`-successors of `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessKind<W> {
    /// `t ⊭ B` for the given `B`.
    BoxRefuter(SubformulaId),
    /// `t ⊨ B` for the given `B`.
    DiaSupporter(SubformulaId),
    /// `t ≤ u`, for `u` reached from some `≤`-successor of `s`.
    Dc(W),
    /// `u ≤ t`, for `u` reached from some `≤`-predecessor of `s`.
    Fc(W),
}

pub trait WorldOracle {
    type World: Copy + Ord + Hash + Debug;

    fn closure(&self) -> &Arc<ClosureSet>;

    /// The members of the closure forced at `s`, as a set of positions.
    fn trace(&self, s: Self::World) -> &BitSet;

    fn forces(&self, s: Self::World, id: SubformulaId) -> Result<bool, OracleError> {
        self.check_id(id)?;
        Ok(self.trace(s).contains(id))
    }

    fn leq(&self, s: Self::World, t: Self::World) -> bool;

    fn accessible(&self, s: Self::World, t: Self::World) -> bool;

    fn atom_holds(&self, s: Self::World, atom: &str) -> bool;

    /// Whether every strict `≤`-successor of `s` forces member `id`.
    fn is_maximal(&self, s: Self::World, id: SubformulaId) -> Result<bool, OracleError>;

    /// A world `t` with `s < t`, `t ⊭ B`, and `t` maximal with respect to
    /// `B`, or `None` when `s` is itself maximal with respect to `B`.
    fn maximal_extension(
        &self,
        s: Self::World,
        id: SubformulaId,
    ) -> Result<Option<Self::World>, OracleError>;

    /// An `R`-successor of `s` of the requested kind.
    fn successor_witness(
        &self,
        s: Self::World,
        kind: WitnessKind<Self::World>,
    ) -> Result<Option<Self::World>, OracleError>;

    fn check_id(&self, id: SubformulaId) -> Result<(), OracleError> {
        let len = self.closure().len();
        if id < len {
            Ok(())
        } else {
            Err(OracleError::NotInClosure { id, len })
        }
    }
}

/// A world oracle backed by a finite model. Traces are computed once at
/// construction; queries are read-only.
#[derive(Debug, Clone)]
pub struct FiniteModelOracle {
    model: Model,
    closure: Arc<ClosureSet>,
    traces: Vec<BitSet>,
}

impl FiniteModelOracle {
    /// Rejects models whose frame is not transitive, downward confluent and
    /// forward confluent, and models where some closure member is not
    /// upward persistent.
    pub fn new(model: Model, closure: Arc<ClosureSet>) -> Result<Self, OracleError> {
        let frame = model.frame();
        for condition in [
            FrameCondition::Transitive,
            FrameCondition::Downward,
            FrameCondition::Forward,
        ] {
            if let Some(triple) = frame.violation(condition) {
                return Err(OracleError::FrameCondition { condition, triple });
            }
        }
        let ext = closure_extensions(&model, &closure, Variant::BD);
        for (id, set) in ext.iter().enumerate() {
            for (lower, upper) in frame.leq().pairs() {
                if set.contains(lower) && !set.contains(upper) {
                    return Err(OracleError::Heredity {
                        formula: closure.get(id).clone(),
                        lower,
                        upper,
                    });
                }
            }
        }
        let n = model.size();
        let traces = (0..n)
            .map(|s| BitSet::from_indices(ext.len(), (0..ext.len()).filter(|&id| ext[id].contains(s))))
            .collect();
        Ok(FiniteModelOracle {
            model,
            closure,
            traces,
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn size(&self) -> usize {
        self.model.size()
    }

    fn strict_successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        let frame = self.model.frame();
        frame.up(s).iter().filter(move |&t| frame.lt(s, t))
    }

    fn check_world(&self, s: usize) -> Result<(), OracleError> {
        if s < self.size() {
            Ok(())
        } else {
            Err(OracleError::Contract(format!(
                "world {s} is outside a model of {} worlds",
                self.size()
            )))
        }
    }
}

impl WorldOracle for FiniteModelOracle {
    type World = usize;

    fn closure(&self) -> &Arc<ClosureSet> {
        &self.closure
    }

    fn trace(&self, s: usize) -> &BitSet {
        &self.traces[s]
    }

    fn leq(&self, s: usize, t: usize) -> bool {
        self.model.frame().le(s, t)
    }

    fn accessible(&self, s: usize, t: usize) -> bool {
        self.model.frame().r(s, t)
    }

    fn atom_holds(&self, s: usize, atom: &str) -> bool {
        self.model.holds(atom, s)
    }

    fn is_maximal(&self, s: usize, id: SubformulaId) -> Result<bool, OracleError> {
        self.check_id(id)?;
        self.check_world(s)?;
        Ok(self.strict_successors(s).all(|t| self.traces[t].contains(id)))
    }

    fn maximal_extension(&self, s: usize, id: SubformulaId) -> Result<Option<usize>, OracleError> {
        self.check_id(id)?;
        self.check_world(s)?;
        let frame = self.model.frame();
        let refuters: Vec<usize> = self
            .strict_successors(s)
            .filter(|&t| !self.traces[t].contains(id))
            .collect();
        // Least id among the <-maximal refuters; one exists because < is a
        // strict order on a finite set.
        Ok(refuters
            .iter()
            .copied()
            .find(|&t| !refuters.iter().any(|&u| frame.lt(t, u))))
    }

    fn successor_witness(
        &self,
        s: usize,
        kind: WitnessKind<usize>,
    ) -> Result<Option<usize>, OracleError> {
        self.check_world(s)?;
        let frame = self.model.frame();
        let n = self.size();
        let mut succ = frame.rel().successors(s).iter();
        let found = match kind {
            WitnessKind::BoxRefuter(b) => {
                self.check_id(b)?;
                succ.find(|&t| !self.traces[t].contains(b))
            }
            WitnessKind::DiaSupporter(b) => {
                self.check_id(b)?;
                succ.find(|&t| self.traces[t].contains(b))
            }
            WitnessKind::Dc(u) => {
                self.check_world(u)?;
                if !(0..n).any(|t| frame.le(s, t) && frame.r(t, u)) {
                    return Err(OracleError::Contract(format!(
                        "no world above {s} reaches {u}, so no downward confluence witness is owed"
                    )));
                }
                succ.find(|&v| frame.le(v, u))
            }
            WitnessKind::Fc(u) => {
                self.check_world(u)?;
                if !(0..n).any(|t| frame.le(t, s) && frame.r(t, u)) {
                    return Err(OracleError::Contract(format!(
                        "no world below {s} reaches {u}, so no forward confluence witness is owed"
                    )));
                }
                succ.find(|&v| frame.le(u, v))
            }
        };
        Ok(found)
    }
}

/// For `R`-related worlds `s R t`, the first member violating the
/// accessibility conditions between their traces: `□B` at `s` without `B`
/// at `t`, or `B` at `t` without `◇B` at `s`.
pub fn accessibility_violation<O: WorldOracle>(
    oracle: &O,
    s: O::World,
    t: O::World,
) -> Option<SubformulaId> {
    let closure = oracle.closure();
    let (ts, tt) = (oracle.trace(s), oracle.trace(t));
    (0..closure.len()).find(|&id| match *closure.node(id) {
        ClosureNode::Box(b) => ts.contains(id) && !tt.contains(b),
        ClosureNode::Dia(b) => tt.contains(b) && !ts.contains(id),
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::semantics::{Frame, Valuation};
    use crate::BitSet;

    fn model(n: usize, le: &[(usize, usize)], r: &[(usize, usize)], val: &[(&str, &[usize])]) -> Model {
        let frame = Frame::from_generators(n, le.iter().copied(), r.iter().copied()).unwrap();
        let valuation: Valuation = val
            .iter()
            .map(|(p, ws)| (Arc::from(*p), BitSet::from_indices(n, ws.iter().copied())))
            .collect();
        Model::new(frame, valuation).unwrap()
    }

    fn oracle(m: Model, f: &str) -> FiniteModelOracle {
        FiniteModelOracle::new(m, Arc::new(ClosureSet::new(&parse(f).unwrap()))).unwrap()
    }

    fn id(o: &FiniteModelOracle, f: &str) -> SubformulaId {
        o.closure().position(&parse(f).unwrap()).unwrap()
    }

    #[test]
    fn trace_of_single_world() {
        let o = oracle(model(1, &[], &[], &[]), "[]p -> <>p");
        let expected = BitSet::from_indices(o.closure().len(), [id(&o, "[]p")]);
        assert_eq!(o.trace(0), &expected);

        let o = oracle(model(1, &[], &[], &[("p", &[0])]), "p");
        assert_eq!(o.trace(0), &BitSet::from_indices(1, [0]));
    }

    #[test]
    fn maximal_extension_on_chains() {
        let o = oracle(model(2, &[(0, 1)], &[], &[("q", &[0, 1])]), "p -> q");
        let b = id(&o, "p");
        assert_eq!(o.maximal_extension(0, b).unwrap(), Some(1));
        assert!(!o.is_maximal(0, b).unwrap());
        assert!(o.is_maximal(1, b).unwrap());

        // Over 0 < 1 < 2 with only 2 forcing p, the top refuter is 1.
        let o = oracle(model(3, &[(0, 1), (1, 2)], &[], &[("p", &[2])]), "p");
        assert_eq!(o.maximal_extension(0, 0).unwrap(), Some(1));

        let o = oracle(model(1, &[], &[], &[]), "p -> q");
        for b in 0..o.closure().len() {
            assert_eq!(o.maximal_extension(0, b).unwrap(), None);
        }
        assert!(matches!(
            o.maximal_extension(0, 99),
            Err(OracleError::NotInClosure { id: 99, .. })
        ));
    }

    #[test]
    fn maximal_implication_refuter_splits() {
        // 0 < 1 < 2; p holds at 1 and 2, q only at 2.
        let o = oracle(model(3, &[(0, 1), (1, 2)], &[], &[("p", &[1, 2]), ("q", &[2])]), "p -> q");
        let imp = id(&o, "p -> q");
        let t = o.maximal_extension(0, imp).unwrap().unwrap();
        assert_eq!(t, 1);
        assert!(o.trace(t).contains(id(&o, "p")));
        assert!(!o.trace(t).contains(id(&o, "q")));
    }

    #[test]
    fn modal_witnesses() {
        let o = oracle(model(1, &[], &[], &[]), "[]p");
        assert_eq!(o.successor_witness(0, WitnessKind::BoxRefuter(id(&o, "p"))).unwrap(), None);

        let o = oracle(model(2, &[], &[(0, 1)], &[("p", &[1])]), "<>p");
        assert_eq!(o.successor_witness(0, WitnessKind::DiaSupporter(id(&o, "p"))).unwrap(), Some(1));
        assert_eq!(o.successor_witness(0, WitnessKind::BoxRefuter(id(&o, "p"))).unwrap(), None);
    }

    #[test]
    fn confluence_witnesses() {
        // 0 ≤ 1, 1 R 3, 0 R 2, 2 ≤ 3.
        let o = oracle(model(4, &[(0, 1), (2, 3)], &[(0, 2), (1, 3)], &[]), "p");
        assert_eq!(o.successor_witness(0, WitnessKind::Dc(3)).unwrap(), Some(2));
        assert_eq!(o.successor_witness(1, WitnessKind::Fc(2)).unwrap(), Some(3));
        assert!(matches!(
            o.successor_witness(0, WitnessKind::Dc(0)),
            Err(OracleError::Contract(_))
        ));
    }

    #[test]
    fn rejects_bad_frames() {
        let c = Arc::new(ClosureSet::new(&parse("p").unwrap()));
        let m = model(3, &[], &[(0, 1), (1, 2)], &[]);
        assert!(matches!(
            FiniteModelOracle::new(m, c.clone()),
            Err(OracleError::FrameCondition {
                condition: FrameCondition::Transitive,
                ..
            })
        ));
        let m = model(3, &[(0, 1)], &[(1, 2)], &[]);
        assert!(matches!(
            FiniteModelOracle::new(m, c),
            Err(OracleError::FrameCondition {
                condition: FrameCondition::Downward,
                ..
            })
        ));
    }

    #[test]
    fn witnesses_respect_trace_accessibility() {
        let o = oracle(
            model(3, &[(0, 1)], &[(0, 2), (1, 2)], &[("p", &[2])]),
            "[]p & <>p -> <>(p | q)",
        );
        for s in 0..3 {
            for t in 0..3 {
                if o.accessible(s, t) {
                    assert_eq!(accessibility_violation(&o, s, t), None);
                }
            }
        }
    }
}
