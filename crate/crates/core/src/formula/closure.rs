//! Subformula closures and the label poset built on them.

use super::{Atom, Formula};
use crate::bitset::BitSet;
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

/// Position of a formula inside its [`ClosureSet`].
pub type SubformulaId = usize;

/// A closure member with its immediate subformulas resolved to positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureNode {
    Atom(Atom),
    Top,
    Bot,
    Implies(SubformulaId, SubformulaId),
    And(SubformulaId, SubformulaId),
    Or(SubformulaId, SubformulaId),
    Box(SubformulaId),
    Dia(SubformulaId),
}

/// The least set of formulas containing the seed and closed under taking
/// immediate subformulas. Members are stored in discovery order (preorder,
/// left to right), so the seed is always at position 0.
#[derive(Debug, Clone)]
pub struct ClosureSet {
    members: Vec<Formula>,
    nodes: Vec<ClosureNode>,
    index: HashMap<Formula, SubformulaId>,
    bottom_up: Vec<SubformulaId>,
}

impl ClosureSet {
    pub fn new(seed: &Formula) -> Self {
        let mut set = ClosureSet {
            members: Vec::new(),
            nodes: Vec::new(),
            index: HashMap::new(),
            bottom_up: Vec::new(),
        };
        set.visit(seed);
        let mut order: Vec<SubformulaId> = (0..set.members.len()).collect();
        order.sort_by_key(|&i| (set.members[i].length(), i));
        set.bottom_up = order;
        set
    }

    fn visit(&mut self, f: &Formula) -> SubformulaId {
        if let Some(&id) = self.index.get(f) {
            return id;
        }
        let id = self.members.len();
        self.members.push(f.clone());
        self.index.insert(f.clone(), id);
        // Placeholder until the children have positions.
        self.nodes.push(ClosureNode::Top);
        let node = match f {
            Formula::Atom(a) => ClosureNode::Atom(a.clone()),
            Formula::Top => ClosureNode::Top,
            Formula::Bot => ClosureNode::Bot,
            Formula::Implies(a, b) => {
                let (a, b) = (self.visit(a), self.visit(b));
                ClosureNode::Implies(a, b)
            }
            Formula::And(a, b) => {
                let (a, b) = (self.visit(a), self.visit(b));
                ClosureNode::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.visit(a), self.visit(b));
                ClosureNode::Or(a, b)
            }
            Formula::Box(a) => ClosureNode::Box(self.visit(a)),
            Formula::Dia(a) => ClosureNode::Dia(self.visit(a)),
        };
        self.nodes[id] = node;
        id
    }

    pub fn seed(&self) -> &Formula {
        &self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members(&self) -> &[Formula] {
        &self.members
    }

    pub fn get(&self, id: SubformulaId) -> &Formula {
        &self.members[id]
    }

    pub fn node(&self, id: SubformulaId) -> &ClosureNode {
        &self.nodes[id]
    }

    pub fn position(&self, f: &Formula) -> Option<SubformulaId> {
        self.index.get(f).copied()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }

    /// Positions ordered so that every member comes after its subformulas.
    pub fn bottom_up(&self) -> &[SubformulaId] {
        &self.bottom_up
    }

    /// Renders a subset of the closure as `{f1, f2, ...}`.
    pub fn describe(&self, set: &BitSet) -> String {
        let items: Vec<String> = set.iter().map(|i| self.members[i].to_string()).collect();
        format!("{{{}}}", items.join(", "))
    }
}

/// An element of the label poset: the sentinel below everything, or a
/// subset of the closure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Root,
    Set(BitSet),
}

impl Label {
    pub fn is_root(&self) -> bool {
        matches!(self, Label::Root)
    }

    pub fn as_set(&self) -> Option<&BitSet> {
        match self {
            Label::Root => None,
            Label::Set(s) => Some(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("label has width {found} but the closure has {expected} members")]
    WidthMismatch { expected: usize, found: usize },
}

/// Labels ordered by inclusion, with [`Label::Root`] at the bottom.
#[derive(Debug, Clone)]
pub struct LabelPoset {
    closure: Arc<ClosureSet>,
}

impl LabelPoset {
    pub fn new(closure: Arc<ClosureSet>) -> Self {
        LabelPoset { closure }
    }

    pub fn closure(&self) -> &Arc<ClosureSet> {
        &self.closure
    }

    pub fn width(&self) -> usize {
        self.closure.len()
    }

    /// `1 + 2^width`, or `None` if that overflows.
    pub fn cardinality(&self) -> Option<u128> {
        1u128.checked_shl(self.width() as u32).map(|n| n + 1)
    }

    fn check(&self, l: &Label) -> Result<(), LabelError> {
        match l {
            Label::Set(s) if s.len() != self.width() => Err(LabelError::WidthMismatch {
                expected: self.width(),
                found: s.len(),
            }),
            _ => Ok(()),
        }
    }

    pub fn label_leq(&self, a: &Label, b: &Label) -> Result<bool, LabelError> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (Label::Root, _) => true,
            (Label::Set(_), Label::Root) => false,
            (Label::Set(x), Label::Set(y)) => x.is_subset(y),
        })
    }

    pub fn label_lt(&self, a: &Label, b: &Label) -> Result<bool, LabelError> {
        Ok(self.label_leq(a, b)? && !self.label_leq(b, a)?)
    }

    /// Every label of the poset: the sentinel, then all subsets in mask
    /// order. Only sensible for small closures.
    pub fn labels(&self) -> Vec<Label> {
        let w = self.width();
        assert!(w < 20, "label universe too large to list");
        let mut out = vec![Label::Root];
        out.extend((0..1u64 << w).map(|m| Label::Set(BitSet::from_mask(w, m))));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn closure_of(text: &str) -> ClosureSet {
        ClosureSet::new(&parse(text).unwrap())
    }

    #[test]
    fn closure_examples() {
        let c = closure_of("p");
        assert_eq!(c.len(), 1);

        let c = closure_of("p -> q");
        assert_eq!(c.len(), 3);
        assert!(c.contains(&parse("p").unwrap()));
        assert!(c.contains(&parse("q").unwrap()));

        let c = closure_of("[]p -> <>p");
        let mut got: Vec<String> = c.members().iter().map(|f| f.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["<>p", "[]p", "[]p -> <>p", "p"]);
        assert_eq!(c.seed().to_string(), "[]p -> <>p");
    }

    #[test]
    fn shared_subformulas_collapse() {
        let c = closure_of("(p & p) | (p & p)");
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn bottom_up_puts_children_first() {
        let c = closure_of("[](p | q) -> <>p | []q");
        let mut seen = vec![false; c.len()];
        for &id in c.bottom_up() {
            let kids: Vec<SubformulaId> = match c.node(id) {
                ClosureNode::Implies(a, b) | ClosureNode::And(a, b) | ClosureNode::Or(a, b) => {
                    vec![*a, *b]
                }
                ClosureNode::Box(a) | ClosureNode::Dia(a) => vec![*a],
                _ => vec![],
            };
            assert!(kids.iter().all(|k| seen[*k]));
            seen[id] = true;
        }
    }

    #[test]
    fn label_order_examples() {
        let c = Arc::new(closure_of("p & q"));
        let poset = LabelPoset::new(c.clone());
        let p = c.position(&parse("p").unwrap()).unwrap();
        let q = c.position(&parse("q").unwrap()).unwrap();
        let set = |xs: &[usize]| Label::Set(BitSet::from_indices(3, xs.iter().copied()));
        assert!(poset.label_leq(&Label::Root, &set(&[p])).unwrap());
        assert!(poset.label_leq(&set(&[p]), &set(&[p, q])).unwrap());
        assert!(!poset.label_leq(&set(&[p]), &set(&[q])).unwrap());
        assert!(!poset.label_leq(&set(&[]), &Label::Root).unwrap());
        assert!(poset.label_lt(&Label::Root, &set(&[])).unwrap());
        assert!(!poset.label_lt(&set(&[p]), &set(&[p])).unwrap());
        let wide = Label::Set(BitSet::new(5));
        assert_eq!(
            poset.label_leq(&wide, &Label::Root),
            Err(LabelError::WidthMismatch { expected: 3, found: 5 })
        );
    }

    #[test]
    fn label_universe_size() {
        let poset = LabelPoset::new(Arc::new(closure_of("p -> q")));
        assert_eq!(poset.labels().len() as u128, poset.cardinality().unwrap());
        assert_eq!(poset.cardinality(), Some(9));
    }
}
