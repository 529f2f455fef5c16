//! The modal language: abstract syntax, concrete syntax, the symbol-length
//! measure, and subformula closures with their label poset.
//!
//! Formulas are immutable trees with shared (`Arc`) children, so cloning is
//! cheap and values can be handed to other threads freely. Structural
//! equality is the notion of identity everywhere; sets of formulas are
//! represented as bitsets over the positions of a [`ClosureSet`].

mod closure;
mod parse;
mod render;

pub use closure::{ClosureNode, ClosureSet, Label, LabelError, LabelPoset, SubformulaId};
pub use parse::{parse, ParseError};
pub use render::render;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Atom name, drawn from `[a-z][a-z0-9_]*`.
pub type Atom = Arc<str>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Top,
    Bot,
    Implies(Arc<Formula>, Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
    Dia(Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Arc::new(lhs), Arc::new(rhs))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::And(Arc::new(lhs), Arc::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Or(Arc::new(lhs), Arc::new(rhs))
    }

    pub fn boxed(body: Formula) -> Formula {
        Formula::Box(Arc::new(body))
    }

    pub fn dia(body: Formula) -> Formula {
        Formula::Dia(Arc::new(body))
    }

    /// `¬A`, which is notation for `A → ⊥`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(body: Formula) -> Formula {
        Formula::implies(body, Formula::Bot)
    }

    /// Number of symbols of the fully parenthesised word: binary connectives
    /// contribute their operator and a pair of parentheses.
    pub fn length(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 1,
            Formula::Box(a) | Formula::Dia(a) => 1 + a.length(),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.length() + b.length() + 3
            }
        }
    }

    /// Connective nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 0,
            Formula::Box(a) | Formula::Dia(a) => 1 + a.depth(),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Top | Formula::Bot => {}
            Formula::Box(a) | Formula::Dia(a) => a.collect_atoms(out),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => vec![],
            Formula::Box(a) | Formula::Dia(a) => vec![a],
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => vec![a, b],
        }
    }

    pub fn is_modal_free(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => true,
            Formula::Box(_) | Formula::Dia(_) => false,
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.is_modal_free() && b.is_modal_free()
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({})", render(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn length_counts_parenthesised_symbols() {
        assert_eq!(p().length(), 1);
        assert_eq!(Formula::implies(p(), Formula::atom("q")).length(), 5);
        assert_eq!(Formula::boxed(p()).length(), 2);
        let a = Formula::implies(Formula::boxed(p()), Formula::dia(p()));
        assert_eq!(a.length(), 7);
    }

    #[test]
    fn depth_and_atoms() {
        let a = Formula::and(Formula::boxed(p()), Formula::or(Formula::atom("q"), Formula::Top));
        assert_eq!(a.depth(), 2);
        let atoms: Vec<String> = a.atoms().iter().map(|s| s.to_string()).collect();
        assert_eq!(atoms, vec!["p", "q"]);
        assert!(!a.is_modal_free());
        assert!(Formula::not(p()).is_modal_free());
    }
}
