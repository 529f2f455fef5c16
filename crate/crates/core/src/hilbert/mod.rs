//! The Hilbert system: axiom schemata, substitution, an intuitionistic
//! propositional prover and a checker for line-by-line derivations.

mod ipl;
mod proof;

pub use ipl::{freeze, ipl_valid};
pub use proof::{
    check_proof, parse_proof, render_proof, Justification, Proof, ProofError, ProofLine, ProofReport,
};

use crate::formula::{parse, Atom, Formula};
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// A map from metavariables (atoms) to formulas.
pub type Subst = BTreeMap<Atom, Formula>;

/// Replaces every atom in the domain of `s` simultaneously.
pub fn apply_subst(f: &Formula, s: &Subst) -> Formula {
    match f {
        Formula::Atom(p) => s.get(p).cloned().unwrap_or_else(|| f.clone()),
        Formula::Top | Formula::Bot => f.clone(),
        Formula::Implies(a, b) => Formula::implies(apply_subst(a, s), apply_subst(b, s)),
        Formula::And(a, b) => Formula::and(apply_subst(a, s), apply_subst(b, s)),
        Formula::Or(a, b) => Formula::or(apply_subst(a, s), apply_subst(b, s)),
        Formula::Box(a) => Formula::boxed(apply_subst(a, s)),
        Formula::Dia(a) => Formula::dia(apply_subst(a, s)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    /// ASCII name used in proof files, e.g. `Ad` or `4box`.
    pub name: &'static str,
    pub pattern: Formula,
    pub modal: bool,
}

const MODAL: [(&str, &str); 8] = [
    ("Cbox", "[]p & []q -> [](p & q)"),
    ("Cdia", "<>(p | q) -> <>p | <>q"),
    ("Nbox", "[]T"),
    ("Ndia", "~<>F"),
    ("4box", "[]p -> [][]p"),
    ("4dia", "<><>p -> <>p"),
    ("Ad", "[](p | q) -> <>p | []q"),
    ("Af", "<>(p -> q) -> ([]p -> <>q)"),
];

/// A basis for intuitionistic propositional logic with modus ponens.
const IPL: [(&str, &str); 10] = [
    ("K", "p -> (q -> p)"),
    ("S", "(p -> (q -> r)) -> ((p -> q) -> (p -> r))"),
    ("AndE1", "p & q -> p"),
    ("AndE2", "p & q -> q"),
    ("AndI", "p -> (q -> p & q)"),
    ("OrI1", "p -> p | q"),
    ("OrI2", "q -> p | q"),
    ("OrE", "(p -> r) -> ((q -> r) -> (p | q -> r))"),
    ("Efq", "F -> p"),
    ("Top", "T"),
];

/// The eight modal schemata followed by the ten propositional ones.
pub fn schemas() -> &'static [Schema] {
    static ALL: OnceLock<Vec<Schema>> = OnceLock::new();
    ALL.get_or_init(|| {
        let make = |modal| {
            move |&(name, text): &(&'static str, &str)| Schema {
                name,
                pattern: parse(text).expect("built-in schema parses"),
                modal,
            }
        };
        MODAL.iter().map(make(true)).chain(IPL.iter().map(make(false))).collect()
    })
}

pub fn modal_schemas() -> &'static [Schema] {
    &schemas()[..MODAL.len()]
}

/// Looks a schema up by its ASCII name or its symbolic one (`C□`, `4◇`...).
pub fn schema(name: &str) -> Option<&'static Schema> {
    let ascii = name.replace('□', "box").replace('◇', "dia");
    schemas().iter().find(|s| s.name == ascii)
}

/// The substitution `σ` with `σ(pattern) = f`, if any.
pub fn match_schema(s: &Schema, f: &Formula) -> Option<Subst> {
    let mut out = Subst::new();
    unify(&s.pattern, f, &mut out).then_some(out)
}

fn unify(pattern: &Formula, f: &Formula, out: &mut Subst) -> bool {
    match (pattern, f) {
        (Formula::Atom(p), _) => match out.get(p) {
            Some(bound) => bound == f,
            None => {
                out.insert(p.clone(), f.clone());
                true
            }
        },
        (Formula::Top, Formula::Top) | (Formula::Bot, Formula::Bot) => true,
        (Formula::Implies(a, b), Formula::Implies(c, d))
        | (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d)) => unify(a, c, out) && unify(b, d, out),
        (Formula::Box(a), Formula::Box(c)) | (Formula::Dia(a), Formula::Dia(c)) => unify(a, c, out),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn schema_table() {
        assert_eq!(schemas().len(), 18);
        assert_eq!(modal_schemas().len(), 8);
        assert_eq!(schema("Ad").unwrap().pattern, f("[](p | q) -> <>p | []q"));
        assert_eq!(schema("4◇").unwrap().name, "4dia");
        assert!(schema("Bogus").is_none());
    }

    #[test]
    fn matching() {
        let ad = schema("Ad").unwrap();
        let sigma = match_schema(ad, &f("[]([]p | q) -> <>[]p | []q")).unwrap();
        assert_eq!(sigma[&Atom::from("p")], f("[]p"));
        assert_eq!(sigma[&Atom::from("q")], f("q"));
        assert_eq!(apply_subst(&ad.pattern, &sigma), f("[]([]p | q) -> <>[]p | []q"));

        assert_eq!(match_schema(schema("Nbox").unwrap(), &f("[]T")), Some(Subst::new()));
        assert_eq!(match_schema(ad, &f("[]p -> []p")), None);
        // Repeated metavariables must agree.
        assert_eq!(match_schema(schema("4box").unwrap(), &f("[]p -> [][]q")), None);
    }

    #[test]
    fn substitution_is_simultaneous() {
        let s: Subst = [(Atom::from("p"), f("q")), (Atom::from("q"), f("p"))].into();
        assert_eq!(apply_subst(&f("p -> q"), &s), f("q -> p"));
    }
}
