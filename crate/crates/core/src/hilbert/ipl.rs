//! Intuitionistic propositional validity by backward search in the
//! contraction-free sequent calculus G4ip.

use crate::formula::{Atom, Formula};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Replaces every maximal subformula headed by `□` or `◇` with a fresh
/// atom, equal subformulas sharing one atom. Fresh names start with `#`,
/// which the parser never produces.
pub fn freeze(f: &Formula) -> Formula {
    freeze_all(std::slice::from_ref(f)).pop().expect("one input")
}

/// [`freeze`] over several formulas with one shared table.
pub(crate) fn freeze_all(fs: &[Formula]) -> Vec<Formula> {
    let mut table = BTreeMap::new();
    fs.iter().map(|f| freeze_with(f, &mut table)).collect()
}

fn freeze_with(f: &Formula, table: &mut BTreeMap<Formula, Atom>) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Top | Formula::Bot => f.clone(),
        Formula::Box(_) | Formula::Dia(_) => {
            let n = table.len();
            Formula::Atom(table.entry(f.clone()).or_insert_with(|| Atom::from(format!("#{n}"))).clone())
        }
        Formula::Implies(a, b) => Formula::implies(freeze_with(a, table), freeze_with(b, table)),
        Formula::And(a, b) => Formula::and(freeze_with(a, table), freeze_with(b, table)),
        Formula::Or(a, b) => Formula::or(freeze_with(a, table), freeze_with(b, table)),
    }
}

/// Whether `f` is a theorem of intuitionistic propositional logic, with
/// modal subformulas treated as opaque atoms.
pub fn ipl_valid(f: &Formula) -> bool {
    provable(&freeze(f))
}

/// Validity of a formula whose modal subformulas are already frozen.
pub(crate) fn provable(f: &Formula) -> bool {
    prove(BTreeSet::new(), f.clone(), &mut HashMap::new())
}

type Memo = HashMap<(BTreeSet<Formula>, Formula), bool>;

fn prove(gamma: BTreeSet<Formula>, goal: Formula, memo: &mut Memo) -> bool {
    let key = (gamma, goal);
    if let Some(&r) = memo.get(&key) {
        return r;
    }
    let r = search(&key.0, &key.1, memo);
    memo.insert(key, r);
    r
}

fn with(gamma: &BTreeSet<Formula>, remove: &Formula, add: &[Formula]) -> BTreeSet<Formula> {
    let mut g = gamma.clone();
    g.remove(remove);
    g.extend(add.iter().cloned());
    g
}

fn search(gamma: &BTreeSet<Formula>, goal: &Formula, memo: &mut Memo) -> bool {
    if *goal == Formula::Top || gamma.contains(&Formula::Bot) || gamma.contains(goal) {
        return true;
    }
    // Invertible left rules.
    for h in gamma {
        match h {
            Formula::Top => return prove(with(gamma, h, &[]), goal.clone(), memo),
            Formula::And(a, b) => {
                return prove(with(gamma, h, &[(**a).clone(), (**b).clone()]), goal.clone(), memo)
            }
            Formula::Or(a, b) => {
                return prove(with(gamma, h, &[(**a).clone()]), goal.clone(), memo)
                    && prove(with(gamma, h, &[(**b).clone()]), goal.clone(), memo)
            }
            Formula::Implies(a, d) => {
                let d = (**d).clone();
                let next = match &**a {
                    Formula::Atom(_) if gamma.contains(a) => Some(vec![d]),
                    Formula::Top => Some(vec![d]),
                    Formula::Bot => Some(vec![]),
                    Formula::And(x, y) => Some(vec![Formula::implies(
                        (**x).clone(),
                        Formula::implies((**y).clone(), d),
                    )]),
                    Formula::Or(x, y) => Some(vec![
                        Formula::implies((**x).clone(), d.clone()),
                        Formula::implies((**y).clone(), d),
                    ]),
                    _ => None,
                };
                if let Some(add) = next {
                    return prove(with(gamma, h, &add), goal.clone(), memo);
                }
            }
            _ => {}
        }
    }
    // Invertible right rules.
    match goal {
        Formula::And(a, b) => {
            return prove(gamma.clone(), (**a).clone(), memo) && prove(gamma.clone(), (**b).clone(), memo)
        }
        Formula::Implies(a, b) => return prove(with(gamma, a, &[(**a).clone()]), (**b).clone(), memo),
        _ => {}
    }
    // Non-invertible choices.
    if let Formula::Or(a, b) = goal {
        if prove(gamma.clone(), (**a).clone(), memo) || prove(gamma.clone(), (**b).clone(), memo) {
            return true;
        }
    }
    for h in gamma {
        if let Formula::Implies(ab, d) = h {
            if let Formula::Implies(_, b) = &**ab {
                let left = with(gamma, h, &[Formula::implies((**b).clone(), (**d).clone())]);
                if prove(left, (**ab).clone(), memo) && prove(with(gamma, h, &[(**d).clone()]), goal.clone(), memo)
                {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn valid(s: &str) -> bool {
        ipl_valid(&parse(s).unwrap())
    }

    #[test]
    fn classic_examples() {
        assert!(valid("p -> p"));
        assert!(valid("~~(p | ~p)"));
        assert!(valid("(p -> q) -> (~q -> ~p)"));
        assert!(valid("p & q -> q & p"));
        assert!(valid("(p | q) & ~p -> q"));
        assert!(valid("~~~p -> ~p"));
        assert!(!valid("p | ~p"));
        assert!(!valid("((p -> q) -> p) -> p"));
        assert!(!valid("~~p -> p"));
        assert!(!valid("(~q -> ~p) -> (p -> q)"));
        assert!(!valid("(p -> q) | (q -> p)"));
    }

    #[test]
    fn frozen_modal_steps() {
        assert!(valid("<>p | []q -> ((<>p -> []q) -> []q)"));
        assert!(valid("[]p -> []p"));
        assert!(!valid("[]p -> []q"));
        assert!(!valid("[]p -> <>p"));
        assert_eq!(freeze(&parse("[]p & ([]p -> <>q)").unwrap()).to_string(), "#0 & (#0 -> #1)");
    }
}
