#![allow(dead_code)]

use ik4::enumeration::{enumerate_models, FrameFilter};
use ik4::formula::{Atom, Formula};
use ik4::semantics::Model;
use proptest::prelude::*;
use rand::Rng;

pub fn atoms(names: &[&str]) -> Vec<Atom> {
    names.iter().map(|n| Atom::from(*n)).collect()
}

/// Formulas over `atoms` (plus ⊤ and ⊥) of depth at most `depth`.
pub fn formula(atoms: Vec<Atom>, depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => proptest::sample::select(atoms).prop_map(Formula::Atom),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bot),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            inner.clone().prop_map(Formula::boxed),
            inner.prop_map(Formula::dia),
        ]
    })
}

/// A random formula of depth at most `depth`; each level stops early with
/// probability 1/4.
pub fn random_formula(rng: &mut impl Rng, atoms: &[Atom], depth: usize, modal: bool) -> Formula {
    if depth == 0 || rng.gen_range(0..4) == 0 {
        return match rng.gen_range(0..6) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ => Formula::Atom(atoms[rng.gen_range(0..atoms.len())].clone()),
        };
    }
    let ops = if modal { 5 } else { 3 };
    let op = rng.gen_range(0..ops);
    let a = random_formula(rng, atoms, depth - 1, modal);
    match op {
        3 => return Formula::boxed(a),
        4 => return Formula::dia(a),
        _ => {}
    }
    let b = random_formula(rng, atoms, depth - 1, modal);
    match op {
        0 => Formula::implies(a, b),
        1 => Formula::and(a, b),
        _ => Formula::or(a, b),
    }
}

/// Every model over a transitive, downward and forward confluent frame with
/// `1..=max_worlds` worlds.
pub fn ik4_models(max_worlds: usize, atoms: &[Atom]) -> Vec<Model> {
    (1..=max_worlds)
        .flat_map(|n| enumerate_models(n, FrameFilter::ik4(), atoms).collect::<Vec<_>>())
        .collect()
}

/// Every formula that differs from `f` by one local edit: an atom renamed
/// within `p`, `q`, `r`, a binary connective exchanged, a modality flipped
/// or dropped, or the two sides of a connective swapped.
pub fn point_mutations(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    let mut push = |g: Formula| {
        if g != *f && !out.contains(&g) {
            out.push(g);
        }
    };
    match f {
        Formula::Atom(_) => {
            for q in ["p", "q", "r"] {
                push(Formula::atom(q));
            }
            push(Formula::Top);
        }
        Formula::Top => push(Formula::Bot),
        Formula::Bot => push(Formula::Top),
        Formula::Box(a) | Formula::Dia(a) => {
            push(if matches!(f, Formula::Box(_)) { Formula::dia((**a).clone()) } else { Formula::boxed((**a).clone()) });
            push((**a).clone());
            let wrap = |b: Formula| if matches!(f, Formula::Box(_)) { Formula::boxed(b) } else { Formula::dia(b) };
            for m in point_mutations(a) {
                push(wrap(m));
            }
        }
        Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
            let (a, b) = ((**a).clone(), (**b).clone());
            let ops: [fn(Formula, Formula) -> Formula; 3] = [Formula::implies, Formula::and, Formula::or];
            let own = match f {
                Formula::Implies(..) => 0,
                Formula::And(..) => 1,
                _ => 2,
            };
            for (k, op) in ops.iter().enumerate() {
                if k != own {
                    push(op(a.clone(), b.clone()));
                }
            }
            push(ops[own](b.clone(), a.clone()));
            for m in point_mutations(&a) {
                push(ops[own](m, b.clone()));
            }
            for m in point_mutations(&b) {
                push(ops[own](a.clone(), m));
            }
        }
    }
    out
}

/// `count` proofs, each with one line's formula replaced by a point
/// mutation, visiting lines round-robin so every line is hit.
pub fn mutated_proofs(p: &ik4::hilbert::Proof, count: usize) -> Vec<(usize, ik4::hilbert::Proof)> {
    let per_line: Vec<Vec<Formula>> = p.lines.iter().map(|l| point_mutations(&l.formula)).collect();
    let mut out = Vec::new();
    let mut round = 0;
    while out.len() < count {
        let before = out.len();
        for (k, ms) in per_line.iter().enumerate() {
            if let Some(m) = ms.get(round) {
                if out.len() < count {
                    let mut q = p.clone();
                    q.lines[k].formula = m.clone();
                    out.push((k + 1, q));
                }
            }
        }
        if out.len() == before {
            break;
        }
        round += 1;
    }
    out
}

/// Whether some model makes every `HYP` line of `p` true at all worlds while
/// another line fails somewhere. The rules of the checker preserve truth at
/// all worlds of a fixed model, so a sound checker must reject such a proof
/// (as long as it uses no `SUBST` step, which only preserves frame validity).
pub fn semantically_broken(p: &ik4::hilbert::Proof, models: &[Model]) -> bool {
    use ik4::hilbert::Justification;
    use ik4::semantics::{true_in_model, Variant};
    assert!(p.lines.iter().all(|l| !matches!(l.justification, Justification::Subst(..))));
    models.iter().any(|m| {
        let (hyps, rest): (Vec<_>, Vec<_>) = p.lines.iter().partition(|l| l.justification == Justification::Hyp);
        hyps.iter().all(|l| true_in_model(m, &l.formula, Variant::BD))
            && rest.iter().any(|l| !true_in_model(m, &l.formula, Variant::BD))
    })
}

/// A mutated proof with the (1-based) line that was changed.
pub type Mutant = (usize, ik4::hilbert::Proof);

/// The first `count` point mutations, taken round-robin over the lines of
/// `p`, that [`semantically_broken`] confirms are wrong, together with
/// every skipped mutation.
pub fn broken_mutations(
    p: &ik4::hilbert::Proof,
    models: &[Model],
    count: usize,
) -> (Vec<Mutant>, Vec<Mutant>) {
    let (mut broken, mut skipped) = (Vec::new(), Vec::new());
    let total: usize = p.lines.iter().map(|l| point_mutations(&l.formula).len()).sum();
    for (line, q) in mutated_proofs(p, total) {
        if broken.len() == count {
            break;
        }
        if semantically_broken(&q, models) {
            broken.push((line, q));
        } else {
            skipped.push((line, q));
        }
    }
    assert_eq!(broken.len(), count, "not enough broken mutations");
    (broken, skipped)
}

/// The label poset of `A`.
pub fn label_poset(a: &str) -> std::sync::Arc<ik4::formula::LabelPoset> {
    use ik4::formula::{ClosureSet, LabelPoset};
    use std::sync::Arc;
    Arc::new(LabelPoset::new(Arc::new(ClosureSet::new(&ik4::parse(a).unwrap()))))
}

/// Every monotone labelling of every parent array `parent[i] < i` with
/// `1..=max_nodes` nodes. Isomorphic trees appear several times.
pub fn all_trees<P: ik4::ltree::FinitePoset>(
    poset: &std::sync::Arc<P>,
    max_nodes: usize,
) -> Vec<ik4::ltree::LabelledTree<P>> {
    fn shapes(n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for i in 1..n {
            out = out
                .into_iter()
                .flat_map(|s| (0..i).map(move |p| [s.clone(), vec![p]].concat()))
                .collect();
        }
        out
    }
    let labels = poset.elements();
    let mut out = Vec::new();
    for n in 1..=max_nodes {
        for parents in shapes(n) {
            let mut stack: Vec<Vec<P::Label>> = vec![vec![]];
            while let Some(partial) = stack.pop() {
                let i = partial.len();
                if i == n {
                    let entries = partial
                        .into_iter()
                        .enumerate()
                        .map(|(k, l)| (k, (k > 0).then(|| parents[k - 1]), l));
                    out.push(ik4::ltree::LabelledTree::from_nodes(poset.clone(), entries).unwrap());
                    continue;
                }
                for l in &labels {
                    if i == 0 || poset.leq(&partial[parents[i - 1]], l) {
                        let mut next = partial.clone();
                        next.push(l.clone());
                        stack.push(next);
                    }
                }
            }
        }
    }
    out
}

/// A random monotone tree with `1..=max_nodes` nodes.
pub fn random_tree<P: ik4::ltree::FinitePoset>(
    rng: &mut impl Rng,
    poset: &std::sync::Arc<P>,
    max_nodes: usize,
) -> ik4::ltree::LabelledTree<P> {
    let labels = poset.elements();
    let root = labels[rng.gen_range(0..labels.len())].clone();
    let mut t = ik4::ltree::LabelledTree::leaf(poset.clone(), root).unwrap();
    for _ in 1..rng.gen_range(1..=max_nodes) {
        let ids: Vec<usize> = t.node_ids().collect();
        let parent = ids[rng.gen_range(0..ids.len())];
        let above: Vec<&P::Label> = labels.iter().filter(|l| poset.leq(t.label(parent), l)).collect();
        let l = above[rng.gen_range(0..above.len())].clone();
        t.add_child(parent, l).unwrap();
    }
    t
}
