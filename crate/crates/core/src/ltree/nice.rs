use super::{FinitePoset, LabelledTree, NodeId};
use num_bigint::BigUint;
use std::sync::Arc;

/// Exponents above this are refused rather than materialised.
const MAX_EXPONENT: u64 = 1 << 24;

fn pow2(e: &BigUint) -> Option<BigUint> {
    let e = u64::try_from(e).ok().filter(|e| *e <= MAX_EXPONENT)?;
    Some(BigUint::from(1u8) << e)
}

/// The recurrence `nlt(0) = c`, `nlt(h) = c * 2^nlt(h-1)` for `c = card_p`.
/// It bounds the number of nice trees of height at most `h` up to
/// isomorphism; it overcounts because children must carry labels strictly
/// above their parent's. `None` when the value is too large to hold.
pub fn nlt_bound(h: usize, card_p: u64) -> Option<BigUint> {
    let card = BigUint::from(card_p);
    let mut acc = card.clone();
    for _ in 0..h {
        acc = &card * pow2(&acc)?;
    }
    Some(acc)
}

/// Number of nice trees of height at most `max_height`, up to isomorphism.
/// A nice tree is its root label plus a set of pairwise non-isomorphic
/// nice children rooted strictly higher, so the count is exact. `None`
/// when the value is too large to hold.
pub fn count_nice_trees<P: FinitePoset>(poset: &P, max_height: usize) -> Option<BigUint> {
    let labels = poset.elements();
    let mut counts = vec![BigUint::from(1u8); labels.len()];
    for _ in 0..max_height {
        let mut next = Vec::with_capacity(labels.len());
        for l in &labels {
            let kids: BigUint = labels
                .iter()
                .zip(&counts)
                .filter(|(m, _)| poset.lt(l, m))
                .map(|(_, c)| c.clone())
                .sum();
            next.push(pow2(&kids)?);
        }
        counts = next;
    }
    Some(counts.into_iter().sum())
}

#[derive(Debug)]
struct Shape<L> {
    label: L,
    children: Vec<Arc<Shape<L>>>,
}

/// One representative per isomorphism class of nice trees of height at
/// most `max_height`, grouped by root label in poset order. Panics if there
/// are more than a million of them.
pub fn enumerate_nice_trees<P: FinitePoset>(poset: Arc<P>, max_height: usize) -> Vec<LabelledTree<P>> {
    let total = count_nice_trees(&*poset, max_height).expect("count fits");
    assert!(total <= BigUint::from(1_000_000u32), "{total} nice trees is too many to list");
    let labels = poset.elements();
    let mut shapes: Vec<Vec<Arc<Shape<P::Label>>>> = labels
        .iter()
        .map(|l| {
            vec![Arc::new(Shape {
                label: l.clone(),
                children: vec![],
            })]
        })
        .collect();
    for _ in 0..max_height {
        let mut next = Vec::with_capacity(labels.len());
        for l in &labels {
            let pool: Vec<Arc<Shape<P::Label>>> = labels
                .iter()
                .zip(&shapes)
                .filter(|(m, _)| poset.lt(l, m))
                .flat_map(|(_, s)| s.iter().cloned())
                .collect();
            let mut here = Vec::with_capacity(1 << pool.len());
            for mask in 0u64..1 << pool.len() {
                let children = (0..pool.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| pool[i].clone())
                    .collect();
                here.push(Arc::new(Shape {
                    label: l.clone(),
                    children,
                }));
            }
            next.push(here);
        }
        shapes = next;
    }
    shapes
        .into_iter()
        .flatten()
        .map(|s| to_tree(poset.clone(), &s))
        .collect()
}

fn to_tree<P: FinitePoset>(poset: Arc<P>, shape: &Shape<P::Label>) -> LabelledTree<P> {
    let mut entries = Vec::new();
    let mut stack: Vec<(&Shape<P::Label>, Option<NodeId>)> = vec![(shape, None)];
    while let Some((s, parent)) = stack.pop() {
        let id = entries.len();
        entries.push((id, parent, s.label.clone()));
        for c in s.children.iter().rev() {
            stack.push((c, Some(id)));
        }
    }
    LabelledTree::from_nodes(poset, entries).expect("shapes are monotone")
}
