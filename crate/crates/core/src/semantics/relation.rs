use crate::bitset::BitSet;
use std::fmt;

/// A binary relation on `0..size`, stored as one successor row per element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    rows: Vec<BitSet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureMode {
    Transitive,
    ReflexiveTransitive,
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        Relation {
            rows: vec![BitSet::new(size); size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut r = Self::empty(size);
        for i in 0..size {
            r.insert(i, i);
        }
        r
    }

    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(size);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        a < self.size() && self.rows[a].contains(b)
    }

    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        self.rows[a].insert(b)
    }

    pub fn successors(&self, a: usize) -> &BitSet {
        &self.rows[a]
    }

    pub fn predecessors(&self, b: usize) -> BitSet {
        BitSet::from_indices(self.size(), (0..self.size()).filter(|&a| self.rows[a].contains(b)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().map(move |b| (a, b)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(BitSet::is_empty)
    }

    pub fn converse(&self) -> Relation {
        Relation::from_pairs(self.size(), self.pairs().map(|(a, b)| (b, a)))
    }

    /// `self ∘ other`: `a` reaches `c` when `a self b` and `b other c` for some `b`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let n = self.size();
        let mut out = Relation::empty(n);
        for a in 0..n {
            for b in self.rows[a].iter() {
                out.rows[a].union_with(&other.rows[b]);
            }
        }
        out
    }

    pub fn union(&self, other: &Relation) -> Relation {
        let mut out = self.clone();
        for (row, o) in out.rows.iter_mut().zip(&other.rows) {
            row.union_with(o);
        }
        out
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size()).all(|i| self.contains(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_violation().is_none()
    }

    /// Some `(a, b, c)` with `a R b`, `b R c` but not `a R c`.
    pub fn transitivity_violation(&self) -> Option<(usize, usize, usize)> {
        for (a, b) in self.pairs() {
            for c in self.rows[b].iter() {
                if !self.contains(a, c) {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    pub fn closure(&self, mode: ClosureMode) -> Relation {
        relation_closure(self, mode)
    }
}

/// Least transitive (or reflexive-transitive) relation containing `r`.
pub fn relation_closure(r: &Relation, mode: ClosureMode) -> Relation {
    let n = r.size();
    let mut out = r.clone();
    if mode == ClosureMode::ReflexiveTransitive {
        for i in 0..n {
            out.insert(i, i);
        }
    }
    // Warshall: after round k, paths through intermediates < k+1 are closed.
    for k in 0..n {
        let via = out.rows[k].clone();
        for i in 0..n {
            if out.rows[i].contains(k) {
                out.rows[i].union_with(&via);
            }
        }
    }
    out
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_examples() {
        let empty = Relation::empty(3);
        assert_eq!(relation_closure(&empty, ClosureMode::Transitive), empty);

        let chain = Relation::from_pairs(3, [(0, 1), (1, 2)]);
        assert_eq!(
            relation_closure(&chain, ClosureMode::Transitive),
            Relation::from_pairs(3, [(0, 1), (1, 2), (0, 2)])
        );

        let one = Relation::from_pairs(2, [(0, 1)]);
        assert_eq!(
            relation_closure(&one, ClosureMode::ReflexiveTransitive),
            Relation::from_pairs(2, [(0, 0), (1, 1), (0, 1)])
        );
    }

    #[test]
    fn compose_follows_left_then_right() {
        let r = Relation::from_pairs(3, [(0, 1)]);
        let s = Relation::from_pairs(3, [(1, 2)]);
        assert_eq!(r.compose(&s), Relation::from_pairs(3, [(0, 2)]));
        assert!(s.compose(&r).is_empty());
    }

    #[test]
    fn cycle_closes_to_complete_relation() {
        let cyc = Relation::from_pairs(3, [(0, 1), (1, 2), (2, 0)]);
        let t = relation_closure(&cyc, ClosureMode::Transitive);
        assert_eq!(t.len(), 9);
        assert_eq!(cyc.transitivity_violation(), Some((0, 1, 2)));
    }
}
