use super::{same_poset, FinitePoset, LabelledTree, NodeId, TreeError};
use std::collections::{BTreeMap, HashMap};

/// A label-preserving map sending each edge to a descendant-or-self pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Embedding {
    pub map: BTreeMap<NodeId, NodeId>,
}

impl Embedding {
    pub fn get(&self, n: NodeId) -> Option<NodeId> {
        self.map.get(&n).copied()
    }

    pub fn identity(nodes: impl IntoIterator<Item = NodeId>) -> Self {
        Embedding {
            map: nodes.into_iter().map(|n| (n, n)).collect(),
        }
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &Embedding) -> Embedding {
        Embedding {
            map: self
                .map
                .iter()
                .filter_map(|(&a, b)| other.get(*b).map(|c| (a, c)))
                .collect(),
        }
    }
}

/// Checks that `e` is an embedding of `s` into `t`, returning the first
/// problem found.
pub fn validate_embedding<P: FinitePoset>(
    s: &LabelledTree<P>,
    t: &LabelledTree<P>,
    e: &Embedding,
) -> Result<(), String> {
    for n in s.node_ids() {
        let Some(m) = e.get(n) else {
            return Err(format!("node {n} is not mapped"));
        };
        if !t.contains(m) {
            return Err(format!("node {n} maps to missing node {m}"));
        }
        if s.label(n) != t.label(m) {
            return Err(format!("node {n} and its image {m} carry different labels"));
        }
        for &c in s.children(n) {
            let mc = e.get(c).ok_or_else(|| format!("node {c} is not mapped"))?;
            if !t.contains(mc) || !t.is_ancestor_or_self(m, mc) {
                return Err(format!("edge {n} -> {c} is not sent below {m}"));
            }
        }
    }
    if e.map.len() != s.len() {
        return Err("map has entries for nodes outside the source".into());
    }
    Ok(())
}

struct Search<'a, P: FinitePoset> {
    s: &'a LabelledTree<P>,
    t: &'a LabelledTree<P>,
    below: HashMap<NodeId, Vec<NodeId>>,
    memo: HashMap<(NodeId, NodeId), bool>,
}

impl<P: FinitePoset> Search<'_, P> {
    /// Whether the subtree of `x` embeds with `x` sent to `y`.
    fn fits(&mut self, x: NodeId, y: NodeId) -> bool {
        if let Some(&r) = self.memo.get(&(x, y)) {
            return r;
        }
        let ok = self.s.label(x) == self.t.label(y)
            && self.s.children(x).to_vec().into_iter().all(|c| {
                let cands = self.below[&y].clone();
                cands.into_iter().any(|z| self.fits(c, z))
            });
        self.memo.insert((x, y), ok);
        ok
    }

    fn build(&mut self, x: NodeId, y: NodeId, out: &mut Embedding) {
        out.map.insert(x, y);
        for c in self.s.children(x).to_vec() {
            let z = self.below[&y]
                .clone()
                .into_iter()
                .find(|&z| self.fits(c, z))
                .expect("fits() promised a target");
            self.build(c, z, out);
        }
    }
}

/// Searches for an embedding of `s` into `t`. Source nodes are placed in
/// preorder and each takes the first feasible target in target preorder.
pub fn embeds_into<P: FinitePoset>(
    s: &LabelledTree<P>,
    t: &LabelledTree<P>,
) -> Result<Option<Embedding>, TreeError> {
    if !same_poset(s, t) {
        return Err(TreeError::PosetMismatch);
    }
    let below = t.node_ids().map(|y| (y, t.subtree(y))).collect();
    let mut search = Search {
        s,
        t,
        below,
        memo: HashMap::new(),
    };
    let order = t.subtree(t.root());
    let Some(y) = order.into_iter().find(|&y| search.fits(s.root(), y)) else {
        return Ok(None);
    };
    let mut out = Embedding::default();
    search.build(s.root(), y, &mut out);
    Ok(Some(out))
}

/// Both directions of a `~`-equivalence, when it holds.
pub fn equivalent_sim<P: FinitePoset>(
    s: &LabelledTree<P>,
    t: &LabelledTree<P>,
) -> Result<Option<(Embedding, Embedding)>, TreeError> {
    let Some(there) = embeds_into(s, t)? else {
        return Ok(None);
    };
    Ok(embeds_into(t, s)?.map(|back| (there, back)))
}

/// Evidence that a family is dreary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrearyWitness {
    /// One-based index `m` of the earlier member equivalent to the last.
    pub index: usize,
    /// Embedding of the last member into member `m`.
    pub forward: Embedding,
    /// Embedding of member `m` into the last member.
    pub backward: Embedding,
}

/// For a family indexed `1..=n`, the least `m < n` whose member is
/// `~`-equivalent to member `n`.
pub fn is_dreary<P: FinitePoset>(
    family: &[LabelledTree<P>],
) -> Result<Option<DrearyWitness>, TreeError> {
    let Some((last, earlier)) = family.split_last() else {
        return Ok(None);
    };
    for (i, t) in earlier.iter().enumerate() {
        if let Some((forward, backward)) = equivalent_sim(last, t)? {
            return Ok(Some(DrearyWitness {
                index: i + 1,
                forward,
                backward,
            }));
        }
    }
    Ok(None)
}
