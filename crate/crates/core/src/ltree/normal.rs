use super::{Embedding, FinitePoset, LabelledTree, NodeId, TreeError};
use std::collections::BTreeMap;

/// A normalised tree with embeddings both ways between it and the input.
#[derive(Debug)]
pub struct Normalized<P: FinitePoset> {
    pub tree: LabelledTree<P>,
    /// Input nodes to result nodes.
    pub forward: Embedding,
    /// Result nodes to input nodes (the inclusion).
    pub backward: Embedding,
}

/// Contracts duplicate edges (equal labels at both ends), lowest parent id
/// first, until the tree is strict. The child's own children move up to the
/// parent.
pub fn strictify<P: FinitePoset>(t: &LabelledTree<P>) -> Normalized<P> {
    let mut tree = t.clone();
    let mut forward: BTreeMap<NodeId, NodeId> = t.node_ids().map(|n| (n, n)).collect();
    while let Some((i, j)) = tree.first_duplicate() {
        let before = tree.len();
        tree = tree.contract_edge(i, j);
        debug_assert!(tree.len() < before);
        for target in forward.values_mut() {
            if *target == j {
                *target = i;
            }
        }
    }
    let backward = Embedding::identity(tree.node_ids());
    Normalized {
        tree,
        forward: Embedding { map: forward },
        backward,
    }
}

/// Deletes the later of two sibling subtrees that are isomorphic, lowest
/// parent first, until the tree is nice. Nodes of a deleted subtree are
/// sent to their counterparts in the kept twin.
pub fn nicify<P: FinitePoset>(t: &LabelledTree<P>) -> Result<Normalized<P>, TreeError> {
    if let Some((parent, child)) = t.first_duplicate() {
        return Err(TreeError::NotStrict { parent, child });
    }
    let mut tree = t.clone();
    let mut forward: BTreeMap<NodeId, NodeId> = t.node_ids().map(|n| (n, n)).collect();
    while let Some((i, j, _)) = tree.first_triplicate() {
        let iso = isomorphism(&tree, j, i);
        tree = tree.without_subtree(j);
        for target in forward.values_mut() {
            if let Some(&img) = iso.get(target) {
                *target = img;
            }
        }
    }
    let backward = Embedding::identity(tree.node_ids());
    Ok(Normalized {
        tree,
        forward: Embedding { map: forward },
        backward,
    })
}

/// An isomorphism from the subtree at `from` onto the subtree at `to`,
/// which must have equal canonical codes. Children are paired by code.
fn isomorphism<P: FinitePoset>(t: &LabelledTree<P>, from: NodeId, to: NodeId) -> BTreeMap<NodeId, NodeId> {
    let codes = t.subtree_codes();
    let mut out = BTreeMap::new();
    let mut stack = vec![(from, to)];
    while let Some((a, b)) = stack.pop() {
        debug_assert_eq!(codes[&a], codes[&b]);
        out.insert(a, b);
        let mut xs: Vec<NodeId> = t.children(a).to_vec();
        let mut ys: Vec<NodeId> = t.children(b).to_vec();
        xs.sort_by(|p, q| codes[p].cmp(&codes[q]).then(p.cmp(q)));
        ys.sort_by(|p, q| codes[p].cmp(&codes[q]).then(p.cmp(q)));
        stack.extend(xs.into_iter().zip(ys));
    }
    out
}
