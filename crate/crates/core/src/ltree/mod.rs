//! Finite trees labelled in a finite poset.
//!
//! Trees are monotone: a child's label is never below its parent's. The
//! module provides embeddings and the equivalence `~` (mutual
//! embeddability), isomorphism via canonical codes, the strict and nice
//! normal forms, nice-tree enumeration, and detection of dreary families.

mod classes;
mod embed;
mod nice;
mod normal;
mod text;

pub use classes::{prune, sim_classes, subtree_of};
pub use embed::{embeds_into, equivalent_sim, is_dreary, validate_embedding, DrearyWitness, Embedding};
pub use nice::{count_nice_trees, enumerate_nice_trees, nlt_bound};
pub use normal::{nicify, strictify, Normalized};
pub use text::{parse_tree, render_tree};

use crate::bitset::BitSet;
use crate::formula::{Label, LabelPoset};
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;
use thiserror::Error;

/// A finite partial order whose elements serve as tree labels.
pub trait FinitePoset: Debug + Send + Sync {
    type Label: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn contains(&self, l: &Self::Label) -> bool;
    fn leq(&self, a: &Self::Label, b: &Self::Label) -> bool;
    fn lt(&self, a: &Self::Label, b: &Self::Label) -> bool {
        self.leq(a, b) && !self.leq(b, a)
    }
    /// Every element, in a fixed order.
    fn elements(&self) -> Vec<Self::Label>;
    /// An injective byte encoding of labels.
    fn encode(&self, l: &Self::Label, out: &mut Vec<u8>);
    fn format_label(&self, l: &Self::Label) -> String;
    fn parse_label(&self, text: &str) -> Option<Self::Label>;
    /// Whether `other` describes the same label universe.
    fn same_universe(&self, other: &Self) -> bool;
}

impl FinitePoset for LabelPoset {
    type Label = Label;

    fn contains(&self, l: &Label) -> bool {
        l.as_set().is_none_or(|s| s.len() == self.width())
    }

    fn leq(&self, a: &Label, b: &Label) -> bool {
        self.label_leq(a, b).unwrap_or(false)
    }

    fn elements(&self) -> Vec<Label> {
        self.labels()
    }

    fn encode(&self, l: &Label, out: &mut Vec<u8>) {
        match l {
            Label::Root => out.push(0),
            Label::Set(s) => {
                out.push(1);
                out.extend(s.to_bytes());
            }
        }
    }

    fn format_label(&self, l: &Label) -> String {
        match l {
            Label::Root => "-1".into(),
            Label::Set(s) => {
                let items: Vec<String> = s.iter().map(|i| i.to_string()).collect();
                format!("{{{}}}", items.join(","))
            }
        }
    }

    fn parse_label(&self, text: &str) -> Option<Label> {
        let text = text.trim();
        if text == "-1" {
            return Some(Label::Root);
        }
        let inner = text.strip_prefix('{')?.strip_suffix('}')?.trim();
        let mut set = BitSet::new(self.width());
        if !inner.is_empty() {
            for item in inner.split(',') {
                let i: usize = item.trim().parse().ok()?;
                if i >= self.width() {
                    return None;
                }
                set.insert(i);
            }
        }
        Some(Label::Set(set))
    }

    fn same_universe(&self, other: &Self) -> bool {
        Arc::ptr_eq(self.closure(), other.closure())
            || self.closure().members() == other.closure().members()
    }
}

/// The chain `0 < 1 < ... < len-1`; handy for exercising the tree calculus
/// on posets that are not label posets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainPoset {
    pub len: usize,
}

impl FinitePoset for ChainPoset {
    type Label = usize;

    fn contains(&self, l: &usize) -> bool {
        *l < self.len
    }

    fn leq(&self, a: &usize, b: &usize) -> bool {
        a <= b
    }

    fn elements(&self) -> Vec<usize> {
        (0..self.len).collect()
    }

    fn encode(&self, l: &usize, out: &mut Vec<u8>) {
        out.extend((*l as u64).to_le_bytes());
    }

    fn format_label(&self, l: &usize) -> String {
        l.to_string()
    }

    fn parse_label(&self, text: &str) -> Option<usize> {
        text.trim().parse().ok().filter(|l| *l < self.len)
    }

    fn same_universe(&self, other: &Self) -> bool {
        self == other
    }
}

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("node {0} listed twice")]
    DuplicateNode(NodeId),
    #[error("tree has no root")]
    NoRoot,
    #[error("tree has several roots ({0} and {1})")]
    SeveralRoots(NodeId, NodeId),
    #[error("node {node} has unknown parent {parent}")]
    UnknownParent { node: NodeId, parent: NodeId },
    #[error("node {0} is not reachable from the root")]
    Unreachable(NodeId),
    #[error("label of node {node} is outside the poset")]
    ForeignLabel { node: NodeId },
    #[error("labels decrease along the edge {parent} -> {child}")]
    NotMonotone { parent: NodeId, child: NodeId },
    #[error("trees are labelled in different posets")]
    PosetMismatch,
    #[error("tree is not strict: edge {parent} -> {child} repeats a label")]
    NotStrict { parent: NodeId, child: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node<L> {
    label: L,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
}

/// A finite rooted tree with monotone labels. Node ids are arbitrary but
/// unique; children are kept in increasing id order.
#[derive(Debug)]
pub struct LabelledTree<P: FinitePoset> {
    poset: Arc<P>,
    root: NodeId,
    nodes: BTreeMap<NodeId, Node<P::Label>>,
}

impl<P: FinitePoset> LabelledTree<P> {
    pub fn leaf(poset: Arc<P>, label: P::Label) -> Result<Self, TreeError> {
        Self::from_nodes(poset, [(0, None, label)])
    }

    /// Builds a tree from `(id, parent, label)` triples in any order.
    pub fn from_nodes(
        poset: Arc<P>,
        entries: impl IntoIterator<Item = (NodeId, Option<NodeId>, P::Label)>,
    ) -> Result<Self, TreeError> {
        let mut nodes: BTreeMap<NodeId, Node<P::Label>> = BTreeMap::new();
        for (id, parent, label) in entries {
            if !poset.contains(&label) {
                return Err(TreeError::ForeignLabel { node: id });
            }
            let node = Node {
                label,
                parent,
                children: Vec::new(),
            };
            if nodes.insert(id, node).is_some() {
                return Err(TreeError::DuplicateNode(id));
            }
        }
        let mut root = None;
        let links: Vec<(NodeId, Option<NodeId>)> = nodes.iter().map(|(&id, n)| (id, n.parent)).collect();
        for (id, parent) in links {
            match parent {
                None => match root {
                    None => root = Some(id),
                    Some(r) => return Err(TreeError::SeveralRoots(r, id)),
                },
                Some(p) => match nodes.get_mut(&p) {
                    Some(pn) => pn.children.push(id),
                    None => return Err(TreeError::UnknownParent { node: id, parent: p }),
                },
            }
        }
        let root = root.ok_or(TreeError::NoRoot)?;
        let tree = LabelledTree { poset, root, nodes };
        let reached = tree.subtree(root).len();
        if reached != tree.nodes.len() {
            let seen: std::collections::BTreeSet<NodeId> = tree.subtree(root).into_iter().collect();
            let lost = tree.nodes.keys().find(|k| !seen.contains(k)).copied().unwrap_or(root);
            return Err(TreeError::Unreachable(lost));
        }
        for (&id, n) in &tree.nodes {
            if let Some(p) = n.parent {
                if !tree.poset.leq(&tree.nodes[&p].label, &n.label) {
                    return Err(TreeError::NotMonotone { parent: p, child: id });
                }
            }
        }
        Ok(tree)
    }

    /// Adds a fresh child below `parent` and returns its id.
    pub fn add_child(&mut self, parent: NodeId, label: P::Label) -> Result<NodeId, TreeError> {
        let id = self.nodes.keys().next_back().map_or(0, |k| k + 1);
        let Some(p) = self.nodes.get(&parent) else {
            return Err(TreeError::UnknownParent { node: id, parent });
        };
        if !self.poset.contains(&label) {
            return Err(TreeError::ForeignLabel { node: id });
        }
        if !self.poset.leq(&p.label, &label) {
            return Err(TreeError::NotMonotone { parent, child: id });
        }
        self.nodes.insert(
            id,
            Node {
                label,
                parent: Some(parent),
                children: Vec::new(),
            },
        );
        self.nodes.get_mut(&parent).expect("checked").children.push(id);
        Ok(id)
    }

    pub fn poset(&self) -> &Arc<P> {
        &self.poset
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn label(&self, id: NodeId) -> &P::Label {
        &self.nodes[&id].label
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[&id].parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[&id].children
    }

    /// `a` equals `b` or lies above it.
    pub fn is_ancestor_or_self(&self, a: NodeId, b: NodeId) -> bool {
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.nodes[&c].parent;
        }
        false
    }

    /// The nodes of the subtree rooted at `id`, in preorder.
    pub fn subtree(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.nodes[&n].children.iter().rev());
        }
        out
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        fn go<P: FinitePoset>(t: &LabelledTree<P>, n: NodeId) -> usize {
            t.children(n).iter().map(|&c| 1 + go(t, c)).max().unwrap_or(0)
        }
        go(self, self.root)
    }

    /// The first edge, by parent then child id, whose endpoints share a label.
    pub fn first_duplicate(&self) -> Option<(NodeId, NodeId)> {
        self.nodes.iter().find_map(|(&i, n)| {
            n.children
                .iter()
                .find(|c| self.nodes[c].label == n.label)
                .map(|&j| (i, j))
        })
    }

    pub fn is_strict(&self) -> bool {
        self.first_duplicate().is_none()
    }

    /// The first `(i, j, k)` with `i < j` sibling children of `k` carrying
    /// isomorphic subtrees, scanning `k`, then `i`, then `j` upwards.
    pub fn first_triplicate(&self) -> Option<(NodeId, NodeId, NodeId)> {
        let codes = self.subtree_codes();
        for (&k, n) in &self.nodes {
            for (a, &i) in n.children.iter().enumerate() {
                for &j in &n.children[a + 1..] {
                    if codes[&i] == codes[&j] {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_nice(&self) -> bool {
        self.is_strict() && self.first_triplicate().is_none()
    }

    /// Isomorphism-invariant encoding: equal codes iff the trees are
    /// isomorphic as labelled trees.
    pub fn canonical_code(&self) -> Vec<u8> {
        self.subtree_codes().remove(&self.root).expect("root present")
    }

    /// Canonical code of every subtree, keyed by its root.
    pub fn subtree_codes(&self) -> BTreeMap<NodeId, Vec<u8>> {
        let mut codes = BTreeMap::new();
        for &n in self.subtree(self.root).iter().rev() {
            let mut label = Vec::new();
            self.poset.encode(self.label(n), &mut label);
            let mut kids: Vec<&Vec<u8>> = self.children(n).iter().map(|c| &codes[c]).collect();
            kids.sort();
            let mut code = Vec::with_capacity(8 + label.len());
            code.push(b'(');
            code.extend((label.len() as u32).to_le_bytes());
            code.extend(&label);
            for k in kids {
                code.extend(k);
            }
            code.push(b')');
            codes.insert(n, code);
        }
        codes
    }

    /// Deletes the subtree rooted at `id` (which must not be the root).
    pub(crate) fn without_subtree(&self, id: NodeId) -> Self {
        let gone: std::collections::BTreeSet<NodeId> = self.subtree(id).into_iter().collect();
        let mut out = self.clone();
        for g in &gone {
            out.nodes.remove(g);
        }
        if let Some(p) = self.parent(id) {
            out.nodes.get_mut(&p).expect("parent kept").children.retain(|c| *c != id);
        }
        out
    }

    /// Removes `j`, attaching its children to `i` (its parent).
    pub(crate) fn contract_edge(&self, i: NodeId, j: NodeId) -> Self {
        let mut out = self.clone();
        let moved = out.nodes.remove(&j).expect("node present").children;
        for &c in &moved {
            out.nodes.get_mut(&c).expect("child").parent = Some(i);
        }
        let kids = &mut out.nodes.get_mut(&i).expect("parent").children;
        kids.retain(|c| *c != j);
        kids.extend(moved);
        kids.sort_unstable();
        out
    }
}

impl<P: FinitePoset> Clone for LabelledTree<P> {
    fn clone(&self) -> Self {
        LabelledTree {
            poset: self.poset.clone(),
            root: self.root,
            nodes: self.nodes.clone(),
        }
    }
}

impl<P: FinitePoset> PartialEq for LabelledTree<P> {
    /// Identity of the concrete structure (ids included); use
    /// [`LabelledTree::canonical_code`] for isomorphism.
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root && self.nodes == other.nodes
    }
}

pub(crate) fn same_poset<P: FinitePoset>(a: &LabelledTree<P>, b: &LabelledTree<P>) -> bool {
    Arc::ptr_eq(&a.poset, &b.poset) || a.poset.same_universe(&b.poset)
}
