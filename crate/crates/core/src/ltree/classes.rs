//! One representative per `~`-class of trees over a finite poset.
//!
//! A tree whose root has label `l` is `~`-equivalent to the strict tree with
//! root `l` whose children are an antichain, under embeddability, of class
//! representatives rooted strictly above `l`. Distinct antichains give
//! inequivalent trees, so building these bottom-up lists every class once.

use super::{embeds_into, strictify, Embedding, FinitePoset, LabelledTree, NodeId, Normalized};
use std::collections::BTreeMap;
use std::sync::Arc;

/// The subtree of `id` as a tree of its own, keeping node ids.
pub fn subtree_of<P: FinitePoset>(t: &LabelledTree<P>, id: NodeId) -> LabelledTree<P> {
    let entries = t
        .subtree(id)
        .into_iter()
        .map(|n| (n, if n == id { None } else { t.parent(n) }, t.label(n).clone()));
    LabelledTree::from_nodes(t.poset().clone(), entries).expect("a subtree is a tree")
}

/// Strictifies `t`, then repeatedly deletes a child subtree that embeds
/// into the subtree of a sibling (the later of two mutually embeddable
/// siblings goes), lowest parent first. The result is strict, `~` to `t`,
/// and no sibling subtree embeds into another.
pub fn prune<P: FinitePoset>(t: &LabelledTree<P>) -> Normalized<P> {
    let strict = strictify(t);
    let mut tree = strict.tree;
    let mut forward = strict.forward.map;
    'search: loop {
        for x in tree.node_ids().collect::<Vec<_>>() {
            let kids = tree.children(x).to_vec();
            for &c in kids.iter().rev() {
                let sub = subtree_of(&tree, c);
                for &d in &kids {
                    if d == c {
                        continue;
                    }
                    let Some(e) = embeds_into(&sub, &subtree_of(&tree, d)).expect("same poset") else {
                        continue;
                    };
                    tree = tree.without_subtree(c);
                    for target in forward.values_mut() {
                        if let Some(img) = e.get(*target) {
                            *target = img;
                        }
                    }
                    continue 'search;
                }
            }
        }
        break;
    }
    let backward = Embedding::identity(tree.node_ids());
    Normalized {
        tree,
        forward: Embedding { map: forward },
        backward,
    }
}

fn graft<P: FinitePoset>(poset: &Arc<P>, label: P::Label, children: &[&LabelledTree<P>]) -> LabelledTree<P> {
    let mut entries = vec![(0, None, label)];
    for c in children {
        let base = entries.len();
        let ids: BTreeMap<NodeId, NodeId> = c.subtree(c.root()).into_iter().enumerate().map(|(k, n)| (n, base + k)).collect();
        for (&n, &new) in &ids {
            let parent = c.parent(n).map_or(0, |p| ids[&p]);
            entries.push((new, Some(parent), c.label(n).clone()));
        }
    }
    LabelledTree::from_nodes(poset.clone(), entries).expect("children sit above the root")
}

/// One tree per `~`-class, grouped by root label, or `None` once more than
/// `limit` have been built.
pub fn sim_classes<P: FinitePoset>(poset: Arc<P>, limit: usize) -> Option<Vec<LabelledTree<P>>> {
    let labels = poset.elements();
    let above = |l: &P::Label| labels.iter().filter(|m| poset.lt(l, m)).count();
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by_key(|&i| above(&labels[i]));

    let mut reps: Vec<Vec<LabelledTree<P>>> = vec![Vec::new(); labels.len()];
    let mut total = 0;
    for i in order {
        let l = &labels[i];
        let pool: Vec<&LabelledTree<P>> = (0..labels.len())
            .filter(|&j| poset.lt(l, &labels[j]))
            .flat_map(|j| reps[j].iter())
            .collect();
        let n = pool.len();
        let mut comparable = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                if a != b && embeds_into(pool[a], pool[b]).expect("same poset").is_some() {
                    comparable[a][b] = true;
                    comparable[b][a] = true;
                }
            }
        }
        let mut here = Vec::new();
        antichains(&comparable, 0, &mut Vec::new(), &mut |chosen| {
            let kids: Vec<&LabelledTree<P>> = chosen.iter().map(|&k| pool[k]).collect();
            here.push(graft(&poset, l.clone(), &kids));
            total += 1;
            total <= limit
        });
        if total > limit {
            return None;
        }
        reps[i] = here;
    }
    Some(reps.into_iter().flatten().collect())
}

/// Calls `visit` on every antichain of indices `>= start` extending
/// `chosen`, stopping once it returns false.
fn antichains(comparable: &[Vec<bool>], start: usize, chosen: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if !visit(chosen) {
        return false;
    }
    for next in start..comparable.len() {
        if chosen.iter().all(|&k| !comparable[k][next]) {
            chosen.push(next);
            let go_on = antichains(comparable, next + 1, chosen, visit);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
    }
    true
}
