//! Clip saturation: grow a finite structure of tips over a world oracle by
//! repairing defects rank by rank, stop once the slice family turns dreary,
//! and fold the last slice back onto an earlier one to get a finite model.
//!
//! A tip `(i, s, α, X)` pairs a fresh id with an oracle world `s`, a rank
//! `α` (how many `▷` steps from the root) and a height `X` (how many `≪`
//! steps). `≪` edges track the oracle preorder inside one rank; `▷` edges
//! track the accessibility relation from one rank to the next.

mod defect;
mod model;
mod saturate;

pub use defect::{
    degree, find_defects, is_clean, repair_defect, run_repair_procedure, Defect, DefectKind,
    Procedure,
};
pub use model::{
    assemble_model, build_saturated_model, check_truth_lemma, loop_back_edges, SaturatedModel,
    TruthViolation,
};
pub use saturate::{saturate, SaturationConfig, SaturationResult, TraceEvent};

use crate::formula::{Label, LabelPoset};
use crate::ltree::{LabelledTree, NodeId, TreeError};
use crate::oracle::{OracleError, WorldOracle};
use crate::semantics::{ClosureMode, Relation};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub type TipId = usize;

/// Node id of the `-1` root in a slice. Tips keep their own ids.
pub const SENTINEL: NodeId = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tip<W> {
    pub id: TipId,
    pub world: W,
    pub rank: usize,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClipError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("slice is not a labelled tree: {0}")]
    Tree(#[from] TreeError),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("saturation exceeded its budget of {0} tips")]
    BudgetExceeded(usize),
    #[error("{0} is not a current defect")]
    NotADefect(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Edges {
    fwd: BTreeSet<(TipId, TipId)>,
    rev: BTreeSet<(TipId, TipId)>,
}

impl Edges {
    fn insert(&mut self, a: TipId, b: TipId) {
        self.fwd.insert((a, b));
        self.rev.insert((b, a));
    }

    fn contains(&self, a: TipId, b: TipId) -> bool {
        self.fwd.contains(&(a, b))
    }

    fn successors(&self, a: TipId) -> impl Iterator<Item = TipId> + '_ {
        self.fwd.range((a, 0)..=(a, usize::MAX)).map(|&(_, b)| b)
    }

    fn predecessors(&self, b: TipId) -> impl Iterator<Item = TipId> + '_ {
        self.rev.range((b, 0)..=(b, usize::MAX)).map(|&(_, a)| a)
    }
}

/// Tips with the two edge relations `≪` and `▷`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clip<W> {
    tips: BTreeMap<TipId, Tip<W>>,
    lt: Edges,
    tri: Edges,
    fresh: TipId,
}

impl<W: Copy + Ord + fmt::Debug> Clip<W> {
    /// The single tip `(0, s0, 0, 0)` and no edges.
    pub fn initial(s0: W) -> Self {
        Clip::from_parts([(s0, 0, 0)], [], []).expect("one tip, no edges")
    }

    /// Tips `(world, rank, height)` get ids `0, 1, ...` in order. Nothing is
    /// checked beyond edges naming existing tips; see [`validate`].
    pub fn from_parts(
        tips: impl IntoIterator<Item = (W, usize, usize)>,
        lt: impl IntoIterator<Item = (TipId, TipId)>,
        tri: impl IntoIterator<Item = (TipId, TipId)>,
    ) -> Result<Self, ClipError> {
        let mut clip = Clip {
            tips: BTreeMap::new(),
            lt: Edges::default(),
            tri: Edges::default(),
            fresh: 0,
        };
        for (world, rank, height) in tips {
            clip.add_tip(world, rank, height);
        }
        for (a, b) in lt {
            clip.check_pair(a, b)?;
            clip.lt.insert(a, b);
        }
        for (a, b) in tri {
            clip.check_pair(a, b)?;
            clip.tri.insert(a, b);
        }
        Ok(clip)
    }

    fn check_pair(&self, a: TipId, b: TipId) -> Result<(), ClipError> {
        match [a, b].into_iter().find(|x| !self.tips.contains_key(x)) {
            Some(x) => Err(ClipError::Invariant(format!("edge {a} -> {b} names missing tip {x}"))),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.tips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tips.is_empty()
    }

    pub fn tips(&self) -> impl Iterator<Item = &Tip<W>> + '_ {
        self.tips.values()
    }

    pub fn tip(&self, id: TipId) -> &Tip<W> {
        &self.tips[&id]
    }

    pub fn contains(&self, id: TipId) -> bool {
        self.tips.contains_key(&id)
    }

    pub fn lt_edges(&self) -> impl Iterator<Item = (TipId, TipId)> + '_ {
        self.lt.fwd.iter().copied()
    }

    pub fn tri_edges(&self) -> impl Iterator<Item = (TipId, TipId)> + '_ {
        self.tri.fwd.iter().copied()
    }

    pub fn lt(&self, a: TipId, b: TipId) -> bool {
        self.lt.contains(a, b)
    }

    pub fn tri(&self, a: TipId, b: TipId) -> bool {
        self.tri.contains(a, b)
    }

    pub fn lt_successors(&self, a: TipId) -> impl Iterator<Item = TipId> + '_ {
        self.lt.successors(a)
    }

    pub fn lt_predecessors(&self, b: TipId) -> impl Iterator<Item = TipId> + '_ {
        self.lt.predecessors(b)
    }

    pub fn tri_successors(&self, a: TipId) -> impl Iterator<Item = TipId> + '_ {
        self.tri.successors(a)
    }

    pub fn tri_predecessors(&self, b: TipId) -> impl Iterator<Item = TipId> + '_ {
        self.tri.predecessors(b)
    }

    /// Tips of rank `alpha`, in id order.
    pub fn rank_tips(&self, alpha: usize) -> impl Iterator<Item = &Tip<W>> + '_ {
        self.tips.values().filter(move |t| t.rank == alpha)
    }

    pub fn max_rank(&self) -> usize {
        self.tips.values().map(|t| t.rank).max().unwrap_or(0)
    }

    pub fn max_height(&self) -> usize {
        self.tips.values().map(|t| t.height).max().unwrap_or(0)
    }

    /// The largest height among tips of rank `alpha`.
    pub fn rank_height(&self, alpha: usize) -> Option<usize> {
        self.rank_tips(alpha).map(|t| t.height).max()
    }

    pub(crate) fn add_tip(&mut self, world: W, rank: usize, height: usize) -> TipId {
        let id = self.fresh;
        self.fresh += 1;
        self.tips.insert(
            id,
            Tip {
                id,
                world,
                rank,
                height,
            },
        );
        id
    }

    pub(crate) fn add_lt(&mut self, a: TipId, b: TipId) {
        self.lt.insert(a, b);
    }

    pub(crate) fn add_tri(&mut self, a: TipId, b: TipId) {
        self.tri.insert(a, b);
    }

    /// Dense positions `0..len` for tips, in id order.
    pub fn index(&self) -> BTreeMap<TipId, usize> {
        self.tips.keys().enumerate().map(|(i, &id)| (id, i)).collect()
    }

    /// `≪⋆` and `▷⁺` over dense positions.
    pub fn closed_relations(&self) -> (Relation, Relation) {
        let idx = self.index();
        let n = self.len();
        let lt = Relation::from_pairs(n, self.lt_edges().map(|(a, b)| (idx[&a], idx[&b])));
        let tri = Relation::from_pairs(n, self.tri_edges().map(|(a, b)| (idx[&a], idx[&b])));
        (
            lt.closure(ClosureMode::ReflexiveTransitive),
            tri.closure(ClosureMode::Transitive),
        )
    }
}

/// A failed coherence, regularity or homomorphism clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    LtLoop(TipId),
    LtNotLeq(TipId, TipId),
    LtRank(TipId, TipId),
    LtHeight(TipId, TipId),
    TriLoop(TipId),
    TriNotAccessible(TipId, TipId),
    TriRank(TipId, TipId),
    TriHeight(TipId, TipId),
    SeveralLtPredecessors(TipId),
    SeveralTriPredecessors(TipId),
    /// `i ▷ j` and `k ≪ j` with no `l ≪ i`, `l ▷ k`.
    Zig(TipId, TipId, TipId),
    ClosureNotLeq(TipId, TipId),
    ClosureNotAccessible(TipId, TipId),
}

impl Violation {
    fn is_coherence(&self) -> bool {
        !matches!(
            self,
            Violation::SeveralLtPredecessors(_) | Violation::SeveralTriPredecessors(_) | Violation::Zig(..)
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LtLoop(i) => write!(f, "{i} << {i}: ids must differ"),
            Violation::LtNotLeq(i, j) => write!(f, "{i} << {j} but their worlds are not <="),
            Violation::LtRank(i, j) => write!(f, "{i} << {j} with different ranks"),
            Violation::LtHeight(i, j) => write!(f, "{i} << {j} without height + 1"),
            Violation::TriLoop(i) => write!(f, "{i} |> {i}: ids must differ"),
            Violation::TriNotAccessible(i, j) => write!(f, "{i} |> {j} but their worlds are not R-related"),
            Violation::TriRank(i, j) => write!(f, "{i} |> {j} without rank + 1"),
            Violation::TriHeight(i, j) => write!(f, "{i} |> {j} with different heights"),
            Violation::SeveralLtPredecessors(j) => write!(f, "{j} has several <<-predecessors"),
            Violation::SeveralTriPredecessors(j) => write!(f, "{j} has several |>-predecessors"),
            Violation::Zig(i, j, k) => {
                write!(f, "{i} |> {j} and {k} << {j} but no l with l << {i} and l |> {k}")
            }
            Violation::ClosureNotLeq(i, j) => write!(f, "{i} <<* {j} but their worlds are not <="),
            Violation::ClosureNotAccessible(i, j) => {
                write!(f, "{i} |>+ {j} but their worlds are not R-related")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub coherent: bool,
    pub regular: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks coherence, regularity, and that `≪⋆` and `▷⁺` map into the
/// oracle's `≤` and `R`.
pub fn validate<O: WorldOracle>(clip: &Clip<O::World>, oracle: &O) -> ValidationReport {
    let mut out = Vec::new();
    for (i, j) in clip.lt_edges() {
        let (a, b) = (clip.tip(i), clip.tip(j));
        if i == j {
            out.push(Violation::LtLoop(i));
        }
        if !oracle.leq(a.world, b.world) {
            out.push(Violation::LtNotLeq(i, j));
        }
        if a.rank != b.rank {
            out.push(Violation::LtRank(i, j));
        }
        if b.height != a.height + 1 {
            out.push(Violation::LtHeight(i, j));
        }
    }
    for (i, j) in clip.tri_edges() {
        let (a, b) = (clip.tip(i), clip.tip(j));
        if i == j {
            out.push(Violation::TriLoop(i));
        }
        if !oracle.accessible(a.world, b.world) {
            out.push(Violation::TriNotAccessible(i, j));
        }
        if b.rank != a.rank + 1 {
            out.push(Violation::TriRank(i, j));
        }
        if a.height != b.height {
            out.push(Violation::TriHeight(i, j));
        }
    }
    for t in clip.tips() {
        if clip.lt_predecessors(t.id).nth(1).is_some() {
            out.push(Violation::SeveralLtPredecessors(t.id));
        }
        if clip.tri_predecessors(t.id).nth(1).is_some() {
            out.push(Violation::SeveralTriPredecessors(t.id));
        }
    }
    for (i, j) in clip.tri_edges() {
        for k in clip.lt_predecessors(j) {
            if !clip.lt_predecessors(i).any(|l| clip.tri(l, k)) {
                out.push(Violation::Zig(i, j, k));
            }
        }
    }
    let ids: Vec<TipId> = clip.tips.keys().copied().collect();
    let (lt_star, tri_plus) = clip.closed_relations();
    for (a, b) in lt_star.pairs() {
        if !oracle.leq(clip.tip(ids[a]).world, clip.tip(ids[b]).world) {
            out.push(Violation::ClosureNotLeq(ids[a], ids[b]));
        }
    }
    for (a, b) in tri_plus.pairs() {
        if !oracle.accessible(clip.tip(ids[a]).world, clip.tip(ids[b]).world) {
            out.push(Violation::ClosureNotAccessible(ids[a], ids[b]));
        }
    }
    ValidationReport {
        coherent: !out.iter().any(|v| v.is_coherence()),
        regular: !out.iter().any(|v| !v.is_coherence()),
        violations: out,
    }
}

/// The `alpha`-slice: a `-1` root ([`SENTINEL`]) over the rank-`alpha`
/// tips, with the `≪` edges among them and the root above every tip that
/// has no `≪`-predecessor. Tips are labelled by their world's trace.
pub fn slice<O: WorldOracle>(
    clip: &Clip<O::World>,
    oracle: &O,
    poset: &Arc<LabelPoset>,
    alpha: usize,
) -> Result<LabelledTree<LabelPoset>, ClipError> {
    let mut entries = vec![(SENTINEL, None, Label::Root)];
    for t in clip.rank_tips(alpha) {
        let mut preds = clip.lt_predecessors(t.id).filter(|&p| clip.tip(p).rank == alpha);
        let parent = preds.next().unwrap_or(SENTINEL);
        if preds.next().is_some() {
            return Err(ClipError::Invariant(format!(
                "tip {} has several <<-predecessors",
                t.id
            )));
        }
        entries.push((t.id, Some(parent), Label::Set(oracle.trace(t.world).clone())));
    }
    Ok(LabelledTree::from_nodes(poset.clone(), entries)?)
}
