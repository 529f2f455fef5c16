use super::{Clip, ClipError, SaturationResult, TipId};
use crate::bitset::BitSet;
use crate::formula::SubformulaId;
use crate::oracle::WorldOracle;
use crate::semantics::{closure_extensions, ClosureMode, Frame, Model, Relation, Valuation, Variant};

/// The finite model read off a saturated clip. World `w` of `model` is tip
/// `tips[w]`.
#[derive(Debug, Clone)]
pub struct SaturatedModel {
    pub model: Model,
    pub tips: Vec<TipId>,
    pub loop_edges: Vec<(TipId, TipId)>,
}

impl SaturatedModel {
    pub fn world_of(&self, tip: TipId) -> Option<usize> {
        self.tips.binary_search(&tip).ok()
    }
}

/// Edges from each tip `i` of rank `alpha_f` to the rank-`beta_f + 1` tips
/// that the image of `i` in slice `beta_f` reaches by `▷`.
pub fn loop_back_edges<W: Copy + Ord + std::fmt::Debug>(r: &SaturationResult<W>) -> Vec<(TipId, TipId)> {
    let mut out = Vec::new();
    for (&i, &fi) in &r.loop_embedding {
        for l in r.clip.tri_successors(fi) {
            if r.clip.tip(l).rank == r.beta_f + 1 {
                out.push((i, l));
            }
        }
    }
    out
}

/// Worlds are tips, `≤` is `≪⋆`, `R` is the transitive closure of `▷`
/// together with `extra`, and an atom of the closure holds at a tip when
/// it holds at the tip's world.
pub fn assemble_model<O: WorldOracle>(
    clip: &Clip<O::World>,
    oracle: &O,
    extra: &[(TipId, TipId)],
) -> Result<SaturatedModel, ClipError> {
    let idx = clip.index();
    let tips: Vec<TipId> = idx.keys().copied().collect();
    let n = tips.len();
    let leq = Relation::from_pairs(n, clip.lt_edges().map(|(a, b)| (idx[&a], idx[&b])))
        .closure(ClosureMode::ReflexiveTransitive);
    let rel = Relation::from_pairs(
        n,
        clip.tri_edges().chain(extra.iter().copied()).map(|(a, b)| (idx[&a], idx[&b])),
    )
    .closure(ClosureMode::Transitive);
    let frame = Frame::new(leq, rel).map_err(|e| ClipError::Invariant(e.to_string()))?;
    let valuation: Valuation = oracle
        .closure()
        .seed()
        .atoms()
        .into_iter()
        .map(|p| {
            let set = BitSet::from_indices(n, (0..n).filter(|&w| oracle.atom_holds(clip.tip(tips[w]).world, &p)));
            (p, set)
        })
        .collect();
    let model = Model::new(frame, valuation).map_err(|e| ClipError::Invariant(e.to_string()))?;
    Ok(SaturatedModel {
        model,
        tips,
        loop_edges: extra.to_vec(),
    })
}

/// The saturated model of a finished run.
pub fn build_saturated_model<O: WorldOracle>(
    r: &SaturationResult<O::World>,
    oracle: &O,
) -> Result<SaturatedModel, ClipError> {
    assemble_model(&r.clip, oracle, &loop_back_edges(r))
}

/// A closure member on which a tip and its world disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthViolation {
    pub tip: TipId,
    pub formula: SubformulaId,
    /// Whether the tip forces the member in the saturated model.
    pub at_tip: bool,
}

/// Every tip and closure member where satisfaction in the saturated model
/// differs from satisfaction at the tip's oracle world.
pub fn check_truth_lemma<O: WorldOracle>(
    clip: &Clip<O::World>,
    oracle: &O,
    m: &SaturatedModel,
) -> Vec<TruthViolation> {
    let ext = closure_extensions(&m.model, oracle.closure(), Variant::BD);
    let mut out = Vec::new();
    for (w, &tip) in m.tips.iter().enumerate() {
        let trace = oracle.trace(clip.tip(tip).world);
        for (f, set) in ext.iter().enumerate() {
            if set.contains(w) != trace.contains(f) {
                out.push(TruthViolation {
                    tip,
                    formula: f,
                    at_tip: set.contains(w),
                });
            }
        }
    }
    out
}
