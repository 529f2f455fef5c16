use super::{Clip, ClipError, TipId};
use crate::formula::{ClosureNode, SubformulaId};
use crate::oracle::{WitnessKind, WorldOracle};
use std::fmt;

/// A defect together with the rank and height of its first tip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Defect {
    pub kind: DefectKind,
    pub rank: usize,
    pub height: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DefectKind {
    /// `B → C` fails at the tip, the tip's world is not maximal for it, and
    /// no `≪`-successor refutes it. `formula` is the position of `B → C`.
    Maximality { tip: TipId, formula: SubformulaId },
    /// `□B` fails at the tip and every `▷`-successor forces `B`.
    Box { tip: TipId, formula: SubformulaId },
    /// `◇B` holds at the tip and no `▷`-successor forces `B`.
    Dia { tip: TipId, formula: SubformulaId },
    /// `i ≪ j ▷ k` with no `l` such that `i ▷ l ≪ k`.
    Dc { i: TipId, j: TipId, k: TipId },
    /// `j ≪ i`, `j ▷ k`, with no `l` such that `i ▷ l` and `k ≪ l`.
    Fc { i: TipId, j: TipId, k: TipId },
}

impl DefectKind {
    pub fn first_tip(&self) -> TipId {
        match *self {
            DefectKind::Maximality { tip, .. } | DefectKind::Box { tip, .. } | DefectKind::Dia { tip, .. } => tip,
            DefectKind::Dc { i, .. } | DefectKind::Fc { i, .. } => i,
        }
    }

    pub fn procedure(&self) -> Procedure {
        match self {
            DefectKind::Maximality { .. } => Procedure::Maximality,
            DefectKind::Box { .. } | DefectKind::Dia { .. } => Procedure::Accessibility,
            DefectKind::Dc { .. } => Procedure::Dc,
            DefectKind::Fc { .. } => Procedure::Fc,
        }
    }
}

impl fmt::Display for DefectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefectKind::Maximality { tip, formula } => write!(f, "maximality at tip {tip} for #{formula}"),
            DefectKind::Box { tip, formula } => write!(f, "box at tip {tip} for #{formula}"),
            DefectKind::Dia { tip, formula } => write!(f, "dia at tip {tip} for #{formula}"),
            DefectKind::Dc { i, j, k } => write!(f, "downward confluence at ({i}, {j}, {k})"),
            DefectKind::Fc { i, j, k } => write!(f, "forward confluence at ({i}, {j}, {k})"),
        }
    }
}

/// The four repair procedures. Accessibility covers both box and dia
/// defects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Procedure {
    Maximality,
    Accessibility,
    Dc,
    Fc,
}

impl Procedure {
    pub const ALL: [Procedure; 4] = [
        Procedure::Maximality,
        Procedure::Accessibility,
        Procedure::Dc,
        Procedure::Fc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Procedure::Maximality => "maximality",
            Procedure::Accessibility => "accessibility",
            Procedure::Dc => "downward confluence",
            Procedure::Fc => "forward confluence",
        }
    }
}

impl fmt::Display for Procedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Defects of the tip `id` handled by `proc`, in formula or edge order.
fn tip_defects<O: WorldOracle>(
    clip: &Clip<O::World>,
    oracle: &O,
    proc: Procedure,
    id: TipId,
) -> Result<Vec<DefectKind>, ClipError> {
    let closure = oracle.closure();
    let tip = clip.tip(id);
    let trace = oracle.trace(tip.world);
    let mut out = Vec::new();
    match proc {
        Procedure::Maximality => {
            for f in 0..closure.len() {
                if matches!(closure.node(f), ClosureNode::Implies(..))
                    && !trace.contains(f)
                    && !oracle.is_maximal(tip.world, f)?
                    && clip
                        .lt_successors(id)
                        .all(|j| oracle.trace(clip.tip(j).world).contains(f))
                {
                    out.push(DefectKind::Maximality { tip: id, formula: f });
                }
            }
        }
        Procedure::Accessibility => {
            for f in 0..closure.len() {
                let mut succ = clip.tri_successors(id).map(|j| oracle.trace(clip.tip(j).world));
                match *closure.node(f) {
                    ClosureNode::Box(b) if !trace.contains(f) && succ.all(|t| t.contains(b)) => {
                        out.push(DefectKind::Box { tip: id, formula: f });
                    }
                    ClosureNode::Dia(b) if trace.contains(f) && succ.all(|t| !t.contains(b)) => {
                        out.push(DefectKind::Dia { tip: id, formula: f });
                    }
                    _ => {}
                }
            }
        }
        Procedure::Dc => {
            for j in clip.lt_successors(id) {
                for k in clip.tri_successors(j) {
                    if !clip.tri_successors(id).any(|l| clip.lt(l, k)) {
                        out.push(DefectKind::Dc { i: id, j, k });
                    }
                }
            }
        }
        Procedure::Fc => {
            for j in clip.lt_predecessors(id) {
                for k in clip.tri_successors(j) {
                    if !clip.tri_successors(id).any(|l| clip.lt(k, l)) {
                        out.push(DefectKind::Fc { i: id, j, k });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Defects of one procedure's kinds at rank `alpha` (and height `height`
/// when given), ordered by first tip id, then formula or edge.
pub fn find_defects<O: WorldOracle>(
    clip: &Clip<O::World>,
    oracle: &O,
    proc: Procedure,
    alpha: usize,
    height: Option<usize>,
) -> Result<Vec<Defect>, ClipError> {
    let mut out = Vec::new();
    for tip in clip.rank_tips(alpha) {
        if height.is_some_and(|h| h != tip.height) {
            continue;
        }
        for kind in tip_defects(clip, oracle, proc, tip.id)? {
            out.push(Defect {
                kind,
                rank: tip.rank,
                height: tip.height,
            });
        }
    }
    Ok(out)
}

/// Whether the clip has no defects of `proc`'s kinds below rank `alpha`.
pub fn is_clean<O: WorldOracle>(
    clip: &Clip<O::World>,
    oracle: &O,
    proc: Procedure,
    alpha: usize,
) -> Result<bool, ClipError> {
    for rank in 0..alpha {
        if !find_defects(clip, oracle, proc, rank, None)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The number of closure members that fail at the tip's world while the
/// world is not maximal for them.
pub fn degree<O: WorldOracle>(clip: &Clip<O::World>, oracle: &O, id: TipId) -> Result<usize, ClipError> {
    let world = clip.tip(id).world;
    let trace = oracle.trace(world);
    let mut n = 0;
    for f in 0..oracle.closure().len() {
        if !trace.contains(f) && !oracle.is_maximal(world, f)? {
            n += 1;
        }
    }
    Ok(n)
}

fn is_current<O: WorldOracle>(clip: &Clip<O::World>, oracle: &O, d: &Defect) -> Result<bool, ClipError> {
    let id = d.kind.first_tip();
    if !clip.contains(id) {
        return Ok(false);
    }
    Ok(tip_defects(clip, oracle, d.kind.procedure(), id)?.contains(&d.kind))
}

fn witness<W>(found: Option<W>, d: &Defect) -> Result<W, ClipError> {
    found.ok_or_else(|| ClipError::Invariant(format!("the oracle has no witness for the {}", d.kind)))
}

/// Repairs a current defect by adding one fresh tip and its edges; returns
/// the new tip's id.
pub fn repair_defect<O: WorldOracle>(
    clip: &mut Clip<O::World>,
    oracle: &O,
    d: &Defect,
) -> Result<TipId, ClipError> {
    if !is_current(clip, oracle, d)? {
        return Err(ClipError::NotADefect(d.kind.to_string()));
    }
    let tip = *clip.tip(d.kind.first_tip());
    let closure = oracle.closure().clone();
    let new = match d.kind {
        DefectKind::Maximality { formula, .. } => {
            let t = witness(oracle.maximal_extension(tip.world, formula)?, d)?;
            let new = clip.add_tip(t, tip.rank, tip.height + 1);
            clip.add_lt(tip.id, new);
            new
        }
        DefectKind::Box { formula, .. } | DefectKind::Dia { formula, .. } => {
            let (ClosureNode::Box(b) | ClosureNode::Dia(b)) = *closure.node(formula) else {
                unreachable!("accessibility defects name modal formulas");
            };
            let kind = if matches!(d.kind, DefectKind::Box { .. }) {
                WitnessKind::BoxRefuter(b)
            } else {
                WitnessKind::DiaSupporter(b)
            };
            let t = witness(oracle.successor_witness(tip.world, kind)?, d)?;
            let new = clip.add_tip(t, tip.rank + 1, tip.height);
            clip.add_tri(tip.id, new);
            new
        }
        DefectKind::Dc { k, .. } => {
            if let Some(p) = clip.lt_predecessors(k).next() {
                return Err(ClipError::Invariant(format!(
                    "{} but {k} already has the <<-predecessor {p}",
                    d.kind
                )));
            }
            let u = clip.tip(k).world;
            let v = witness(oracle.successor_witness(tip.world, WitnessKind::Dc(u))?, d)?;
            let new = clip.add_tip(v, tip.rank + 1, tip.height);
            clip.add_tri(tip.id, new);
            clip.add_lt(new, k);
            new
        }
        DefectKind::Fc { k, .. } => {
            let u = clip.tip(k).world;
            let v = witness(oracle.successor_witness(tip.world, WitnessKind::Fc(u))?, d)?;
            let new = clip.add_tip(v, tip.rank + 1, tip.height);
            clip.add_tri(tip.id, new);
            clip.add_lt(k, new);
            new
        }
    };
    Ok(new)
}

/// Repairs every defect of `proc`'s kinds at rank `alpha`, one height at a
/// time: upward from 0, except downward confluence which works down from
/// the largest height at rank `alpha`. Each height's defects are listed
/// first and then repaired in order, skipping any that an earlier repair
/// in the batch already resolved. `on_repair` sees each repair.
pub fn run_repair_procedure<O: WorldOracle>(
    clip: &mut Clip<O::World>,
    oracle: &O,
    proc: Procedure,
    alpha: usize,
    mut on_repair: impl FnMut(&Clip<O::World>, &Defect, TipId) -> Result<(), ClipError>,
) -> Result<(), ClipError> {
    let Some(top) = clip.rank_height(alpha) else {
        return Ok(());
    };
    // The maximality procedure may climb one height per closure member;
    // the others never exceed the current top.
    let limit = top + oracle.closure().len() + 1;
    let mut height = if proc == Procedure::Dc { top as isize } else { 0 };
    while !find_defects(clip, oracle, proc, alpha, None)?.is_empty() {
        if height < 0 || height as usize > limit {
            return Err(ClipError::Invariant(format!(
                "{proc} defects remain at rank {alpha} past height {height}"
            )));
        }
        for d in find_defects(clip, oracle, proc, alpha, Some(height as usize))? {
            if is_current(clip, oracle, &d)? {
                let new = repair_defect(clip, oracle, &d)?;
                on_repair(clip, &d, new)?;
            }
        }
        height += if proc == Procedure::Dc { -1 } else { 1 };
    }
    Ok(())
}
