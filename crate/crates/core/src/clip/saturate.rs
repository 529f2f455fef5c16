use super::{run_repair_procedure, slice, validate, Clip, ClipError, Defect, Procedure, TipId, SENTINEL};
use crate::formula::LabelPoset;
use crate::ltree::{is_dreary, Embedding, LabelledTree};
use crate::oracle::WorldOracle;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaturationConfig {
    /// Give up once the clip holds more tips than this.
    pub max_tips: usize,
    /// Record every repair and dreary check.
    pub record_trace: bool,
    /// Validate the clip and its slices after every repair.
    pub check_invariants: bool,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        SaturationConfig {
            max_tips: 100_000,
            record_trace: false,
            check_invariants: cfg!(debug_assertions),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Repair { defect: Defect, new_tip: TipId },
    /// The dreary check after the maximality pass at rank `alpha`, with the
    /// equivalent earlier index if one was found.
    DrearyCheck { alpha: usize, witness: Option<usize> },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Repair { defect, new_tip } => write!(
                f,
                "rank {} height {}: repaired {} with tip {new_tip}",
                defect.rank, defect.height, defect.kind
            ),
            TraceEvent::DrearyCheck { alpha, witness: None } => {
                write!(f, "rank {alpha}: no earlier slice is equivalent")
            }
            TraceEvent::DrearyCheck {
                alpha,
                witness: Some(m),
            } => write!(f, "rank {alpha}: slice {alpha} is equivalent to slice {m}; halting"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SaturationResult<W> {
    pub clip: Clip<W>,
    pub alpha_f: usize,
    pub beta_f: usize,
    /// Embedding of slice `alpha_f` into slice `beta_f`, on tip ids.
    pub loop_embedding: BTreeMap<TipId, TipId>,
    pub poset: Arc<LabelPoset>,
    pub trace: Vec<TraceEvent>,
}

impl<W: Copy + Ord + fmt::Debug> SaturationResult<W> {
    /// Number of tips at each rank `0..=alpha_f`.
    pub fn slice_sizes(&self) -> Vec<usize> {
        (0..=self.alpha_f).map(|a| self.clip.rank_tips(a).count()).collect()
    }
}

fn tip_map(e: &Embedding) -> Result<BTreeMap<TipId, TipId>, ClipError> {
    let mut out = BTreeMap::new();
    for (&a, &b) in &e.map {
        match (a == SENTINEL, b == SENTINEL) {
            (true, _) => {}
            (false, false) => {
                out.insert(a, b);
            }
            (false, true) => {
                return Err(ClipError::Invariant(format!("loop embedding sends tip {a} to the root")));
            }
        }
    }
    Ok(out)
}

/// Runs the saturation procedure from the oracle world `s0`: starting from
/// the initial clip at rank 0, repair maximality defects, stop if slices
/// `1..=α` form a dreary family, otherwise repair accessibility, downward
/// and forward confluence defects, and move to rank `α + 1`.
pub fn saturate<O: WorldOracle>(
    oracle: &O,
    s0: O::World,
    config: &SaturationConfig,
) -> Result<SaturationResult<O::World>, ClipError> {
    let poset = Arc::new(LabelPoset::new(oracle.closure().clone()));
    let mut clip = Clip::initial(s0);
    let mut trace = Vec::new();
    // Slices 1..alpha are final once their rank has been passed.
    let mut family: Vec<LabelledTree<LabelPoset>> = Vec::new();
    let mut alpha = 0;
    loop {
        pass(&mut clip, oracle, Procedure::Maximality, alpha, config, &poset, &mut trace)?;
        if alpha > 0 {
            family.push(slice(&clip, oracle, &poset, alpha)?);
        }
        let witness = is_dreary(&family)?;
        if config.record_trace {
            trace.push(TraceEvent::DrearyCheck {
                alpha,
                witness: witness.as_ref().map(|w| w.index),
            });
        }
        if let Some(w) = witness {
            return Ok(SaturationResult {
                clip,
                alpha_f: alpha,
                beta_f: w.index,
                loop_embedding: tip_map(&w.forward)?,
                poset,
                trace,
            });
        }
        for proc in [Procedure::Accessibility, Procedure::Dc, Procedure::Fc] {
            pass(&mut clip, oracle, proc, alpha, config, &poset, &mut trace)?;
        }
        alpha += 1;
    }
}

fn pass<O: WorldOracle>(
    clip: &mut Clip<O::World>,
    oracle: &O,
    proc: Procedure,
    alpha: usize,
    config: &SaturationConfig,
    poset: &Arc<LabelPoset>,
    trace: &mut Vec<TraceEvent>,
) -> Result<(), ClipError> {
    run_repair_procedure(clip, oracle, proc, alpha, |c, d, new| {
        if c.len() > config.max_tips {
            return Err(ClipError::BudgetExceeded(config.max_tips));
        }
        if config.record_trace {
            trace.push(TraceEvent::Repair {
                defect: *d,
                new_tip: new,
            });
        }
        if config.check_invariants {
            let report = validate(c, oracle);
            if let Some(v) = report.violations.first() {
                return Err(ClipError::Invariant(format!("after repairing the {}: {v}", d.kind)));
            }
            for rank in [alpha, alpha + 1] {
                slice(c, oracle, poset, rank)?;
            }
        }
        Ok(())
    })
}
