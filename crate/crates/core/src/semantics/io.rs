//! Line-oriented model files.
//!
//! ```text
//! # comment
//! worlds 3
//! le 0 1        # generator of the preorder; closed on load
//! r 1 2         # modal edge, taken verbatim
//! val p 1 2     # worlds where p holds
//! ```

use super::{Frame, Model, SemanticsError, Valuation};
use crate::bitset::BitSet;
use crate::formula::Atom;
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate `worlds` line")]
    DuplicateWorlds { line: usize },
    #[error("missing `worlds` line")]
    MissingWorlds,
    #[error("line {line}: world {world} out of range for {size} worlds")]
    WorldOutOfRange { line: usize, world: usize, size: usize },
    #[error("line {line}: duplicate valuation for `{atom}`")]
    DuplicateAtom { line: usize, atom: Atom },
    #[error(transparent)]
    Invalid(#[from] SemanticsError),
}

fn is_atom(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some('a'..='z'))
        && cs.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

pub fn parse_model(text: &str) -> Result<Model, ModelFileError> {
    let mut size: Option<usize> = None;
    let mut le = Vec::new();
    let mut r = Vec::new();
    let mut vals: Vec<(usize, Atom, Vec<usize>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut words = content.split_whitespace();
        let Some(head) = words.next() else { continue };
        let rest: Vec<&str> = words.collect();
        let syntax = |message: String| ModelFileError::Syntax { line, message };
        let numbers = |items: &[&str]| -> Result<Vec<usize>, ModelFileError> {
            items
                .iter()
                .map(|w| {
                    w.parse::<usize>()
                        .map_err(|_| syntax(format!("expected a world number, found `{w}`")))
                })
                .collect()
        };
        let world_count = |size: Option<usize>| size.ok_or(ModelFileError::Syntax {
            line,
            message: "`worlds` must come first".into(),
        });
        let check = |w: usize, n: usize| {
            if w >= n {
                Err(ModelFileError::WorldOutOfRange { line, world: w, size: n })
            } else {
                Ok(())
            }
        };
        match head {
            "worlds" => {
                if size.is_some() {
                    return Err(ModelFileError::DuplicateWorlds { line });
                }
                let ns = numbers(&rest)?;
                if ns.len() != 1 {
                    return Err(syntax("`worlds` takes exactly one number".into()));
                }
                if ns[0] == 0 {
                    return Err(syntax("a model needs at least one world".into()));
                }
                size = Some(ns[0]);
            }
            "le" | "r" => {
                let n = world_count(size)?;
                let ns = numbers(&rest)?;
                if ns.len() != 2 {
                    return Err(syntax(format!("`{head}` takes exactly two worlds")));
                }
                check(ns[0], n)?;
                check(ns[1], n)?;
                if head == "le" {
                    le.push((ns[0], ns[1]));
                } else {
                    r.push((ns[0], ns[1]));
                }
            }
            "val" => {
                let n = world_count(size)?;
                let Some((atom, worlds)) = rest.split_first() else {
                    return Err(syntax("`val` needs an atom".into()));
                };
                if !is_atom(atom) {
                    return Err(syntax(format!("`{atom}` is not an atom name")));
                }
                let ws = numbers(worlds)?;
                for &w in &ws {
                    check(w, n)?;
                }
                let atom = Atom::from(*atom);
                if vals.iter().any(|(_, a, _)| *a == atom) {
                    return Err(ModelFileError::DuplicateAtom { line, atom });
                }
                vals.push((line, atom, ws));
            }
            other => return Err(syntax(format!("unknown directive `{other}`"))),
        }
    }

    let n = size.ok_or(ModelFileError::MissingWorlds)?;
    let frame = Frame::from_generators(n, le, r)?;
    let valuation: Valuation = vals
        .into_iter()
        .map(|(_, atom, ws)| (atom, BitSet::from_indices(n, ws)))
        .collect();
    Ok(Model::new(frame, valuation)?)
}

/// Writes every non-reflexive pair of the closed preorder, so that loading
/// the output reproduces the model exactly.
pub fn render_model(m: &Model) -> String {
    let mut out = String::new();
    writeln!(out, "worlds {}", m.size()).unwrap();
    for (a, b) in m.frame().leq().pairs().filter(|(a, b)| a != b) {
        writeln!(out, "le {a} {b}").unwrap();
    }
    for (a, b) in m.frame().rel().pairs() {
        writeln!(out, "r {a} {b}").unwrap();
    }
    for (atom, set) in m.valuation() {
        write!(out, "val {atom}").unwrap();
        for w in set.iter() {
            write!(out, " {w}").unwrap();
        }
        out.push('\n');
    }
    out
}
