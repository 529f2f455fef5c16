//! Line-oriented proof files and their checker.
//!
//! ```text
//! # comment
//! 1. [](p | q) -> <>p | []q ; AX Ad
//! 2. <>p -> <>p | q ; AX OrI1 sub p=<>p,q=q
//! 3. p -> p ; IPL
//! 4. []p -> []p ; RBOX 3
//! ```
//!
//! Justifications are `AX name [sub p=A,...]`, `MP i j` (line `j` is line
//! `i` implies the current line), `RBOX i`, `RDIA i`, `SUBST i p=A,...`,
//! `IPL i,j,...` and `HYP`. Substitution is offered as a line rule for
//! convenience even though it is a closure property of the logic rather
//! than an inference rule. A proof using `HYP` lines certifies that its
//! last line is derivable whenever its hypotheses are.

use super::ipl::{freeze_all, provable};
use super::{apply_subst, match_schema, schema, Subst};
use crate::formula::{parse, Formula};
use std::fmt::{self, Write};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Axiom { schema: String, subst: Option<Subst> },
    Mp(usize, usize),
    RBox(usize),
    RDia(usize),
    Subst(usize, Subst),
    Ipl(Vec<usize>),
    Hyp,
}

impl Justification {
    pub fn cited(&self) -> Vec<usize> {
        match self {
            Justification::Mp(i, j) => vec![*i, *j],
            Justification::RBox(i) | Justification::RDia(i) | Justification::Subst(i, _) => vec![*i],
            Justification::Ipl(cs) => cs.clone(),
            Justification::Axiom { .. } | Justification::Hyp => vec![],
        }
    }
}

fn write_subst(s: &Subst, out: &mut impl Write) -> fmt::Result {
    for (k, (p, a)) in s.iter().enumerate() {
        if k > 0 {
            out.write_char(',')?;
        }
        write!(out, "{p}={a}")?;
    }
    Ok(())
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom { schema, subst } => {
                write!(f, "AX {schema}")?;
                if let Some(s) = subst {
                    f.write_str(" sub ")?;
                    write_subst(s, f)?;
                }
                Ok(())
            }
            Justification::Mp(i, j) => write!(f, "MP {i} {j}"),
            Justification::RBox(i) => write!(f, "RBOX {i}"),
            Justification::RDia(i) => write!(f, "RDIA {i}"),
            Justification::Subst(i, s) => {
                write!(f, "SUBST {i} ")?;
                write_subst(s, f)
            }
            Justification::Ipl(cs) => {
                f.write_str("IPL")?;
                for (k, c) in cs.iter().enumerate() {
                    write!(f, "{}{c}", if k == 0 { " " } else { "," })?;
                }
                Ok(())
            }
            Justification::Hyp => f.write_str("HYP"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

/// Lines are numbered from 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("file line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("proof line {line} cites line {cited}, which does not precede it")]
    BadReference { line: usize, cited: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofReport {
    pub ok: bool,
    pub lines_checked: usize,
    pub first_bad_line: Option<usize>,
    pub message: Option<String>,
}

fn parse_subst(text: &str) -> Result<Subst, String> {
    let mut out = Subst::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (p, a) = item.split_once('=').ok_or_else(|| format!("expected `atom=formula`, found `{item}`"))?;
        let Formula::Atom(p) = parse(p.trim()).map_err(|e| e.to_string())? else {
            return Err(format!("`{}` is not an atom", p.trim()));
        };
        let a = parse(a.trim()).map_err(|e| e.to_string())?;
        if out.insert(p.clone(), a).is_some() {
            return Err(format!("`{p}` substituted twice"));
        }
    }
    Ok(out)
}

fn parse_index(w: &str) -> Result<usize, String> {
    w.parse().map_err(|_| format!("expected a line number, found `{w}`"))
}

fn parse_justification(text: &str) -> Result<Justification, String> {
    let text = text.trim();
    let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let indices = |s: &str| -> Result<Vec<usize>, String> {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|w| !w.is_empty())
            .map(parse_index)
            .collect()
    };
    let single = |s: &str| -> Result<usize, String> {
        match indices(s)?.as_slice() {
            [i] => Ok(*i),
            _ => Err(format!("`{head}` takes one line number")),
        }
    };
    match head.to_ascii_uppercase().as_str() {
        "AX" => {
            let (name, tail) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            if name.is_empty() {
                return Err("`AX` needs a schema name".into());
            }
            let name = schema(name).ok_or_else(|| format!("unknown schema `{name}`"))?.name;
            let tail = tail.trim();
            let subst = if tail.is_empty() {
                None
            } else {
                let body = tail.strip_prefix("sub").ok_or_else(|| format!("expected `sub`, found `{tail}`"))?;
                Some(parse_subst(body)?)
            };
            Ok(Justification::Axiom { schema: name.to_string(), subst })
        }
        "MP" => match indices(rest)?.as_slice() {
            [i, j] => Ok(Justification::Mp(*i, *j)),
            _ => Err("`MP` takes two line numbers".into()),
        },
        "RBOX" => Ok(Justification::RBox(single(rest)?)),
        "RDIA" => Ok(Justification::RDia(single(rest)?)),
        "SUBST" => {
            let (i, s) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            Ok(Justification::Subst(parse_index(i)?, parse_subst(s)?))
        }
        "IPL" => Ok(Justification::Ipl(indices(rest)?)),
        "HYP" if rest.is_empty() => Ok(Justification::Hyp),
        "HYP" => Err("`HYP` takes no arguments".into()),
        _ => Err(format!("unknown justification `{head}`")),
    }
}

/// Parses a proof file. Line numbers must run 1, 2, 3... in order; `#`
/// starts a comment.
pub fn parse_proof(text: &str) -> Result<Proof, ProofError> {
    let mut proof = Proof::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| ProofError::Syntax { line, message };
        let (num, rest) = content
            .split_once('.')
            .ok_or_else(|| syntax("expected `n. formula ; justification`".into()))?;
        let num = parse_index(num.trim()).map_err(syntax)?;
        if num != proof.lines.len() + 1 {
            return Err(syntax(format!("expected line number {}, found {num}", proof.lines.len() + 1)));
        }
        let (formula, just) = rest.split_once(';').ok_or_else(|| syntax("missing `;` before the justification".into()))?;
        let formula = parse(formula.trim()).map_err(|e| syntax(e.to_string()))?;
        let justification = parse_justification(just).map_err(syntax)?;
        proof.lines.push(ProofLine { formula, justification });
    }
    Ok(proof)
}

pub fn render_proof(p: &Proof) -> String {
    let mut out = String::new();
    for (k, l) in p.lines.iter().enumerate() {
        let _ = writeln!(out, "{}. {} ; {}", k + 1, l.formula, l.justification);
    }
    out
}

/// Why a single line fails, or `None` when its justification holds.
fn check_line(p: &Proof, n: usize) -> Option<String> {
    let line = &p.lines[n - 1];
    let cur = &line.formula;
    let at = |i: usize| &p.lines[i - 1].formula;
    match &line.justification {
        Justification::Hyp => None,
        Justification::Axiom { schema: name, subst } => {
            let s = schema(name).expect("parsed schema names exist");
            match subst {
                Some(sigma) if apply_subst(&s.pattern, sigma) == *cur => None,
                Some(_) => Some(format!("not the stated instance of {name}")),
                None if match_schema(s, cur).is_some() => None,
                None => Some(format!("not an instance of {name}")),
            }
        }
        Justification::Mp(i, j) => {
            (*at(*j) != Formula::implies(at(*i).clone(), cur.clone())).then(|| format!("line {j} is not line {i} -> this line"))
        }
        Justification::RBox(i) | Justification::RDia(i) => {
            let modal: fn(Formula) -> Formula = match line.justification {
                Justification::RBox(_) => Formula::boxed,
                _ => Formula::dia,
            };
            match at(*i) {
                Formula::Implies(a, b) if *cur == Formula::implies(modal((**a).clone()), modal((**b).clone())) => None,
                Formula::Implies(..) => Some(format!("not the modal image of line {i}")),
                _ => Some(format!("line {i} is not an implication")),
            }
        }
        Justification::Subst(i, sigma) => {
            (apply_subst(at(*i), sigma) != *cur).then(|| format!("not the substitution instance of line {i}"))
        }
        Justification::Ipl(cs) => {
            let mut all: Vec<Formula> = cs.iter().map(|&c| at(c).clone()).collect();
            all.push(cur.clone());
            let frozen = freeze_all(&all);
            let (goal, premises) = frozen.split_last().expect("nonempty");
            let goal = premises.iter().rev().fold(goal.clone(), |acc, h| Formula::implies(h.clone(), acc));
            (!provable(&goal)).then(|| "not an intuitionistic consequence of the cited lines".to_string())
        }
    }
}

/// Checks every line in order and stops at the first that fails.
pub fn check_proof(p: &Proof) -> Result<ProofReport, ProofError> {
    for (k, l) in p.lines.iter().enumerate() {
        let line = k + 1;
        if let Some(&cited) = l.justification.cited().iter().find(|&&c| c == 0 || c >= line) {
            return Err(ProofError::BadReference { line, cited });
        }
    }
    for n in 1..=p.lines.len() {
        if let Some(message) = check_line(p, n) {
            return Ok(ProofReport {
                ok: false,
                lines_checked: n,
                first_bad_line: Some(n),
                message: Some(message),
            });
        }
    }
    Ok(ProofReport {
        ok: true,
        lines_checked: p.lines.len(),
        first_bad_line: None,
        message: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const AD_DERIVED: &str = include_str!("../../../../fixtures/lemma-ad-derived.prf");
    const DIA_RULE: &str = include_str!("../../../../fixtures/lemma-dia-rule-derived.prf");

    #[test]
    fn fixtures_check() {
        for text in [AD_DERIVED, DIA_RULE] {
            let p = parse_proof(text).unwrap();
            let r = check_proof(&p).unwrap();
            assert!(r.ok, "{r:?}");
            assert_eq!(parse_proof(&render_proof(&p)).unwrap(), p);
        }
    }

    #[test]
    fn single_rules() {
        let ok = |t: &str| check_proof(&parse_proof(t).unwrap()).unwrap().ok;
        assert!(ok("1. p -> q ; HYP\n2. p ; HYP\n3. q ; MP 2 1"));
        assert!(!ok("1. p -> q ; HYP\n2. p ; HYP\n3. q ; MP 1 2"));
        assert!(ok("1. p -> q ; HYP\n2. []p -> []q ; RBOX 1"));
        assert!(!ok("1. p -> q ; HYP\n2. <>p -> <>q ; RBOX 1"));
        assert!(ok("1. p -> q ; HYP\n2. <>p -> <>q ; RDIA 1"));
        assert!(ok("1. []p -> [][]p ; AX 4box\n2. []<>q -> [][]<>q ; SUBST 1 p=<>q"));
        assert!(ok("1. []T ; AX N□"));
        assert!(ok("1. ~<>F ; AX Ndia"));
        assert!(!ok("1. <>p -> []p ; AX Ad"));
        assert!(ok("1. <>q -> <>q | r ; AX OrI1 sub p=<>q,q=r"));
        assert!(!ok("1. <>q -> <>q | r ; AX OrI1 sub p=q,q=r"));
        assert!(ok("1. p ; HYP\n2. q ; HYP\n3. q & p ; IPL 1,2"));
        assert!(!ok("1. p ; HYP\n2. q & p ; IPL 1"));
    }

    #[test]
    fn reference_and_syntax_errors() {
        let p = parse_proof("1. p ; HYP\n2. p ; MP 2 1").unwrap();
        assert_eq!(check_proof(&p), Err(ProofError::BadReference { line: 2, cited: 2 }));
        let p = parse_proof("1. p ; IPL 0").unwrap();
        assert_eq!(check_proof(&p), Err(ProofError::BadReference { line: 1, cited: 0 }));
        assert!(matches!(parse_proof("2. p ; HYP"), Err(ProofError::Syntax { line: 1, .. })));
        assert!(matches!(parse_proof("# c\n1. p ; AX Nope"), Err(ProofError::Syntax { line: 2, .. })));
        assert!(matches!(parse_proof("1. p HYP"), Err(ProofError::Syntax { .. })));
        assert!(matches!(parse_proof("1. p ; MP 1"), Err(ProofError::Syntax { .. })));
    }

    #[test]
    fn failure_points_at_the_first_bad_line() {
        let p = parse_proof("1. p ; HYP\n2. q ; IPL 1\n3. p ; IPL 1").unwrap();
        let r = check_proof(&p).unwrap();
        assert_eq!((r.ok, r.first_bad_line), (false, Some(2)));
    }
}
