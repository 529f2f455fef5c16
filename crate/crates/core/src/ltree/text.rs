//! Parenthesised tree syntax: `(label child child ...)`, e.g.
//! `(-1 ({0}) ({0,1} ({0,1,2})))`. Node ids are assigned in preorder.

use super::{FinitePoset, LabelledTree, NodeId};
use std::sync::Arc;

pub fn parse_tree<P: FinitePoset>(poset: Arc<P>, text: &str) -> Result<LabelledTree<P>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut entries = Vec::new();
    parse_node(&*poset, &chars, &mut pos, None, &mut entries)?;
    skip_ws(&chars, &mut pos);
    if pos != chars.len() {
        return Err(format!("trailing input at position {pos}"));
    }
    LabelledTree::from_nodes(poset, entries).map_err(|e| e.to_string())
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_node<P: FinitePoset>(
    poset: &P,
    chars: &[char],
    pos: &mut usize,
    parent: Option<NodeId>,
    out: &mut Vec<(NodeId, Option<NodeId>, P::Label)>,
) -> Result<(), String> {
    skip_ws(chars, pos);
    if chars.get(*pos) != Some(&'(') {
        return Err(format!("expected `(` at position {pos}"));
    }
    *pos += 1;
    skip_ws(chars, pos);
    let start = *pos;
    let mut depth = 0;
    while *pos < chars.len() {
        match chars[*pos] {
            '{' => depth += 1,
            '}' => depth -= 1,
            '(' | ')' if depth == 0 => break,
            c if c.is_whitespace() && depth == 0 => break,
            _ => {}
        }
        *pos += 1;
    }
    let word: String = chars[start..*pos].iter().collect();
    let label = poset
        .parse_label(&word)
        .ok_or_else(|| format!("bad label `{word}` at position {start}"))?;
    let id = out.len();
    out.push((id, parent, label));
    loop {
        skip_ws(chars, pos);
        match chars.get(*pos) {
            Some(')') => {
                *pos += 1;
                return Ok(());
            }
            Some('(') => parse_node(poset, chars, pos, Some(id), out)?,
            _ => return Err(format!("expected `(` or `)` at position {pos}")),
        }
    }
}

pub fn render_tree<P: FinitePoset>(t: &LabelledTree<P>) -> String {
    fn go<P: FinitePoset>(t: &LabelledTree<P>, n: NodeId, out: &mut String) {
        out.push('(');
        out.push_str(&t.poset().format_label(t.label(n)));
        for &c in t.children(n) {
            out.push(' ');
            go(t, c, out);
        }
        out.push(')');
    }
    let mut out = String::new();
    go(t, t.root(), &mut out);
    out
}
