//! Minimal-parenthesis printer, the inverse of [`super::parse`].

use super::Formula;

// Binding strength; higher binds tighter.
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const PREFIX: u8 = 4;
const ATOMIC: u8 = 5;

fn strength(f: &Formula) -> u8 {
    match f {
        Formula::Atom(_) | Formula::Top | Formula::Bot => ATOMIC,
        Formula::Box(_) | Formula::Dia(_) => PREFIX,
        Formula::Implies(_, rhs) if **rhs == Formula::Bot => PREFIX,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
    }
}

pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write(f, 0, &mut out);
    out
}

/// Writes `f`, parenthesised when it binds more loosely than `min`.
fn write(f: &Formula, min: u8, out: &mut String) {
    let wrap = strength(f) < min;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::Atom(name) => out.push_str(name),
        Formula::Top => out.push('T'),
        Formula::Bot => out.push('F'),
        Formula::Box(a) => {
            out.push_str("[]");
            write(a, PREFIX, out);
        }
        Formula::Dia(a) => {
            out.push_str("<>");
            write(a, PREFIX, out);
        }
        Formula::Implies(a, b) if **b == Formula::Bot => {
            out.push('~');
            write(a, PREFIX, out);
        }
        Formula::Implies(a, b) => {
            write(a, IMPLIES + 1, out);
            out.push_str(" -> ");
            write(b, IMPLIES, out);
        }
        Formula::Or(a, b) => {
            write(a, OR, out);
            out.push_str(" | ");
            write(b, OR + 1, out);
        }
        Formula::And(a, b) => {
            write(a, AND, out);
            out.push_str(" & ");
            write(b, AND + 1, out);
        }
    }
    if wrap {
        out.push(')');
    }
}
