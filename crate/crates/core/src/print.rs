//! Canonical s-expression printer: single-space separation, lowercase
//! keywords, bit-exact round trip with the parser.

use crate::formula::{Atom, BoundKind, Formula, NamedConst, Term};

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Const(n) => out.push_str(&n.to_string()),
        Term::Named(NamedConst::K(i)) => {
            out.push('K');
            out.push_str(&i.to_string());
        }
        Term::Named(NamedConst::C(i)) => {
            out.push('C');
            out.push_str(&i.to_string());
        }
        Term::E(n) => {
            out.push_str("(E ");
            out.push_str(&n.to_string());
            out.push(')');
        }
        Term::Apply(f, args) => {
            out.push('(');
            out.push_str(f.name());
            for a in args {
                out.push(' ');
                write_term(out, a);
            }
            out.push(')');
        }
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f);
    s
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::Atom(a) => write_atom(out, a),
        Formula::Not(inner) => {
            out.push_str("(not ");
            write_formula(out, inner);
            out.push(')');
        }
        Formula::And(fs) => write_connective(out, "and", fs),
        Formula::Or(fs) => write_connective(out, "or", fs),
        Formula::Implies(a, b) => {
            out.push_str("(-> ");
            write_formula(out, a);
            out.push(' ');
            write_formula(out, b);
            out.push(')');
        }
        Formula::BoundedForall { var, kind, bound, body } => {
            write_quantifier(out, "forall", Some((var, *kind, bound)), var, body)
        }
        Formula::BoundedExists { var, kind, bound, body } => {
            write_quantifier(out, "exists", Some((var, *kind, bound)), var, body)
        }
        Formula::Forall { var, body } => write_quantifier(out, "forall", None, var, body),
        Formula::Exists { var, body } => write_quantifier(out, "exists", None, var, body),
    }
}

fn write_connective(out: &mut String, kw: &str, fs: &[Formula]) {
    out.push('(');
    out.push_str(kw);
    for f in fs {
        out.push(' ');
        write_formula(out, f);
    }
    out.push(')');
}

fn write_quantifier(
    out: &mut String,
    kw: &str,
    bound: Option<(&str, BoundKind, &Term)>,
    var: &str,
    body: &Formula,
) {
    out.push('(');
    out.push_str(kw);
    out.push(' ');
    match bound {
        None => out.push_str(var),
        Some((v, kind, b)) => {
            out.push('(');
            out.push_str(v);
            if kind == BoundKind::Lt {
                out.push_str(" <");
            }
            out.push(' ');
            write_term(out, b);
            out.push(')');
        }
    }
    out.push(' ');
    write_formula(out, body);
    out.push(')');
}

fn write_atom(out: &mut String, a: &Atom) {
    let (head, terms): (&str, Vec<&Term>) = match a {
        Atom::Eq(x, y) => ("=", vec![x, y]),
        Atom::Leq(x, y) => ("<=", vec![x, y]),
        Atom::Add3(x, y, z) => ("Add", vec![x, y, z]),
        Atom::Mult3(x, y, z) => ("Mult", vec![x, y, z]),
        Atom::Arith(tag, ts) => (tag.name(), ts.iter().collect()),
        Atom::Other(name, ts) => {
            if ts.is_empty() {
                // zero-ary uninterpreted atom prints bare
                out.push_str(name);
                return;
            }
            (name.as_str(), ts.iter().collect())
        }
    };
    out.push('(');
    out.push_str(head);
    for t in terms {
        out.push(' ');
        write_term(out, t);
    }
    out.push(')');
}
