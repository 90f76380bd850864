//! S-expression parser for terms and formulas.
//!
//! Grammar (see README for the full sketch):
//!   term    := nat | K<i> | C<i> | symbol | "(" fn term* ")" | "(E " nat ")"
//!   atom    := "(" ("=" | "<=" | "Add" | "Mult" | arith-tag | name) term* ")"
//!              | name                       (zero-ary uninterpreted atom)
//!   formula := atom | "(" ("not"|"and"|"or"|"->") formula+ ")"
//!              | "(" ("forall"|"exists") binder formula ")"
//!   binder  := symbol | "(" symbol term ")" | "(" symbol "<" term ")"

use crate::formula::{ArithTag, Atom, BoundKind, Formula, NamedConst, Term};
use crate::lang::{FnSym, LanguageConfig};
use crate::nat::Nat;
use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared symbol at byte {pos}: {msg}")]
    Undeclared { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Sym(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn pos(&self) -> usize {
        match self {
            Sexp::Sym(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn parse_sexp(&mut self) -> Result<Sexp, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Err(ParseError::Syntax { pos: start, msg: "unexpected end of input".into() });
        }
        match self.src[self.pos] {
            b'(' => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    if self.pos >= self.src.len() {
                        return Err(ParseError::Syntax {
                            pos: self.pos,
                            msg: "unclosed parenthesis".into(),
                        });
                    }
                    if self.src[self.pos] == b')' {
                        self.pos += 1;
                        return Ok(Sexp::List(items, start));
                    }
                    items.push(self.parse_sexp()?);
                }
            }
            b')' => Err(ParseError::Syntax { pos: start, msg: "unexpected ')'".into() }),
            _ => {
                let begin = self.pos;
                while self.pos < self.src.len()
                    && !self.src[self.pos].is_ascii_whitespace()
                    && self.src[self.pos] != b'('
                    && self.src[self.pos] != b')'
                {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[begin..self.pos]).map_err(|_| {
                    ParseError::Syntax { pos: begin, msg: "invalid utf-8".into() }
                })?;
                Ok(Sexp::Sym(word.to_string(), begin))
            }
        }
    }
}

fn read_one(text: &str) -> Result<Sexp, ParseError> {
    let mut lx = Lexer::new(text);
    let sexp = lx.parse_sexp()?;
    lx.skip_ws();
    if lx.pos != lx.src.len() {
        return Err(ParseError::Syntax {
            pos: lx.pos,
            msg: "trailing input after expression".into(),
        });
    }
    Ok(sexp)
}

fn named_const(word: &str) -> Option<NamedConst> {
    let (head, rest) = word.split_at(1);
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let idx: u32 = rest.parse().ok()?;
    match head {
        "K" => Some(NamedConst::K(idx)),
        "C" => Some(NamedConst::C(idx)),
        _ => None,
    }
}

fn is_reserved(word: &str) -> bool {
    matches!(
        word,
        "not" | "and" | "or" | "->" | "forall" | "exists" | "=" | "<=" | "Add" | "Mult" | "<"
            | "E"
    ) || FnSym::from_name(word).is_some()
        || ArithTag::from_name(word).is_some()
}

fn sym_to_term(word: &str, pos: usize) -> Result<Term, ParseError> {
    if word.bytes().all(|b| b.is_ascii_digit()) && !word.is_empty() {
        let n: BigUint = word.parse().map_err(|_| ParseError::Syntax {
            pos,
            msg: format!("bad numeral `{word}`"),
        })?;
        return Ok(Term::Const(Nat::from_biguint(n)));
    }
    if let Some(nc) = named_const(word) {
        return Ok(Term::Named(nc));
    }
    if is_reserved(word) {
        return Err(ParseError::Syntax {
            pos,
            msg: format!("reserved word `{word}` is not a variable"),
        });
    }
    Ok(Term::Var(word.to_string()))
}

fn term_of(sexp: &Sexp, lang: &LanguageConfig) -> Result<Term, ParseError> {
    match sexp {
        Sexp::Sym(w, p) => sym_to_term(w, *p),
        Sexp::List(items, p) => {
            let Some(Sexp::Sym(head, hp)) = items.first() else {
                return Err(ParseError::Syntax { pos: *p, msg: "expected function symbol".into() });
            };
            if head == "E" {
                if items.len() != 2 {
                    return Err(ParseError::Syntax { pos: *p, msg: "E takes one numeral".into() });
                }
                let Sexp::Sym(n, np) = &items[1] else {
                    return Err(ParseError::Syntax {
                        pos: items[1].pos(),
                        msg: "E takes a numeral".into(),
                    });
                };
                let n: u32 = n.parse().map_err(|_| ParseError::Syntax {
                    pos: *np,
                    msg: "E takes a small numeral".into(),
                })?;
                return Ok(Term::E(n));
            }
            let Some(f) = FnSym::from_name(head) else {
                return Err(ParseError::Undeclared {
                    pos: *hp,
                    msg: format!("unknown function symbol `{head}`"),
                });
            };
            if !lang.allows_fn(f) {
                return Err(ParseError::Undeclared {
                    pos: *hp,
                    msg: format!("{f} not allowed in this language"),
                });
            }
            let args: Vec<Term> =
                items[1..].iter().map(|s| term_of(s, lang)).collect::<Result<_, _>>()?;
            if args.len() != f.arity() {
                return Err(ParseError::Syntax {
                    pos: *p,
                    msg: format!("{f} expects {} arguments, got {}", f.arity(), args.len()),
                });
            }
            Ok(Term::Apply(f, args))
        }
    }
}

fn formula_of(sexp: &Sexp, lang: &LanguageConfig) -> Result<Formula, ParseError> {
    match sexp {
        Sexp::Sym(w, p) => {
            // bare symbol: zero-ary uninterpreted atom
            if is_reserved(w) || named_const(w).is_some() || w.bytes().all(|b| b.is_ascii_digit()) {
                return Err(ParseError::Syntax {
                    pos: *p,
                    msg: format!("`{w}` is not a formula"),
                });
            }
            Ok(Formula::Atom(Atom::Other(w.clone(), Vec::new())))
        }
        Sexp::List(items, p) => {
            let Some(Sexp::Sym(head, _)) = items.first() else {
                return Err(ParseError::Syntax { pos: *p, msg: "expected formula head".into() });
            };
            let rest = &items[1..];
            match head.as_str() {
                "not" => {
                    if rest.len() != 1 {
                        return Err(ParseError::Syntax {
                            pos: *p,
                            msg: "not takes exactly one formula".into(),
                        });
                    }
                    Ok(Formula::not(formula_of(&rest[0], lang)?))
                }
                "and" | "or" => {
                    if rest.len() < 2 {
                        return Err(ParseError::Syntax {
                            pos: *p,
                            msg: format!("{head} takes at least two formulas"),
                        });
                    }
                    let fs: Vec<Formula> =
                        rest.iter().map(|s| formula_of(s, lang)).collect::<Result<_, _>>()?;
                    Ok(if head == "and" { Formula::And(fs) } else { Formula::Or(fs) })
                }
                "->" => {
                    if rest.len() != 2 {
                        return Err(ParseError::Syntax {
                            pos: *p,
                            msg: "-> takes exactly two formulas".into(),
                        });
                    }
                    Ok(Formula::implies(formula_of(&rest[0], lang)?, formula_of(&rest[1], lang)?))
                }
                "forall" | "exists" => {
                    if rest.len() != 2 {
                        return Err(ParseError::Syntax {
                            pos: *p,
                            msg: format!("{head} takes a binder and a body"),
                        });
                    }
                    let body = formula_of(&rest[1], lang)?;
                    let universal = head == "forall";
                    match &rest[0] {
                        Sexp::Sym(v, vp) => {
                            let var = parse_binder_var(v, *vp)?;
                            Ok(if universal {
                                Formula::Forall { var, body: Box::new(body) }
                            } else {
                                Formula::Exists { var, body: Box::new(body) }
                            })
                        }
                        Sexp::List(bind, bp) => {
                            let (var, kind, bound) = parse_bound_binder(bind, *bp, lang)?;
                            if !bound.bound_ok(lang.quantifier_bound_policy) {
                                return Err(ParseError::Undeclared {
                                    pos: *bp,
                                    msg: format!(
                                        "bound `{bound}` not allowed in quantifier bound \
                                         (max-only policy)"
                                    ),
                                });
                            }
                            Ok(if universal {
                                Formula::BoundedForall { var, kind, bound, body: Box::new(body) }
                            } else {
                                Formula::BoundedExists { var, kind, bound, body: Box::new(body) }
                            })
                        }
                    }
                }
                "=" | "<=" | "Add" | "Mult" => {
                    let ts: Vec<Term> =
                        rest.iter().map(|s| term_of(s, lang)).collect::<Result<_, _>>()?;
                    let want = if head == "=" || head == "<=" { 2 } else { 3 };
                    if ts.len() != want {
                        return Err(ParseError::Syntax {
                            pos: *p,
                            msg: format!("{head} expects {want} terms, got {}", ts.len()),
                        });
                    }
                    Ok(Formula::Atom(match head.as_str() {
                        "=" => Atom::Eq(ts[0].clone(), ts[1].clone()),
                        "<=" => Atom::Leq(ts[0].clone(), ts[1].clone()),
                        "Add" => Atom::Add3(ts[0].clone(), ts[1].clone(), ts[2].clone()),
                        _ => Atom::Mult3(ts[0].clone(), ts[1].clone(), ts[2].clone()),
                    }))
                }
                _ => {
                    if let Some(tag) = ArithTag::from_name(head) {
                        let ts: Vec<Term> =
                            rest.iter().map(|s| term_of(s, lang)).collect::<Result<_, _>>()?;
                        if ts.len() != tag.arity() {
                            return Err(ParseError::Syntax {
                                pos: *p,
                                msg: format!(
                                    "{head} expects {} terms, got {}",
                                    tag.arity(),
                                    ts.len()
                                ),
                            });
                        }
                        return Ok(Formula::Atom(Atom::Arith(tag, ts)));
                    }
                    if FnSym::from_name(head).is_some() {
                        return Err(ParseError::Syntax {
                            pos: *p,
                            msg: format!("function symbol `{head}` cannot head a formula"),
                        });
                    }
                    // uninterpreted predicate
                    let ts: Vec<Term> =
                        rest.iter().map(|s| term_of(s, lang)).collect::<Result<_, _>>()?;
                    Ok(Formula::Atom(Atom::Other(head.clone(), ts)))
                }
            }
        }
    }
}

fn parse_binder_var(word: &str, pos: usize) -> Result<String, ParseError> {
    if is_reserved(word) || named_const(word).is_some() || word.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(ParseError::Syntax { pos, msg: format!("`{word}` cannot bind") });
    }
    Ok(word.to_string())
}

fn parse_bound_binder(
    items: &[Sexp],
    pos: usize,
    lang: &LanguageConfig,
) -> Result<(String, BoundKind, Term), ParseError> {
    match items {
        [Sexp::Sym(v, vp), bound] => {
            Ok((parse_binder_var(v, *vp)?, BoundKind::Leq, term_of(bound, lang)?))
        }
        [Sexp::Sym(v, vp), Sexp::Sym(lt, _), bound] if lt == "<" => {
            Ok((parse_binder_var(v, *vp)?, BoundKind::Lt, term_of(bound, lang)?))
        }
        _ => Err(ParseError::Syntax { pos, msg: "binder must be `v`, `(v t)` or `(v < t)`".into() }),
    }
}

pub fn parse_formula(text: &str, lang: &LanguageConfig) -> Result<Formula, ParseError> {
    formula_of(&read_one(text)?, lang)
}

pub fn parse_term(text: &str, lang: &LanguageConfig) -> Result<Term, ParseError> {
    term_of(&read_one(text)?, lang)
}

/// Parses a whitespace-separated sequence of formulas (axiom files).
pub fn parse_formulas(text: &str, lang: &LanguageConfig) -> Result<Vec<Formula>, ParseError> {
    let mut lx = Lexer::new(text);
    let mut out = Vec::new();
    loop {
        lx.skip_ws();
        if lx.pos >= lx.src.len() {
            return Ok(out);
        }
        let sexp = lx.parse_sexp()?;
        out.push(formula_of(&sexp, lang)?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::LanguageConfig;

    #[test]
    fn parse_identity_atom() {
        let lang = LanguageConfig::u_star();
        let f = parse_formula("(= 0 0)", &lang).unwrap();
        assert_eq!(f, Formula::Atom(Atom::Eq(Term::num(0), Term::num(0))));
    }

    #[test]
    fn parse_bounded_forall_with_square_bound() {
        // mirrors a universally quantified body bounded by w*w
        let lang = LanguageConfig::delta_a();
        let f = parse_formula("(forall (v (* w w)) (phiA v))", &lang).unwrap();
        match &f {
            Formula::BoundedForall { var, kind, bound, body } => {
                assert_eq!(var, "v");
                assert_eq!(*kind, BoundKind::Leq);
                assert_eq!(
                    *bound,
                    Term::Apply(FnSym::Mul, vec![Term::var("w"), Term::var("w")])
                );
                assert_eq!(
                    **body,
                    Formula::Atom(Atom::Other("phiA".into(), vec![Term::var("v")]))
                );
            }
            other => panic!("unexpected parse {other:?}"),
        }
    }

    #[test]
    fn max_only_policy_rejects_product_bound() {
        let lang = LanguageConfig::r();
        let err = parse_formula("(forall (v (* w w)) (phiA v))", &lang).unwrap_err();
        assert!(matches!(err, ParseError::Undeclared { .. }), "{err}");
    }

    #[test]
    fn max_only_policy_accepts_nested_max() {
        let lang = LanguageConfig::r();
        parse_formula("(forall (v (max (max w 4) u)) (= v v))", &lang).unwrap();
    }

    #[test]
    fn undeclared_function_symbol() {
        let lang = LanguageConfig::minus(); // no addition symbol
        let err = parse_formula("(= (+ 1 1) 2)", &lang).unwrap_err();
        assert!(matches!(err, ParseError::Undeclared { .. }));
    }

    #[test]
    fn syntax_error_position() {
        let lang = LanguageConfig::u_star();
        match parse_formula("(= 0", &lang) {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn named_constants_parse() {
        let lang = LanguageConfig::minus();
        let f = parse_formula("(Add K1 K1 K2)", &lang).unwrap();
        assert_eq!(
            f,
            Formula::Atom(Atom::Add3(
                Term::Named(NamedConst::K(1)),
                Term::Named(NamedConst::K(1)),
                Term::Named(NamedConst::K(2)),
            ))
        );
    }
}
