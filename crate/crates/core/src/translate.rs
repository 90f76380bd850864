//! Restricted translation of arbitrary-bound formulas into the Max-only
//! quantifier-bound class, with a brute-force equivalence oracle.
//!
//! A quantifier `v <= B` whose bound uses multiplication or addition is
//! replaced by a tuple of variables, each capped by Max of the base
//! variables and 4. The tuple encodes v's value through the lexicographic
//! Seq/STRING code: string_value(x_1..x_m) = v. The guard formula decomposes
//! each component as x_i + 1 = 2^L + b (the power picked out by a
//! divisor-parity subformula) and compares the assembled value against the
//! bound; body atoms access the value through the same decomposition,
//! rewritten over positive/negative term pairs so no subtraction symbol is
//! needed.

use crate::eval::{eval_bounded, AtomSemantics, BudgetMeter, Env, EvalBudget, EvalError};
use crate::formula::{Atom, BoundKind, Formula, Symbol, Term};
use crate::lang::{BoundPolicy, FnSym, LanguageConfig};
use crate::nat::Nat;
use serde::Deserialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("unsupported bound shape `{shape}` at {path}")]
    UnsupportedShape { shape: String, path: String },
    #[error("unsupported construct at {path}: {what}")]
    Unsupported { path: String, what: String },
}

/// Bound shapes the guard library covers. Operands are variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundShape {
    /// A single variable (translated only when that variable is itself
    /// tuple-encoded).
    Var(Symbol),
    /// u * w, the square when both coincide.
    Product(Symbol, Symbol),
    /// u + w.
    Sum(Symbol, Symbol),
}

impl BoundShape {
    pub fn of(term: &Term) -> Option<BoundShape> {
        match term {
            Term::Var(v) => Some(BoundShape::Var(v.clone())),
            Term::Apply(FnSym::Mul, args) => match (&args[0], &args[1]) {
                (Term::Var(a), Term::Var(b)) => Some(BoundShape::Product(a.clone(), b.clone())),
                _ => None,
            },
            Term::Apply(FnSym::Add, args) => match (&args[0], &args[1]) {
                (Term::Var(a), Term::Var(b)) => Some(BoundShape::Sum(a.clone(), b.clone())),
                _ => None,
            },
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct GuardManifestEntry {
    pub shape: String,
    pub width: u32,
    pub cap: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct GuardManifest {
    pub entries: Vec<GuardManifestEntry>,
}

/// The shipped guard library: the manifest of supported shapes and widths,
/// and the guard schemas in the formula grammar.
pub struct GuardLibrary {
    pub manifest: GuardManifest,
    pub schema_source: &'static str,
}

impl GuardLibrary {
    pub fn standard() -> GuardLibrary {
        let manifest: GuardManifest =
            serde_json::from_str(include_str!("../assets/guards-manifest.json"))
                .expect("manifest parses");
        GuardLibrary { manifest, schema_source: include_str!("../assets/guards.sexp") }
    }

    /// Width of the tuple for a bound shape over free base variables.
    pub fn declared_width(&self, shape: &BoundShape) -> Option<u32> {
        let key = match shape {
            BoundShape::Var(_) => "var",
            BoundShape::Product(a, b) if a == b => "square",
            BoundShape::Product(..) => "product",
            BoundShape::Sum(..) => "sum",
        };
        self.manifest.entries.iter().find(|e| e.shape == key).map(|e| e.width)
    }
}

/// Length budget of a term's value in units of L = floor(log2(cap + 1)):
/// free variables contribute one unit, tuple-encoded variables their width,
/// a product one extra unit of slack, a sum one.
fn lambda(term: &Term, widths: &BTreeMap<Symbol, u32>, path: &str) -> Result<u32, TranslateError> {
    Ok(match term {
        Term::Var(v) => *widths.get(v).unwrap_or(&1),
        Term::Const(c) => {
            let bits = c.bit_len().saturating_sub(0);
            (bits.div_ceil(2)).max(1) as u32
        }
        Term::Named(nc) => {
            let bits = nc.value().bit_len();
            (bits.div_ceil(2)).max(1) as u32
        }
        Term::E(n) => ((*n as u64 + 1).div_ceil(2)).max(1) as u32,
        Term::Apply(FnSym::Mul, args) => {
            lambda(&args[0], widths, path)? + lambda(&args[1], widths, path)? + 1
        }
        Term::Apply(FnSym::Add, args) => {
            lambda(&args[0], widths, path)?.max(lambda(&args[1], widths, path)?) + 1
        }
        Term::Apply(FnSym::Max, args) => {
            lambda(&args[0], widths, path)?.max(lambda(&args[1], widths, path)?)
        }
        Term::Apply(f, _) => {
            return Err(TranslateError::Unsupported {
                path: path.into(),
                what: format!("function {f} in a quantifier bound"),
            })
        }
    })
}

// ---------------------------------------------------------------------------
// Term builders (with light simplification so outputs stay readable)
// ---------------------------------------------------------------------------

fn is_zero(t: &Term) -> bool {
    matches!(t, Term::Const(c) if c.is_zero())
}

fn is_one(t: &Term) -> bool {
    matches!(t, Term::Const(c) if *c == Nat::ONE)
}

fn add(a: Term, b: Term) -> Term {
    if is_zero(&a) {
        return b;
    }
    if is_zero(&b) {
        return a;
    }
    Term::Apply(FnSym::Add, vec![a, b])
}

fn mul(a: Term, b: Term) -> Term {
    if is_zero(&a) || is_zero(&b) {
        return Term::num(0);
    }
    if is_one(&a) {
        return b;
    }
    if is_one(&b) {
        return a;
    }
    Term::Apply(FnSym::Mul, vec![a, b])
}

fn max_term(a: Term, b: Term) -> Term {
    if a == b {
        return a;
    }
    Term::Apply(FnSym::Max, vec![a, b])
}

/// A value as the difference P - N of two subtraction-free terms.
#[derive(Clone, Debug)]
struct Diff {
    pos: Term,
    neg: Term,
}

impl Diff {
    fn plain(t: Term) -> Diff {
        Diff { pos: t, neg: Term::num(0) }
    }

    fn add(&self, other: &Diff) -> Diff {
        Diff { pos: add(self.pos.clone(), other.pos.clone()), neg: add(self.neg.clone(), other.neg.clone()) }
    }

    fn mul(&self, other: &Diff) -> Diff {
        Diff {
            pos: add(mul(self.pos.clone(), other.pos.clone()), mul(self.neg.clone(), other.neg.clone())),
            neg: add(mul(self.pos.clone(), other.neg.clone()), mul(self.neg.clone(), other.pos.clone())),
        }
    }

    fn max(&self, other: &Diff) -> Diff {
        // max(a-b, c-d) = max(a+d, c+b) - (b+d)
        Diff {
            pos: max_term(
                add(self.pos.clone(), other.neg.clone()),
                add(other.pos.clone(), self.neg.clone()),
            ),
            neg: add(self.neg.clone(), other.neg.clone()),
        }
    }
}

// ---------------------------------------------------------------------------
// Tuple encodings
// ---------------------------------------------------------------------------

/// A translated quantifier variable: its tuple components, the Seq
/// decomposition variables, and the assembled value-plus-one term.
#[derive(Clone, Debug)]
struct TupleInfo {
    components: Vec<Symbol>,
    /// (d_i, b_i) pairs for components 2..m.
    decomp: Vec<(Symbol, Symbol)>,
    /// Term of value string_value(components) + 1 over components and
    /// decomposition variables.
    value_plus_one: Term,
}

fn tuple_info(var: &str, width: u32) -> TupleInfo {
    let components: Vec<Symbol> = (1..=width).map(|i| format!("{var}_{i}")).collect();
    let decomp: Vec<(Symbol, Symbol)> =
        (2..=width).map(|i| (format!("{var}_d{i}"), format!("{var}_e{i}"))).collect();
    // val + 1 = (x1 + 1) * prod (d_i + 1) + sum b_i * prod_{j > i} (d_j + 1)
    let mut value = add(Term::var(&components[0]), Term::num(1));
    for (d, b) in &decomp {
        value = add(
            mul(value, add(Term::var(d), Term::num(1))),
            Term::var(b),
        );
    }
    TupleInfo { components, decomp, value_plus_one: value }
}

/// d + 1 is a power of two: every factorization a * c = d + 1 with both
/// factors at most d has an even or unit left factor.
fn pow2_formula(d: &str) -> Formula {
    let a = format!("{d}_a");
    let c = format!("{d}_c");
    let h = format!("{d}_h");
    let product_is = Formula::Atom(Atom::Eq(
        mul(Term::var(&a), Term::var(&c)),
        add(Term::var(d), Term::num(1)),
    ));
    let a_unit = Formula::Atom(Atom::Eq(Term::var(&a), Term::num(1)));
    let a_even = Formula::BoundedExists {
        var: h.clone(),
        kind: BoundKind::Leq,
        bound: Term::var(&a),
        body: Box::new(Formula::Atom(Atom::Eq(
            add(Term::var(&h), Term::var(&h)),
            Term::var(&a),
        ))),
    };
    Formula::BoundedForall {
        var: a.clone(),
        kind: BoundKind::Leq,
        bound: Term::var(d),
        body: Box::new(Formula::BoundedForall {
            var: c.clone(),
            kind: BoundKind::Leq,
            bound: Term::var(d),
            body: Box::new(Formula::implies(product_is, Formula::Or(vec![a_unit, a_even]))),
        }),
    }
}

/// Wraps `inner` in the existential decomposition block for the tuple:
/// for each component i >= 2, d_i + 1 is the power of two with
/// d_i <= x_i <= 2 d_i and x_i = d_i + b_i.
fn with_decomposition(info: &TupleInfo, inner: Formula) -> Formula {
    let mut out = inner;
    for (i, (d, b)) in info.decomp.iter().enumerate().rev() {
        let x = &info.components[i + 1];
        let body = Formula::And(vec![
            Formula::Atom(Atom::Leq(Term::var(x), add(Term::var(d), Term::var(d)))),
            Formula::Atom(Atom::Eq(Term::var(x), add(Term::var(d), Term::var(b)))),
            pow2_formula(d),
            out,
        ]);
        out = Formula::BoundedExists {
            var: d.clone(),
            kind: BoundKind::Leq,
            bound: Term::var(x),
            body: Box::new(Formula::BoundedExists {
                var: b.clone(),
                kind: BoundKind::Leq,
                bound: Term::var(d),
                body: Box::new(body),
            }),
        };
    }
    out
}

/// The guard: string_value(tuple) <= value(bound), as a closed block over
/// the tuple components.
fn guard_formula(info: &TupleInfo, bound_plus_one: &Diff) -> Formula {
    let value_ok = Formula::Atom(Atom::Leq(
        add(info.value_plus_one.clone(), bound_plus_one.neg.clone()),
        bound_plus_one.pos.clone(),
    ));
    with_decomposition(info, value_ok)
}

// ---------------------------------------------------------------------------
// The translator
// ---------------------------------------------------------------------------

struct Translator<'a> {
    lib: &'a GuardLibrary,
    /// Global component cap: Max of the formula's free variables and 4.
    cap: Term,
    /// Widths of all known variables (1 for untranslated).
    widths: BTreeMap<Symbol, u32>,
    /// Active tuple encodings.
    tuples: BTreeMap<Symbol, TupleInfo>,
}

impl<'a> Translator<'a> {
    fn term_diff(&self, t: &Term, path: &str) -> Result<Diff, TranslateError> {
        Ok(match t {
            Term::Var(v) => match self.tuples.get(v) {
                Some(info) => {
                    Diff { pos: info.value_plus_one.clone(), neg: Term::num(1) }
                }
                None => Diff::plain(t.clone()),
            },
            Term::Const(_) | Term::Named(_) | Term::E(_) => Diff::plain(t.clone()),
            Term::Apply(FnSym::Add, args) => {
                self.term_diff(&args[0], path)?.add(&self.term_diff(&args[1], path)?)
            }
            Term::Apply(FnSym::Mul, args) => {
                self.term_diff(&args[0], path)?.mul(&self.term_diff(&args[1], path)?)
            }
            Term::Apply(FnSym::Max, args) => {
                self.term_diff(&args[0], path)?.max(&self.term_diff(&args[1], path)?)
            }
            Term::Apply(f, _) => {
                return Err(TranslateError::Unsupported {
                    path: path.into(),
                    what: format!("function {f} over a tuple-encoded variable"),
                })
            }
        })
    }

    fn term_mentions_tuple(&self, t: &Term) -> bool {
        match t {
            Term::Var(v) => self.tuples.contains_key(v),
            Term::Apply(_, args) => args.iter().any(|a| self.term_mentions_tuple(a)),
            _ => false,
        }
    }

    fn rewrite_atom(&self, atom: &Atom, path: &str) -> Result<Formula, TranslateError> {
        if !atom.terms().iter().any(|t| self.term_mentions_tuple(t)) {
            return Ok(Formula::Atom(atom.clone()));
        }
        let rewritten = match atom {
            Atom::Eq(a, b) => {
                let (a, b) = (self.term_diff(a, path)?, self.term_diff(b, path)?);
                Atom::Eq(add(a.pos, b.neg), add(b.pos, a.neg))
            }
            Atom::Leq(a, b) => {
                let (a, b) = (self.term_diff(a, path)?, self.term_diff(b, path)?);
                Atom::Leq(add(a.pos, b.neg), add(b.pos, a.neg))
            }
            Atom::Add3(a, b, c) => {
                let (a, b, c) =
                    (self.term_diff(a, path)?, self.term_diff(b, path)?, self.term_diff(c, path)?);
                // a + b = c
                Atom::Eq(add(add(a.pos, b.pos), c.neg), add(add(a.neg, b.neg), c.pos))
            }
            Atom::Mult3(a, b, c) => {
                let (a, b, c) =
                    (self.term_diff(a, path)?, self.term_diff(b, path)?, self.term_diff(c, path)?);
                // a * b = c: expand (Pa-Na)(Pb-Nb) = Pc-Nc
                let prod = a.mul(&b);
                Atom::Eq(add(prod.pos, c.neg), add(c.pos, prod.neg))
            }
            Atom::Arith(..) | Atom::Other(..) => {
                return Err(TranslateError::Unsupported {
                    path: path.into(),
                    what: "tuple-encoded variable under a non-arithmetic atom".into(),
                })
            }
        };
        // the rewriting needs the decomposition variables of every tuple it
        // touched; bind them around the atom
        let mut vars = std::collections::BTreeSet::new();
        for t in atom.terms() {
            t.free_vars(&mut vars);
        }
        let mut out = Formula::Atom(rewritten);
        for v in vars.iter().rev() {
            if let Some(info) = self.tuples.get(v) {
                out = with_decomposition(info, out);
            }
        }
        Ok(out)
    }

    fn translate(&mut self, f: &Formula, path: &str) -> Result<Formula, TranslateError> {
        match f {
            Formula::Atom(a) => self.rewrite_atom(a, path),
            Formula::Not(x) => Ok(Formula::not(self.translate(x, &format!("{path}.not"))?)),
            Formula::And(fs) => Ok(Formula::And(
                fs.iter()
                    .enumerate()
                    .map(|(i, g)| self.translate(g, &format!("{path}.and{i}")))
                    .collect::<Result<_, _>>()?,
            )),
            Formula::Or(fs) => Ok(Formula::Or(
                fs.iter()
                    .enumerate()
                    .map(|(i, g)| self.translate(g, &format!("{path}.or{i}")))
                    .collect::<Result<_, _>>()?,
            )),
            Formula::Implies(a, b) => Ok(Formula::implies(
                self.translate(a, &format!("{path}.lhs"))?,
                self.translate(b, &format!("{path}.rhs"))?,
            )),
            Formula::Forall { .. } | Formula::Exists { .. } => Err(TranslateError::Unsupported {
                path: path.into(),
                what: "unbounded quantifier".into(),
            }),
            Formula::BoundedForall { var, kind, bound, body }
            | Formula::BoundedExists { var, kind, bound, body } => {
                let universal = matches!(f, Formula::BoundedForall { .. });
                if *kind != BoundKind::Leq {
                    return Err(TranslateError::Unsupported {
                        path: path.into(),
                        what: "strict bound".into(),
                    });
                }
                let compliant = bound.bound_ok(BoundPolicy::MaxOnly)
                    && !self.term_mentions_tuple(bound);
                if compliant {
                    let inner = self.translate(body, &format!("{path}.{var}"))?;
                    return Ok(if universal {
                        Formula::bounded_forall(var, bound.clone(), inner)
                    } else {
                        Formula::bounded_exists(var, bound.clone(), inner)
                    });
                }
                let shape = BoundShape::of(bound).ok_or_else(|| {
                    TranslateError::UnsupportedShape {
                        shape: crate::print::print_term(bound),
                        path: path.into(),
                    }
                })?;
                // width: the declared manifest width when the operands are
                // plain variables, the length calculus otherwise
                let width = match (&shape, self.lib.declared_width(&shape)) {
                    (BoundShape::Var(u), _) if !self.tuples.contains_key(u) => {
                        // a plain-variable bound over an untranslated
                        // variable is already compliant; unreachable
                        1
                    }
                    (BoundShape::Product(a, b), Some(w))
                        if !self.tuples.contains_key(a) && !self.tuples.contains_key(b) =>
                    {
                        w
                    }
                    (BoundShape::Sum(a, b), Some(w))
                        if !self.tuples.contains_key(a) && !self.tuples.contains_key(b) =>
                    {
                        w
                    }
                    _ => lambda(bound, &self.widths, path)?,
                };
                let info = tuple_info(var, width);
                let bound_diff = self.term_diff(bound, path)?;
                let bound_plus_one = bound_diff.add(&Diff::plain(Term::num(1)));
                let guard = guard_formula(&info, &bound_plus_one);

                self.widths.insert(var.clone(), width);
                self.tuples.insert(var.clone(), info.clone());
                let body_out = self.translate(body, &format!("{path}.{var}"))?;
                self.tuples.remove(var);
                self.widths.remove(var);

                let body_block = with_decomposition(&info, body_out);
                let mut out = if universal {
                    Formula::implies(guard, body_block)
                } else {
                    Formula::And(vec![guard, body_block])
                };
                for x in info.components.iter().rev() {
                    out = if universal {
                        Formula::bounded_forall(x, self.cap.clone(), out)
                    } else {
                        Formula::bounded_exists(x, self.cap.clone(), out)
                    };
                }
                Ok(out)
            }
        }
    }
}

/// Replaces the outermost translatable quantifier of `f`, leaving the body
/// untouched apart from value access. The body must already be Max-only.
pub fn translate_quantifier(f: &Formula, lib: &GuardLibrary) -> Result<Formula, TranslateError> {
    translate_delta0a(f, lib)
}

/// Full inside-out translation into the Max-only bound class.
pub fn translate_delta0a(f: &Formula, lib: &GuardLibrary) -> Result<Formula, TranslateError> {
    assert!(f.is_fully_bounded(), "translation is defined on fully-bounded formulas");
    let free: Vec<Symbol> = f.free_vars().into_iter().collect();
    let mut cap = Term::num(4);
    for v in &free {
        cap = max_term(Term::Var(v.clone()), cap);
    }
    let mut tr = Translator {
        lib,
        cap,
        widths: free.iter().map(|v| (v.clone(), 1)).collect(),
        tuples: BTreeMap::new(),
    };
    tr.translate(f, "root")
}

/// Exhaustive equivalence oracle: both formulas agree under every assignment
/// of values up to `bound` to their shared free variables.
pub fn verify_translation(
    orig: &Formula,
    out: &Formula,
    bound: u64,
    budget: &EvalBudget,
    atoms: &dyn AtomSemantics,
) -> Result<bool, EvalError> {
    Ok(first_mismatch(orig, out, bound, budget, atoms)?.is_none())
}

/// The least environment (lexicographically, over sorted variable names)
/// where the two formulas disagree, if any.
pub fn first_mismatch(
    orig: &Formula,
    out: &Formula,
    bound: u64,
    budget: &EvalBudget,
    atoms: &dyn AtomSemantics,
) -> Result<Option<Env>, EvalError> {
    let vars: Vec<Symbol> = orig.free_vars().into_iter().collect();
    assert_eq!(orig.free_vars(), out.free_vars(), "same free variables required");
    let mut tuple = vec![0u64; vars.len()];
    loop {
        let mut env = Env::new();
        for (v, val) in vars.iter().zip(&tuple) {
            env.insert(v.clone(), Nat::from(*val));
        }
        let mut meter = BudgetMeter::new(budget);
        let a = eval_bounded(orig, &mut env.clone(), atoms, &mut meter)?;
        let b = eval_bounded(out, &mut env.clone(), atoms, &mut meter)?;
        if a != b {
            return Ok(Some(env));
        }
        if vars.is_empty() {
            return Ok(None);
        }
        let mut i = vars.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] <= bound {
                break;
            }
            tuple[i] = 0;
            if i == 0 {
                return Ok(None);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::NoAtoms;
    use crate::lang::LanguageConfig;
    use crate::parse::parse_formula;

    fn delta_a(src: &str) -> Formula {
        parse_formula(src, &LanguageConfig::delta_a()).unwrap()
    }

    #[test]
    fn manifest_loads() {
        let lib = GuardLibrary::standard();
        assert_eq!(lib.declared_width(&BoundShape::Product("w".into(), "w".into())), Some(3));
        assert_eq!(
            lib.declared_width(&BoundShape::Product("w".into(), "u".into())),
            Some(3)
        );
        assert_eq!(lib.declared_width(&BoundShape::Sum("w".into(), "u".into())), Some(2));
        assert!(!lib.schema_source.is_empty());
    }

    #[test]
    fn square_bound_translates_and_matches() {
        // forall v <= w*w: the translated form is Max-only and equivalent
        let lib = GuardLibrary::standard();
        let f = delta_a("(forall (v (* w w)) (<= v (* w w)))");
        let out = translate_delta0a(&f, &lib).unwrap();
        assert!(out.is_delta0(&LanguageConfig::r()), "{out}");
        let budget = EvalBudget::new(1 << 30, std::time::Duration::from_secs(120));
        assert!(verify_translation(&f, &out, 6, &budget, &NoAtoms).unwrap());
    }

    #[test]
    fn existential_uses_conjunction() {
        let lib = GuardLibrary::standard();
        let f = delta_a("(exists (v (* w w)) (= v (* w w)))");
        let out = translate_delta0a(&f, &lib).unwrap();
        // outermost is a bounded exists over the first tuple component, and
        // the matrix under the tuple block is a conjunction
        let mut cur = &out;
        let mut exists_seen = 0;
        while let Formula::BoundedExists { body, .. } = cur {
            exists_seen += 1;
            cur = body;
        }
        assert_eq!(exists_seen, 3, "{out}");
        assert!(matches!(cur, Formula::And(_)), "{out}");
        let budget = EvalBudget::new(1 << 30, std::time::Duration::from_secs(120));
        assert!(verify_translation(&f, &out, 6, &budget, &NoAtoms).unwrap());
    }

    #[test]
    fn compliant_input_unchanged() {
        let lib = GuardLibrary::standard();
        let f = delta_a("(forall (v (max w 4)) (<= v (max w 4)))");
        assert_eq!(translate_delta0a(&f, &lib).unwrap(), f);
    }

    #[test]
    fn cube_bound_rejected() {
        let lib = GuardLibrary::standard();
        let f = delta_a("(forall (v (* w (* w w))) (<= v w))");
        let err = translate_delta0a(&f, &lib).unwrap_err();
        assert!(matches!(err, TranslateError::UnsupportedShape { .. }), "{err}");
    }

    #[test]
    fn corrupted_guard_detected_by_oracle() {
        let lib = GuardLibrary::standard();
        let f = delta_a("(forall (v (* w w)) (<= v (* w w)))");
        let out = translate_delta0a(&f, &lib).unwrap();
        // corrupt: swap the body under the implication to a falsehood
        fn corrupt(f: &Formula) -> Formula {
            match f {
                Formula::BoundedForall { var, kind, bound, body } => Formula::BoundedForall {
                    var: var.clone(),
                    kind: *kind,
                    bound: bound.clone(),
                    body: Box::new(corrupt(body)),
                },
                Formula::Implies(g, _) => Formula::implies(
                    (**g).clone(),
                    Formula::Atom(Atom::Eq(Term::num(0), Term::num(1))),
                ),
                other => other.clone(),
            }
        }
        let bad = corrupt(&out);
        let budget = EvalBudget::new(1 << 30, std::time::Duration::from_secs(120));
        let witness = first_mismatch(&f, &bad, 3, &budget, &NoAtoms).unwrap();
        assert!(witness.is_some());
    }

    #[test]
    fn identity_verifies() {
        let f = delta_a("(forall (v w) (<= v w))");
        let budget = EvalBudget::small();
        assert!(verify_translation(&f, &f, 6, &budget, &NoAtoms).unwrap());
    }
}
