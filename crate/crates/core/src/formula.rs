//! Term and formula ASTs with prenex classification and the syntactic
//! transformations shared by every other module.
//!
//! All values are immutable after construction and safe to share across
//! threads.

use crate::lang::{BoundPolicy, FnSym, LanguageConfig};
use crate::nat::Nat;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

pub type Symbol = String;

/// Named constants of the K/C sequences.
///
/// K_0 = 0 and K_{i+1} = K_i + K_i from K_1 = 1, so K_i = 2^(i-1) for i >= 1.
/// C_1 = 2 and C_{i+1} = C_i * C_i, so C_i = 2^(2^(i-1)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NamedConst {
    K(u32),
    C(u32),
}

impl NamedConst {
    pub fn value(self) -> Nat {
        match self {
            NamedConst::K(0) => Nat::ZERO,
            NamedConst::K(i) => Nat::pow2(i - 1),
            NamedConst::C(0) => Nat::ONE, // degenerate, unused by the schemas
            NamedConst::C(i) => {
                if i - 1 < 32 {
                    Nat::pow2(1 << (i - 1))
                } else {
                    // Value 2^(2^(i-1)) would not fit in memory; the lab never
                    // evaluates C_i beyond i = 32.
                    panic!("C_{i} exceeds the evaluable range")
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(Symbol),
    Const(Nat),
    Named(NamedConst),
    /// Distinguished term of value 2^n used by quantifier truncation.
    E(u32),
    Apply(FnSym, Vec<Term>),
}

impl Term {
    pub fn var(s: &str) -> Term {
        Term::Var(s.to_string())
    }

    pub fn num(n: u64) -> Term {
        Term::Const(Nat::from(n))
    }

    pub fn apply(f: FnSym, args: Vec<Term>) -> Term {
        debug_assert_eq!(f.arity(), args.len());
        Term::Apply(f, args)
    }

    pub fn free_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) | Term::Named(_) | Term::E(_) => {}
            Term::Apply(_, args) => {
                for a in args {
                    a.free_vars(out);
                }
            }
        }
    }

    pub fn substitute(&self, var: &str, t: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => t.clone(),
            Term::Var(_) | Term::Const(_) | Term::Named(_) | Term::E(_) => self.clone(),
            Term::Apply(f, args) => {
                Term::Apply(*f, args.iter().map(|a| a.substitute(var, t)).collect())
            }
        }
    }

    /// True for terms admissible as quantifier bounds under `policy`.
    pub fn bound_ok(&self, policy: BoundPolicy) -> bool {
        match policy {
            BoundPolicy::AnyTerm => true,
            BoundPolicy::MaxOnly => match self {
                Term::Var(_) | Term::Const(_) | Term::Named(_) | Term::E(_) => true,
                Term::Apply(FnSym::Max, args) => args.iter().all(|a| a.bound_ok(policy)),
                Term::Apply(..) => false,
            },
        }
    }

    /// Function symbols appearing in the term, with multiplicity.
    pub fn count_fn_symbols(&self) -> u64 {
        match self {
            Term::Var(_) | Term::Const(_) | Term::Named(_) | Term::E(_) => 0,
            Term::Apply(_, args) => 1 + args.iter().map(Term::count_fn_symbols).sum::<u64>(),
        }
    }

    pub fn check_language(&self, lang: &LanguageConfig) -> Result<(), String> {
        match self {
            Term::Var(_) | Term::Const(_) | Term::Named(_) | Term::E(_) => Ok(()),
            Term::Apply(f, args) => {
                if !lang.allows_fn(*f) {
                    return Err(format!("function symbol {f} not declared in this language"));
                }
                for a in args {
                    a.check_language(lang)?;
                }
                Ok(())
            }
        }
    }
}

/// The designated arithmetized predicates. Classified Delta_0 by fiat; their
/// Standard-M semantics is supplied by an evaluation context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArithTag {
    Prf,
    ExPrf,
    SubstPrf,
    Subst,
    Neg0,
    Neg1,
    Check,
    NegPrf,
    Test0,
}

impl ArithTag {
    pub fn name(self) -> &'static str {
        match self {
            ArithTag::Prf => "Prf",
            ArithTag::ExPrf => "ExPrf",
            ArithTag::SubstPrf => "SubstPrf",
            ArithTag::Subst => "Subst",
            ArithTag::Neg0 => "Neg0",
            ArithTag::Neg1 => "Neg1",
            ArithTag::Check => "Check",
            ArithTag::NegPrf => "NegPrf",
            ArithTag::Test0 => "Test0",
        }
    }

    pub fn from_name(s: &str) -> Option<ArithTag> {
        Some(match s {
            "Prf" => ArithTag::Prf,
            "ExPrf" => ArithTag::ExPrf,
            "SubstPrf" => ArithTag::SubstPrf,
            "Subst" => ArithTag::Subst,
            "Neg0" => ArithTag::Neg0,
            "Neg1" => ArithTag::Neg1,
            "Check" => ArithTag::Check,
            "NegPrf" => ArithTag::NegPrf,
            "Test0" => ArithTag::Test0,
            _ => return None,
        })
    }

    pub fn arity(self) -> usize {
        match self {
            ArithTag::Prf | ArithTag::Subst | ArithTag::Neg0 | ArithTag::Neg1 => 2,
            ArithTag::ExPrf | ArithTag::SubstPrf => 3,
            ArithTag::Check => 1,
            ArithTag::NegPrf | ArithTag::Test0 => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Atom {
    Eq(Term, Term),
    Leq(Term, Term),
    /// Graph of addition: Add(x, y, z) holds iff x + y = z.
    Add3(Term, Term, Term),
    /// Graph of multiplication: Mult(x, y, z) holds iff x * y = z.
    Mult3(Term, Term, Term),
    Arith(ArithTag, Vec<Term>),
    /// Uninterpreted predicate; structural operations only.
    Other(Symbol, Vec<Term>),
}

impl Atom {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Eq(a, b) | Atom::Leq(a, b) => vec![a, b],
            Atom::Add3(a, b, c) | Atom::Mult3(a, b, c) => vec![a, b, c],
            Atom::Arith(_, ts) | Atom::Other(_, ts) => ts.iter().collect(),
        }
    }

    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Atom {
        match self {
            Atom::Eq(a, b) => Atom::Eq(f(a), f(b)),
            Atom::Leq(a, b) => Atom::Leq(f(a), f(b)),
            Atom::Add3(a, b, c) => Atom::Add3(f(a), f(b), f(c)),
            Atom::Mult3(a, b, c) => Atom::Mult3(f(a), f(b), f(c)),
            Atom::Arith(t, ts) => Atom::Arith(*t, ts.iter().map(f).collect()),
            Atom::Other(n, ts) => Atom::Other(n.clone(), ts.iter().map(f).collect()),
        }
    }
}

/// Quantifier flavor for the bounded forms: `v <= bound` ordinarily, strictly
/// `v < bound` in Scope_E truncations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    Leq,
    Lt,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    BoundedForall {
        var: Symbol,
        kind: BoundKind,
        bound: Term,
        body: Box<Formula>,
    },
    BoundedExists {
        var: Symbol,
        kind: BoundKind,
        bound: Term,
        body: Box<Formula>,
    },
    Forall { var: Symbol, body: Box<Formula> },
    Exists { var: Symbol, body: Box<Formula> },
}

/// Prenex classification per the Delta_0 / Pi_n / Sigma_n hierarchy.
/// `Delta0` counts as Pi_0 and Sigma_0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrenexClass {
    Delta0,
    Pi(u32),
    Sigma(u32),
    NotPrenex,
}

impl PrenexClass {
    pub fn dual(self) -> PrenexClass {
        match self {
            PrenexClass::Delta0 => PrenexClass::Delta0,
            PrenexClass::Pi(n) => PrenexClass::Sigma(n),
            PrenexClass::Sigma(n) => PrenexClass::Pi(n),
            PrenexClass::NotPrenex => PrenexClass::NotPrenex,
        }
    }

    /// Membership in Pi_n (with Delta0 below everything).
    pub fn within_pi(self, n: u32) -> bool {
        match self {
            PrenexClass::Delta0 => true,
            PrenexClass::Pi(m) => m <= n,
            PrenexClass::Sigma(m) => m < n,
            PrenexClass::NotPrenex => false,
        }
    }

    pub fn within_sigma(self, n: u32) -> bool {
        match self {
            PrenexClass::Delta0 => true,
            PrenexClass::Sigma(m) => m <= n,
            PrenexClass::Pi(m) => m < n,
            PrenexClass::NotPrenex => false,
        }
    }
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(fs: Vec<Formula>) -> Formula {
        Formula::And(fs)
    }

    pub fn or(fs: Vec<Formula>) -> Formula {
        Formula::Or(fs)
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::Forall { var: var.to_string(), body: Box::new(body) }
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists { var: var.to_string(), body: Box::new(body) }
    }

    pub fn bounded_forall(var: &str, bound: Term, body: Formula) -> Formula {
        Formula::BoundedForall {
            var: var.to_string(),
            kind: BoundKind::Leq,
            bound,
            body: Box::new(body),
        }
    }

    pub fn bounded_exists(var: &str, bound: Term, body: Formula) -> Formula {
        Formula::BoundedExists {
            var: var.to_string(),
            kind: BoundKind::Leq,
            bound,
            body: Box::new(body),
        }
    }

    /// The designated absurdity 0 = 1.
    pub fn absurdity() -> Formula {
        Formula::Atom(Atom::Eq(Term::num(0), Term::num(1)))
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    fn collect_free_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Formula::Atom(a) => {
                for t in a.terms() {
                    t.free_vars(out);
                }
            }
            Formula::Not(f) => f.collect_free_vars(out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free_vars(out);
                }
            }
            Formula::Implies(a, b) => {
                a.collect_free_vars(out);
                b.collect_free_vars(out);
            }
            Formula::BoundedForall { var, bound, body, .. }
            | Formula::BoundedExists { var, bound, body, .. } => {
                bound.free_vars(out);
                let mut inner = BTreeSet::new();
                body.collect_free_vars(&mut inner);
                inner.remove(var);
                out.extend(inner);
            }
            Formula::Forall { var, body } | Formula::Exists { var, body } => {
                let mut inner = BTreeSet::new();
                body.collect_free_vars(&mut inner);
                inner.remove(var);
                out.extend(inner);
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Replaces free occurrences of `var`; bound occurrences are shielded.
    /// The replacement must be a closed term or a parameter symbol, so no
    /// capture is possible.
    pub fn substitute(&self, var: &str, t: &Term) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.map_terms(&mut |tm| tm.substitute(var, t))),
            Formula::Not(f) => Formula::not(f.substitute(var, t)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.substitute(var, t)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.substitute(var, t)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.substitute(var, t), b.substitute(var, t)),
            Formula::BoundedForall { var: v, kind, bound, body } => Formula::BoundedForall {
                var: v.clone(),
                kind: *kind,
                bound: bound.substitute(var, t),
                body: if v == var { body.clone() } else { Box::new(body.substitute(var, t)) },
            },
            Formula::BoundedExists { var: v, kind, bound, body } => Formula::BoundedExists {
                var: v.clone(),
                kind: *kind,
                bound: bound.substitute(var, t),
                body: if v == var { body.clone() } else { Box::new(body.substitute(var, t)) },
            },
            Formula::Forall { var: v, body } => Formula::Forall {
                var: v.clone(),
                body: if v == var { body.clone() } else { Box::new(body.substitute(var, t)) },
            },
            Formula::Exists { var: v, body } => Formula::Exists {
                var: v.clone(),
                body: if v == var { body.clone() } else { Box::new(body.substitute(var, t)) },
            },
        }
    }

    /// True when every quantifier in the formula is bounded.
    pub fn is_fully_bounded(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) => f.is_fully_bounded(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_fully_bounded),
            Formula::Implies(a, b) => a.is_fully_bounded() && b.is_fully_bounded(),
            Formula::BoundedForall { body, .. } | Formula::BoundedExists { body, .. } => {
                body.is_fully_bounded()
            }
            Formula::Forall { .. } | Formula::Exists { .. } => false,
        }
    }

    /// Delta_0 recognizer for a language: fully bounded, bounds obeying the
    /// language's quantifier-bound policy, all function symbols declared.
    pub fn is_delta0(&self, lang: &LanguageConfig) -> bool {
        self.is_fully_bounded() && self.language_ok(lang)
    }

    pub fn language_ok(&self, lang: &LanguageConfig) -> bool {
        match self {
            Formula::Atom(a) => a.terms().iter().all(|t| t.check_language(lang).is_ok()),
            Formula::Not(f) => f.language_ok(lang),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(|f| f.language_ok(lang)),
            Formula::Implies(a, b) => a.language_ok(lang) && b.language_ok(lang),
            Formula::BoundedForall { bound, body, .. }
            | Formula::BoundedExists { bound, body, .. } => {
                bound.bound_ok(lang.quantifier_bound_policy)
                    && bound.check_language(lang).is_ok()
                    && body.language_ok(lang)
            }
            Formula::Forall { body, .. } | Formula::Exists { body, .. } => body.language_ok(lang),
        }
    }

    /// Counts quantifiers, bounded and unbounded alike.
    pub fn count_quantifiers(&self) -> u64 {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => f.count_quantifiers(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::count_quantifiers).sum(),
            Formula::Implies(a, b) => a.count_quantifiers() + b.count_quantifiers(),
            Formula::BoundedForall { body, .. }
            | Formula::BoundedExists { body, .. }
            | Formula::Forall { body, .. }
            | Formula::Exists { body, .. } => 1 + body.count_quantifiers(),
        }
    }

    /// Function-symbol occurrences over the whole formula.
    pub fn count_fn_symbols(&self) -> u64 {
        match self {
            Formula::Atom(a) => a.terms().iter().map(|t| t.count_fn_symbols()).sum(),
            Formula::Not(f) => f.count_fn_symbols(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::count_fn_symbols).sum(),
            Formula::Implies(a, b) => a.count_fn_symbols() + b.count_fn_symbols(),
            Formula::BoundedForall { bound, body, .. }
            | Formula::BoundedExists { bound, body, .. } => {
                bound.count_fn_symbols() + body.count_fn_symbols()
            }
            Formula::Forall { body, .. } | Formula::Exists { body, .. } => body.count_fn_symbols(),
        }
    }

    /// Classification per the canonical-form rules: Delta0 iff fully bounded,
    /// otherwise the alternation count of the leading unbounded blocks over a
    /// Delta0 core, NotPrenex when an unbounded quantifier sits below a
    /// connective or bounded quantifier.
    pub fn classify_prenex(&self) -> PrenexClass {
        if self.is_fully_bounded() {
            return PrenexClass::Delta0;
        }
        match self {
            Formula::Forall { body, .. } => {
                // absorb the whole universal block
                let mut b: &Formula = body;
                while let Formula::Forall { body, .. } = b {
                    b = body;
                }
                match b.classify_prenex() {
                    PrenexClass::Delta0 => PrenexClass::Pi(1),
                    PrenexClass::Sigma(n) => PrenexClass::Pi(n + 1),
                    PrenexClass::Pi(_) => unreachable!("universal block fully absorbed"),
                    PrenexClass::NotPrenex => PrenexClass::NotPrenex,
                }
            }
            Formula::Exists { body, .. } => {
                let mut b: &Formula = body;
                while let Formula::Exists { body, .. } = b {
                    b = body;
                }
                match b.classify_prenex() {
                    PrenexClass::Delta0 => PrenexClass::Sigma(1),
                    PrenexClass::Pi(n) => PrenexClass::Sigma(n + 1),
                    PrenexClass::Sigma(_) => unreachable!("existential block fully absorbed"),
                    PrenexClass::NotPrenex => PrenexClass::NotPrenex,
                }
            }
            _ => PrenexClass::NotPrenex,
        }
    }

    /// Negation normal form: negation pushed to atoms with the rewrite rules
    /// for the `not` connective, double negations eliminated. Implications in
    /// positive positions are preserved.
    pub fn nnf(&self) -> Formula {
        match self {
            Formula::Not(inner) => inner.nnf_negated(),
            Formula::Atom(_) => self.clone(),
            Formula::And(fs) => Formula::And(fs.iter().map(Formula::nnf).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(Formula::nnf).collect()),
            Formula::Implies(a, b) => Formula::implies(a.nnf(), b.nnf()),
            Formula::BoundedForall { var, kind, bound, body } => Formula::BoundedForall {
                var: var.clone(),
                kind: *kind,
                bound: bound.clone(),
                body: Box::new(body.nnf()),
            },
            Formula::BoundedExists { var, kind, bound, body } => Formula::BoundedExists {
                var: var.clone(),
                kind: *kind,
                bound: bound.clone(),
                body: Box::new(body.nnf()),
            },
            Formula::Forall { var, body } => Formula::Forall {
                var: var.clone(),
                body: Box::new(body.nnf()),
            },
            Formula::Exists { var, body } => Formula::Exists {
                var: var.clone(),
                body: Box::new(body.nnf()),
            },
        }
    }

    /// nnf of the negation of self.
    fn nnf_negated(&self) -> Formula {
        match self {
            Formula::Not(inner) => inner.nnf(),
            Formula::Atom(_) => Formula::not(self.clone()),
            Formula::And(fs) => Formula::Or(fs.iter().map(Formula::nnf_negated).collect()),
            Formula::Or(fs) => Formula::And(fs.iter().map(Formula::nnf_negated).collect()),
            Formula::Implies(a, b) => Formula::And(vec![a.nnf(), b.nnf_negated()]),
            Formula::BoundedForall { var, kind, bound, body } => Formula::BoundedExists {
                var: var.clone(),
                kind: *kind,
                bound: bound.clone(),
                body: Box::new(body.nnf_negated()),
            },
            Formula::BoundedExists { var, kind, bound, body } => Formula::BoundedForall {
                var: var.clone(),
                kind: *kind,
                bound: bound.clone(),
                body: Box::new(body.nnf_negated()),
            },
            Formula::Forall { var, body } => Formula::Exists {
                var: var.clone(),
                body: Box::new(body.nnf_negated()),
            },
            Formula::Exists { var, body } => Formula::Forall {
                var: var.clone(),
                body: Box::new(body.nnf_negated()),
            },
        }
    }

    /// Prenex-level dual of the negation: leading unbounded quantifiers are
    /// flipped and the negation is pushed into the Delta_0 core, which is then
    /// normalized by the `not`-rewrite rules.
    pub fn reverse(&self) -> Result<Formula, NotPrenex> {
        match self.classify_prenex() {
            PrenexClass::NotPrenex => Err(NotPrenex),
            _ => Ok(self.reverse_inner()),
        }
    }

    fn reverse_inner(&self) -> Formula {
        match self {
            Formula::Forall { var, body } => Formula::Exists {
                var: var.clone(),
                body: Box::new(body.reverse_inner()),
            },
            Formula::Exists { var, body } => Formula::Forall {
                var: var.clone(),
                body: Box::new(body.reverse_inner()),
            },
            core => core.nnf_negated(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("formula is not prenex")]
pub struct NotPrenex;

/// A finite ordered list of sentences, optionally extended by a schema
/// generator (the r.e. part of an axiom system).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSystem {
    pub sentences: Vec<Formula>,
    pub generator: Option<crate::generator::Generator>,
}

impl AxiomSystem {
    pub fn new(sentences: Vec<Formula>) -> AxiomSystem {
        for s in &sentences {
            assert!(s.is_sentence(), "axiom has free variables");
        }
        AxiomSystem { sentences, generator: None }
    }

    pub fn empty() -> AxiomSystem {
        AxiomSystem { sentences: Vec::new(), generator: None }
    }

    pub fn with_generator(mut self, g: crate::generator::Generator) -> AxiomSystem {
        self.generator = Some(g);
        self
    }

    /// Listed sentences plus the generator output materialized up to the
    /// given Godel-code bit bound.
    pub fn materialize(&self, max_code_bits: u32) -> Vec<Formula> {
        let mut out = self.sentences.clone();
        if let Some(g) = &self.generator {
            out.extend(g.produce(max_code_bits));
        }
        out
    }

    pub fn union_with(&self, extra: &[Formula]) -> AxiomSystem {
        let mut sentences = self.sentences.clone();
        for f in extra {
            if !sentences.contains(f) {
                sentences.push(f.clone());
            }
        }
        AxiomSystem { sentences, generator: self.generator.clone() }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::print::print_formula(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::print::print_term(self))
    }
}
