//! Standard-M evaluation of terms and fully-bounded formulas, quantifier
//! truncation (Scope_E), the Good(N) predicate and the sharp threshold.
//!
//! Evaluation is definitionally exhaustive: bounded quantifiers iterate their
//! whole range. Exceeding the budget is a third verdict, reported as an error
//! distinct from falsity.

use crate::formula::{Atom, BoundKind, Formula, NotPrenex, PrenexClass, Symbol, Term};
use crate::nat::Nat;
use std::collections::HashMap;
use std::time::{Duration, Instant};
use thiserror::Error;

pub type Env = HashMap<Symbol, Nat>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalBudget {
    pub max_tuples: u64,
    pub max_seconds: Duration,
}

impl EvalBudget {
    pub fn new(max_tuples: u64, max_seconds: Duration) -> EvalBudget {
        assert!(max_tuples > 0 && !max_seconds.is_zero());
        EvalBudget { max_tuples, max_seconds }
    }

    pub fn small() -> EvalBudget {
        EvalBudget::new(1 << 22, Duration::from_secs(10))
    }

    pub fn standard() -> EvalBudget {
        EvalBudget::new(1 << 28, Duration::from_secs(120))
    }
}

pub struct BudgetMeter {
    remaining: u64,
    deadline: Instant,
    check_counter: u32,
}

impl BudgetMeter {
    pub fn new(budget: &EvalBudget) -> BudgetMeter {
        BudgetMeter {
            remaining: budget.max_tuples,
            deadline: Instant::now() + budget.max_seconds,
            check_counter: 0,
        }
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        if self.remaining == 0 {
            return Err(EvalError::BudgetExceeded);
        }
        self.remaining -= 1;
        self.check_counter = self.check_counter.wrapping_add(1);
        if self.check_counter % 4096 == 0 && Instant::now() > self.deadline {
            return Err(EvalError::BudgetExceeded);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVar(String),
    #[error("unbounded quantifier in bounded evaluation")]
    UnboundedQuantifier,
    #[error("evaluation budget exceeded")]
    BudgetExceeded,
    #[error("uninterpreted atom `{0}` has no Standard-M value")]
    UninterpretedAtom(String),
    #[error("arithmetized atom evaluated without a context")]
    NoAtomContext,
}

/// Semantics provider for the designated arithmetized atoms. Implementations
/// must be total: malformed codes yield false, never an error.
pub trait AtomSemantics {
    fn eval_atom(&self, tag: crate::formula::ArithTag, args: &[Nat]) -> Result<bool, EvalError>;
}

/// Context-free evaluation: any arithmetized atom is an error.
pub struct NoAtoms;

impl AtomSemantics for NoAtoms {
    fn eval_atom(&self, _: crate::formula::ArithTag, _: &[Nat]) -> Result<bool, EvalError> {
        Err(EvalError::NoAtomContext)
    }
}

pub fn eval_term(t: &Term, env: &Env) -> Result<Nat, EvalError> {
    match t {
        Term::Var(v) => env.get(v).cloned().ok_or_else(|| EvalError::UnboundVar(v.clone())),
        Term::Const(n) => Ok(n.clone()),
        Term::Named(nc) => Ok(nc.value()),
        Term::E(n) => Ok(Nat::pow2(*n)),
        Term::Apply(f, args) => {
            use crate::lang::FnSym::*;
            let a = eval_term(&args[0], env)?;
            match f {
                Log => Ok(a.log2_floor()),
                Double => Ok(a.add(&a)),
                _ => {
                    let b = eval_term(&args[1], env)?;
                    Ok(match f {
                        Add => a.add(&b),
                        Mul => a.mul(&b),
                        Max => a.max_with(&b),
                        Sub => a.sub_floor(&b),
                        Div => a.div_total(&b),
                        Root => a.root_ceil(&b),
                        Count => a.count_ones_low(&b),
                        Log | Double => unreachable!(),
                    })
                }
            }
        }
    }
}

/// Classical truth of a fully-bounded formula by exhaustive iteration over
/// every bounded quantifier's range.
pub fn eval_bounded(
    f: &Formula,
    env: &mut Env,
    atoms: &dyn AtomSemantics,
    meter: &mut BudgetMeter,
) -> Result<bool, EvalError> {
    match f {
        Formula::Atom(a) => eval_atom(a, env, atoms),
        Formula::Not(inner) => Ok(!eval_bounded(inner, env, atoms, meter)?),
        Formula::And(fs) => {
            for g in fs {
                if !eval_bounded(g, env, atoms, meter)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(fs) => {
            for g in fs {
                if eval_bounded(g, env, atoms, meter)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Implies(a, b) => {
            if !eval_bounded(a, env, atoms, meter)? {
                return Ok(true);
            }
            eval_bounded(b, env, atoms, meter)
        }
        Formula::BoundedForall { var, kind, bound, body } => {
            iterate(var, *kind, bound, env, atoms, meter, &mut |env, atoms, meter| {
                eval_bounded(body, env, atoms, meter)
            }, true)
        }
        Formula::BoundedExists { var, kind, bound, body } => {
            iterate(var, *kind, bound, env, atoms, meter, &mut |env, atoms, meter| {
                eval_bounded(body, env, atoms, meter)
            }, false)
        }
        Formula::Forall { .. } | Formula::Exists { .. } => Err(EvalError::UnboundedQuantifier),
    }
}

/// Exhausts v over [0, bound] (or [0, bound) for strict bounds). `universal`
/// selects forall (early false) versus exists (early true) semantics.
#[allow(clippy::too_many_arguments)]
fn iterate(
    var: &str,
    kind: BoundKind,
    bound: &Term,
    env: &mut Env,
    atoms: &dyn AtomSemantics,
    meter: &mut BudgetMeter,
    body: &mut dyn FnMut(&mut Env, &dyn AtomSemantics, &mut BudgetMeter) -> Result<bool, EvalError>,
    universal: bool,
) -> Result<bool, EvalError> {
    let bound_val = eval_term(bound, env)?;
    let saved = env.get(var).cloned();
    let result = (|| {
        match bound_val.as_u64() {
            Some(b) => {
                let upper_inclusive = match kind {
                    BoundKind::Leq => Some(b),
                    BoundKind::Lt => b.checked_sub(1),
                };
                let Some(upper) = upper_inclusive else {
                    // v < 0: empty range
                    return Ok(universal);
                };
                for v in 0..=upper {
                    meter.tick()?;
                    env.insert(var.to_string(), Nat::Small(v));
                    let r = body(env, atoms, meter)?;
                    if r != universal {
                        return Ok(!universal);
                    }
                }
                Ok(universal)
            }
            None => {
                // A range beyond u64 cannot be exhausted within any budget.
                Err(EvalError::BudgetExceeded)
            }
        }
    })();
    match saved {
        Some(old) => {
            env.insert(var.to_string(), old);
        }
        None => {
            env.remove(var);
        }
    }
    result
}

fn eval_atom(a: &Atom, env: &Env, atoms: &dyn AtomSemantics) -> Result<bool, EvalError> {
    match a {
        Atom::Eq(x, y) => Ok(eval_term(x, env)? == eval_term(y, env)?),
        Atom::Leq(x, y) => Ok(eval_term(x, env)? <= eval_term(y, env)?),
        Atom::Add3(x, y, z) => {
            Ok(eval_term(x, env)?.add(&eval_term(y, env)?) == eval_term(z, env)?)
        }
        Atom::Mult3(x, y, z) => {
            Ok(eval_term(x, env)?.mul(&eval_term(y, env)?) == eval_term(z, env)?)
        }
        Atom::Arith(tag, ts) => {
            let vals: Vec<Nat> =
                ts.iter().map(|t| eval_term(t, env)).collect::<Result<_, _>>()?;
            atoms.eval_atom(*tag, &vals)
        }
        Atom::Other(name, _) => Err(EvalError::UninterpretedAtom(name.clone())),
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ScopeError {
    #[error("scope_E rejects prenex classes beyond level 1 (got {0:?})")]
    TooDeep(PrenexClass),
    #[error(transparent)]
    NotPrenex(#[from] NotPrenex),
}

/// Scope_E: every unbounded quantifier truncated to range strictly below
/// E(N) = 2^N. Bounded quantifiers are untouched; Delta_0 input is returned
/// syntactically unchanged.
pub fn scope_e(f: &Formula, n: u32) -> Result<Formula, ScopeError> {
    match f.classify_prenex() {
        PrenexClass::Delta0 => Ok(f.clone()),
        PrenexClass::Pi(1) | PrenexClass::Sigma(1) => Ok(truncate(f, n)),
        PrenexClass::NotPrenex => Err(ScopeError::NotPrenex(NotPrenex)),
        other => Err(ScopeError::TooDeep(other)),
    }
}

fn truncate(f: &Formula, n: u32) -> Formula {
    match f {
        Formula::Forall { var, body } => Formula::BoundedForall {
            var: var.clone(),
            kind: BoundKind::Lt,
            bound: Term::E(n),
            body: Box::new(truncate(body, n)),
        },
        Formula::Exists { var, body } => Formula::BoundedExists {
            var: var.clone(),
            kind: BoundKind::Lt,
            bound: Term::E(n),
            body: Box::new(truncate(body, n)),
        },
        delta0 => delta0.clone(),
    }
}

/// Good(N): Scope_E(f, N) is true at Standard-M. `f` must be a Pi_1 or
/// Sigma_1 sentence.
pub fn is_good(
    f: &Formula,
    n: u32,
    budget: &EvalBudget,
    atoms: &dyn AtomSemantics,
) -> Result<bool, EvalError> {
    let scoped = scope_e(f, n).map_err(|_| EvalError::UnboundedQuantifier)?;
    let mut env = Env::new();
    let mut meter = BudgetMeter::new(budget);
    eval_bounded(&scoped, &mut env, atoms, &mut meter)
}

/// The bounded-infinity goodness threshold.
///
/// `Finite(j)` with j >= 0 means Good(j) holds and Good(j+1) fails;
/// `Finite(-1)` is the distinguished "never good" value (Good(0) already
/// fails); `AtLeast(n)` means Good held for every tested N <= n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Sharp {
    Finite(i64),
    AtLeast(u32),
}

impl Sharp {
    /// Working numeric value: the exact threshold for Finite, the tested
    /// horizon for AtLeast.
    pub fn working_value(self) -> i64 {
        match self {
            Sharp::Finite(j) => j,
            Sharp::AtLeast(n) => n as i64,
        }
    }

    /// Pointwise minimum under the Finite/AtLeast lattice. Both sides must
    /// come from scans with the same Nmax.
    pub fn min(self, other: Sharp) -> Sharp {
        match (self, other) {
            (Sharp::Finite(a), Sharp::Finite(b)) => Sharp::Finite(a.min(b)),
            (Sharp::Finite(a), Sharp::AtLeast(_)) => Sharp::Finite(a),
            (Sharp::AtLeast(_), Sharp::Finite(b)) => Sharp::Finite(b),
            (Sharp::AtLeast(a), Sharp::AtLeast(b)) => Sharp::AtLeast(a.min(b)),
        }
    }
}

impl std::fmt::Display for Sharp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sharp::Finite(j) => write!(f, "Finite({j})"),
            Sharp::AtLeast(n) => write!(f, "AtLeast({n})"),
        }
    }
}

/// Largest J with Good(J), scanned upward using the downward closure of Pi_1
/// goodness. `f` must be a Pi_1 sentence.
pub fn sharp(
    f: &Formula,
    nmax: u32,
    budget: &EvalBudget,
    atoms: &dyn AtomSemantics,
) -> Result<Sharp, EvalError> {
    assert!(
        f.classify_prenex().within_pi(1),
        "sharp is defined for Pi_1 sentences, got {:?}",
        f.classify_prenex()
    );
    for n in 0..=nmax {
        if !is_good(f, n, budget, atoms)? {
            return Ok(Sharp::Finite(n as i64 - 1));
        }
    }
    Ok(Sharp::AtLeast(nmax))
}

/// Pointwise minimum of member sharps. Generator-backed systems must be
/// materialized by the caller beforehand.
pub fn sharp_set(
    sentences: &[Formula],
    nmax: u32,
    budget: &EvalBudget,
    atoms: &dyn AtomSemantics,
) -> Result<Sharp, EvalError> {
    let mut acc = Sharp::AtLeast(nmax);
    for f in sentences {
        acc = acc.min(sharp(f, nmax, budget, atoms)?);
        if acc == Sharp::Finite(-1) {
            break;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::LanguageConfig;
    use crate::parse::parse_formula;

    fn ev(src: &str) -> bool {
        let lang = LanguageConfig::u_star();
        let f = parse_formula(src, &lang).unwrap();
        let mut env = Env::new();
        let mut meter = BudgetMeter::new(&EvalBudget::small());
        eval_bounded(&f, &mut env, &NoAtoms, &mut meter).unwrap()
    }

    fn term_val(src: &str) -> Nat {
        let lang = LanguageConfig::u_star();
        let t = crate::parse::parse_term(src, &lang).unwrap();
        eval_term(&t, &Env::new()).unwrap()
    }

    #[test]
    fn grounding_function_semantics() {
        assert_eq!(term_val("(- 3 5)"), Nat::from(0u64));
        assert_eq!(term_val("(- 5 3)"), Nat::from(2u64));
        assert_eq!(term_val("(div 7 0)"), Nat::from(7u64));
        assert_eq!(term_val("(div 7 2)"), Nat::from(3u64));
        assert_eq!(term_val("(count 11 3)"), Nat::from(2u64));
        assert_eq!(term_val("(root 10 2)"), Nat::from(4u64));
        assert_eq!(term_val("(root 9 2)"), Nat::from(3u64));
        assert_eq!(term_val("(root 9 0)"), Nat::from(9u64));
        assert_eq!(term_val("(log 8)"), Nat::from(3u64));
        assert_eq!(term_val("(log 1)"), Nat::from(0u64));
        assert_eq!(term_val("(double 6)"), Nat::from(12u64));
        assert_eq!(term_val("(max 4 9)"), Nat::from(9u64));
    }

    #[test]
    fn bounded_evaluation() {
        assert!(ev("(forall (v 5) (<= v 5))"));
        assert!(!ev("(forall (v 5) (<= v 4))"));
        assert!(ev("(exists (v 5) (= v 3))"));
        assert!(!ev("(exists (v 5) (= v 7))"));
    }

    #[test]
    fn multiplication_graph_formula() {
        // the quantifier-free Mult graph over division and subtraction
        let src = "(and (-> (or (= x 0) (= y 0)) (= z 0)) \
                   (-> (and (not (= x 0)) (not (= y 0))) \
                   (and (= (div z x) y) (<= (div (- z 1) x) (- y 1)))))";
        let lang = LanguageConfig::u_star();
        let f = parse_formula(src, &lang).unwrap();
        let budget = EvalBudget::small();
        let cases = [(3u64, 4u64, 12u64, true), (3, 4, 11, false), (0, 5, 0, true), (2, 3, 7, false)];
        for (x, y, z, want) in cases {
            let mut env = Env::new();
            env.insert("x".into(), Nat::from(x));
            env.insert("y".into(), Nat::from(y));
            env.insert("z".into(), Nat::from(z));
            let mut meter = BudgetMeter::new(&budget);
            assert_eq!(
                eval_bounded(&f, &mut env, &NoAtoms, &mut meter).unwrap(),
                want,
                "x={x} y={y} z={z}"
            );
        }
    }

    #[test]
    fn scope_leaves_delta0_unchanged() {
        let lang = LanguageConfig::u_star();
        let f = parse_formula("(forall (v 5) (<= v 5))", &lang).unwrap();
        assert_eq!(scope_e(&f, 3).unwrap(), f);
    }

    #[test]
    fn scope_truncates_strictly() {
        let lang = LanguageConfig::u_star();
        let f = parse_formula("(exists v (= v 2))", &lang).unwrap();
        let scoped = scope_e(&f, 1).unwrap();
        assert_eq!(crate::print::print_formula(&scoped), "(exists (v < (E 1)) (= v 2))");
    }

    #[test]
    fn goodness_examples() {
        let lang = LanguageConfig::u_star();
        let budget = EvalBudget::small();
        let taut = parse_formula("(forall x (<= x (max x x)))", &lang).unwrap();
        for n in 0..=6 {
            assert!(is_good(&taut, n, &budget, &NoAtoms).unwrap());
        }
        let f = parse_formula("(forall x (<= x 5))", &lang).unwrap();
        assert!(is_good(&f, 2, &budget, &NoAtoms).unwrap());
        assert!(!is_good(&f, 3, &budget, &NoAtoms).unwrap());
        // Sigma_1 goodness strengthens as N shrinks
        let g = parse_formula("(exists x (= x 2))", &lang).unwrap();
        assert!(!is_good(&g, 1, &budget, &NoAtoms).unwrap());
        assert!(is_good(&g, 2, &budget, &NoAtoms).unwrap());
    }

    #[test]
    fn sharp_examples() {
        let lang = LanguageConfig::u_star();
        let budget = EvalBudget::small();
        let f = parse_formula("(forall x (<= x 5))", &lang).unwrap();
        assert_eq!(sharp(&f, 8, &budget, &NoAtoms).unwrap(), Sharp::Finite(2));
        let z = parse_formula("(forall x (<= x 0))", &lang).unwrap();
        assert_eq!(sharp(&z, 8, &budget, &NoAtoms).unwrap(), Sharp::Finite(0));
        let taut = parse_formula("(forall x (<= x x))", &lang).unwrap();
        assert_eq!(sharp(&taut, 8, &budget, &NoAtoms).unwrap(), Sharp::AtLeast(8));
        let never = parse_formula("(forall x (<= (+ x 1) 0))", &lang).unwrap();
        assert_eq!(sharp(&never, 8, &budget, &NoAtoms).unwrap(), Sharp::Finite(-1));
    }

    #[test]
    fn sharp_set_examples() {
        let lang = LanguageConfig::u_star();
        let budget = EvalBudget::small();
        let taut = parse_formula("(forall x (<= x x))", &lang).unwrap();
        let five = parse_formula("(forall x (<= x 5))", &lang).unwrap();
        let zero = parse_formula("(forall x (<= x 0))", &lang).unwrap();
        assert_eq!(
            sharp_set(&[taut.clone(), five.clone()], 8, &budget, &NoAtoms).unwrap(),
            Sharp::Finite(2)
        );
        assert_eq!(sharp_set(&[], 8, &budget, &NoAtoms).unwrap(), Sharp::AtLeast(8));
        assert_eq!(
            sharp_set(&[zero, five.clone()], 8, &budget, &NoAtoms).unwrap(),
            Sharp::Finite(0)
        );
        // singleton agreement
        assert_eq!(
            sharp_set(&[five.clone()], 8, &budget, &NoAtoms).unwrap(),
            sharp(&five, 8, &budget, &NoAtoms).unwrap()
        );
    }

    #[test]
    fn budget_exceeded_is_not_false() {
        let lang = LanguageConfig::u_star();
        let f = parse_formula("(forall x (<= 0 (+ x 0)))", &lang).unwrap();
        let budget = EvalBudget::new(10, Duration::from_secs(5));
        assert_eq!(is_good(&f, 20, &budget, &NoAtoms), Err(EvalError::BudgetExceeded));
    }
}
