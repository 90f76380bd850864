//! Arithmetized predicate evaluators and the self-referential constructions:
//! the consistency sentence for a system, the two-proof fixed point, system
//! extension with a self-consistency axiom, the reflection schema, global
//! simulation sentences, and braced membership.

use crate::codec::{self, GoedelCode};
use crate::config::GenericConfiguration;
use crate::eval::{AtomSemantics, EvalError};
use crate::formula::{ArithTag, Atom, AxiomSystem, Formula, PrenexClass, Term};
use crate::lang::LanguageConfig;
use crate::nat::Nat;
use crate::prover::{
    decode_hilbert_value, decode_proof_value, herbrand_prove, tableau_prove, tabu1_prove,
    DeductionKind, HerbrandResult, ProveResult, SearchBudget,
};
use serde::Serialize;

/// Frozen evaluation session for the designated arithmetized atoms.
///
/// Prf / ExPrf / SubstPrf refer to proofs from `system` under `deduction`.
/// NegPrf and Test0 refer to refutations from `base_system` under
/// `base_deduction` (the configuration's own base); for global simulation
/// sentences the two differ, otherwise they coincide.
pub struct ArithAtomContext {
    pub system: AxiomSystem,
    pub deduction: DeductionKind,
    pub base_system: AxiomSystem,
    pub base_deduction: DeductionKind,
    pub lang: LanguageConfig,
    pub k: u32,
    pub axiom_code_bits: u32,
    system_materialized: Vec<Formula>,
    base_materialized: Vec<Formula>,
}

impl ArithAtomContext {
    pub fn new(
        system: AxiomSystem,
        deduction: DeductionKind,
        lang: LanguageConfig,
        k: u32,
    ) -> ArithAtomContext {
        let axiom_code_bits = 14;
        let system_materialized = system.materialize(axiom_code_bits);
        ArithAtomContext {
            base_system: system.clone(),
            base_deduction: deduction,
            base_materialized: system_materialized.clone(),
            system,
            deduction,
            lang,
            k,
            axiom_code_bits,
            system_materialized,
        }
    }

    pub fn for_config(config: &GenericConfiguration, k: u32) -> ArithAtomContext {
        ArithAtomContext::new(
            config.base_axioms.clone(),
            config.deduction,
            config.language.clone(),
            k,
        )
    }

    pub fn with_base(mut self, base: AxiomSystem, deduction: DeductionKind) -> ArithAtomContext {
        self.base_materialized = base.materialize(self.axiom_code_bits);
        self.base_system = base;
        self.base_deduction = deduction;
        self
    }

    /// Prf(t, p) against an explicit, pre-materialized axiom list.
    fn prf_against(
        &self,
        materialized: &[Formula],
        deduction: DeductionKind,
        t: &Nat,
        p: &Nat,
    ) -> bool {
        let Ok(goal) = codec::decode_formula_value(&t.to_biguint()) else { return false };
        if !goal.is_sentence() {
            return false;
        }
        match deduction {
            DeductionKind::Tableaux | DeductionKind::TabU1 => {
                let Ok(tree) = decode_proof_value(&p.to_biguint()) else { return false };
                let Ok(expected_root) = goal.reverse() else { return false };
                if tree.root().formula != expected_root
                    || tree.root().provenance != crate::prover::Provenance::Root
                {
                    return false;
                }
                let ctx = crate::prover::CheckContext {
                    axioms: materialized,
                    lang: &self.lang,
                    deduction,
                };
                crate::prover::validate_tree(&tree, &ctx, true, false).is_ok()
            }
            DeductionKind::Hilbert => {
                let Ok(proof) = decode_hilbert_value(&p.to_biguint()) else { return false };
                if proof.conclusion() != Some(&goal) {
                    return false;
                }
                crate::prover::hilbert_check_against(&proof, materialized).is_ok()
            }
            DeductionKind::Herbrand => {
                // Herbrand certificates carry no self-checking tree; the atom
                // holds exactly for the canonical certificate this session
                // would produce for the goal.
                let system = AxiomSystem::new(materialized.to_vec());
                match herbrand_prove(&system, &goal, &self.lang, 1, &SearchBudget::small()) {
                    HerbrandResult::Proved(proof) => {
                        let canonical = num_bigint::BigUint::parse_bytes(
                            proof.code_hex.as_bytes(),
                            16,
                        );
                        canonical.map(Nat::from_biguint).as_ref() == Some(p)
                    }
                    _ => false,
                }
            }
        }
    }

    fn prf(&self, t: &Nat, p: &Nat) -> bool {
        self.prf_against(&self.system_materialized, self.deduction, t, p)
    }

    fn exprf(&self, h: &Nat, t: &Nat, p: &Nat) -> bool {
        let Ok(extra) = codec::decode_formula_value(&h.to_biguint()) else { return false };
        if !extra.is_sentence() {
            return false;
        }
        let mut extended = self.system_materialized.clone();
        if !extended.contains(&extra) {
            extended.push(extra);
        }
        self.prf_against(&extended, self.deduction, t, p)
    }

    /// SubstPrf(g, t, p) = Prf(t, p) or there is an h <= p with Subst(g, h)
    /// and ExPrf(h, t, p). Subst is functional in h, so the bounded search is
    /// realized by computing the unique candidate and comparing against p.
    fn substprf(&self, g: &Nat, t: &Nat, p: &Nat) -> bool {
        if self.prf(t, p) {
            return true;
        }
        let Ok(template) = codec::decode_formula_value(&g.to_biguint()) else { return false };
        if template.free_vars().is_empty() {
            return false;
        }
        let numeral = Term::Const(g.clone());
        let mut sentence = template.clone();
        for v in &template.free_vars() {
            sentence = sentence.substitute(v, &numeral);
        }
        let h = codec::encode_formula(&sentence).to_nat();
        h <= *p && self.exprf(&h, t, p)
    }

    fn neg_k(&self, k: u32, x: &Nat, y: &Nat) -> bool {
        let Ok(a) = codec::decode_formula_value(&x.to_biguint()) else { return false };
        if !a.is_sentence() || !a.classify_prenex().within_pi(k) {
            return false;
        }
        let Ok(rev) = a.reverse() else { return false };
        codec::encode_formula(&rev).to_nat() == *y
    }

    fn check(&self, t: &Nat) -> bool {
        match codec::decode_formula_value(&t.to_biguint()) {
            Ok(f) => f.is_sentence() && f.classify_prenex().within_pi(1),
            Err(_) => false,
        }
    }

    fn negprf(&self, t: &Nat, x: &Nat) -> bool {
        if !self.check(t) {
            return false;
        }
        let f = codec::decode_formula_value(&t.to_biguint()).expect("checked");
        let Ok(rev) = f.reverse() else { return false };
        let rev_code = codec::encode_formula(&rev).to_nat();
        self.prf_against(&self.base_materialized, self.base_deduction, &rev_code, x)
    }
}

impl AtomSemantics for ArithAtomContext {
    fn eval_atom(&self, tag: ArithTag, args: &[Nat]) -> Result<bool, EvalError> {
        Ok(match tag {
            ArithTag::Prf => self.prf(&args[0], &args[1]),
            ArithTag::ExPrf => self.exprf(&args[0], &args[1], &args[2]),
            ArithTag::SubstPrf => self.substprf(&args[0], &args[1], &args[2]),
            ArithTag::Subst => codec::subst_check_values(&args[0], &args[1]),
            ArithTag::Neg0 => self.neg_k(0, &args[0], &args[1]),
            ArithTag::Neg1 => self.neg_k(1, &args[0], &args[1]),
            ArithTag::Check => self.check(&args[0]),
            ArithTag::NegPrf => self.negprf(&args[0], &args[1]),
            ArithTag::Test0 => !self.negprf(&args[0], &args[1]),
        })
    }
}

// ---------------------------------------------------------------------------
// Fixed-point builders
// ---------------------------------------------------------------------------

fn arith(tag: ArithTag, ts: Vec<Term>) -> Formula {
    Formula::Atom(Atom::Arith(tag, ts))
}

/// The template `forall p not SubstPrf(g, code(0=1), p)` with free g.
pub fn selfref_template() -> Formula {
    let absurdity_code = codec::encode_formula(&Formula::absurdity()).to_nat();
    Formula::forall(
        "p",
        Formula::not(arith(
            ArithTag::SubstPrf,
            vec![Term::var("g"), Term::Const(absurdity_code), Term::var("p")],
        )),
    )
}

/// The Pi_1 sentence declaring that no proof of 0=1 exists from the system
/// together with this very sentence, built by the fixed-point template.
pub fn build_selfref() -> (GoedelCode, Formula) {
    codec::self_substitution(&selfref_template())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfConsSentence {
    pub formula: Formula,
    pub template_code: GoedelCode,
    pub k: u32,
}

impl SelfConsSentence {
    /// The fixed-point identity: the template code substituted into itself
    /// yields exactly this sentence.
    pub fn fixed_point_holds(&self) -> bool {
        let h = codec::encode_formula(&self.formula);
        codec::subst_check(&self.template_code, &h)
    }
}

/// The template Gamma^k(g) =
/// forall x y p q not { Neg^k(x,y) and SubstPrf(g,x,p) and SubstPrf(g,y,q) }.
pub fn selfcons_template(k: u32) -> Formula {
    let neg_tag = if k == 0 { ArithTag::Neg0 } else { ArithTag::Neg1 };
    let body = Formula::not(Formula::And(vec![
        arith(neg_tag, vec![Term::var("x"), Term::var("y")]),
        arith(ArithTag::SubstPrf, vec![Term::var("g"), Term::var("x"), Term::var("p")]),
        arith(ArithTag::SubstPrf, vec![Term::var("g"), Term::var("y"), Term::var("q")]),
    ]));
    Formula::forall("x", Formula::forall("y", Formula::forall("p", Formula::forall("q", body))))
}

/// Constructs Gamma^k(n) for n the template's own code: the Pi_1 sentence
/// declaring the Level(k) consistency of the system extended with itself.
pub fn build_selfcons(k: u32) -> SelfConsSentence {
    assert!(k <= 1, "self-consistency sentences are built for k in {{0, 1}}");
    let template = selfcons_template(k);
    let (template_code, formula) = codec::self_substitution(&template);
    debug_assert_eq!(formula.classify_prenex(), PrenexClass::Pi(1));
    SelfConsSentence { formula, template_code, k }
}

/// theta united with the base axioms plus the matching self-consistency
/// sentence. Every member of theta must be Pi_1.
pub fn build_g(
    theta: &AxiomSystem,
    config: &GenericConfiguration,
    k: u32,
) -> Result<AxiomSystem, String> {
    for f in &theta.sentences {
        if !f.classify_prenex().within_pi(1) {
            return Err(format!("`{f}` is not a Pi_1 sentence"));
        }
    }
    let mut combined = config.base_axioms.union_with(&theta.sentences);
    // keep theta's sentences first, matching the definition's ordering
    let mut sentences = theta.sentences.clone();
    for s in &config.base_axioms.sentences {
        if !sentences.contains(s) {
            sentences.push(s.clone());
        }
    }
    let selfcons = build_selfcons(k);
    sentences.push(selfcons.formula.clone());
    combined.sentences = sentences;
    Ok(combined)
}

/// forall q { Prf(code(psi), q) -> psi }, the reflection axiom for one
/// sentence of the simulated system.
pub fn group2_axiom(psi: &Formula) -> Result<Formula, String> {
    if !psi.classify_prenex().within_pi(1) {
        return Err(format!("`{psi}` is not a Pi_1 sentence"));
    }
    Ok(crate::generator::group2_shape(psi))
}

/// forall t q x { [Prf(t,q) and Check(t)] -> Test_j(t,x) }. Only the
/// Test0 index is registered.
pub fn globsim_sentence(j: u32) -> Result<Formula, String> {
    if j != 0 {
        return Err(format!("unknown test index {j}; the registry holds j = 0"));
    }
    let body = Formula::implies(
        Formula::And(vec![
            arith(ArithTag::Prf, vec![Term::var("t"), Term::var("q")]),
            arith(ArithTag::Check, vec![Term::var("t")]),
        ]),
        arith(ArithTag::Test0, vec![Term::var("t"), Term::var("x")]),
    );
    Ok(Formula::forall("t", Formula::forall("q", Formula::forall("x", body))))
}

/// The Pi_1 translation of psi: forall x Test_j(code(psi), x).
pub fn test_translation(psi: &Formula, j: u32) -> Result<Formula, String> {
    if j != 0 {
        return Err(format!("unknown test index {j}"));
    }
    let code = codec::encode_formula(psi).to_nat();
    Ok(Formula::forall("x", arith(ArithTag::Test0, vec![Term::Const(code), Term::var("x")])))
}

/// forall p [ Prf(code(psi), p) -> psi^T ] with psi^T the Test_j translation.
pub fn reflection_sentence(psi: &Formula, j: u32) -> Result<Formula, String> {
    if !psi.classify_prenex().within_pi(1) {
        return Err(format!("`{psi}` is not a Pi_1 sentence"));
    }
    let code = codec::encode_formula(psi).to_nat();
    let translated = test_translation(psi, j)?;
    Ok(Formula::forall(
        "p",
        Formula::implies(
            arith(ArithTag::Prf, vec![Term::Const(code), Term::var("p")]),
            translated,
        ),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BracedVerdict {
    Yes,
    NoWithinBudget,
}

/// Membership in the braced class for (phi, j): provability of
/// { forall x Test_j(code(psi), x) } -> psi from the base plus phi, realized
/// by proving psi from the base extended with phi and the test premise.
pub fn braced_member(
    psi: &Formula,
    phi: &Formula,
    j: u32,
    config: &GenericConfiguration,
    budget: &SearchBudget,
) -> Result<BracedVerdict, String> {
    if !psi.classify_prenex().within_pi(1) || !phi.classify_prenex().within_pi(1) {
        return Err("braced membership is defined for Pi_1 sentences".into());
    }
    let premise = test_translation(psi, j)?;
    let axioms = config.base_axioms.union_with(&[phi.clone(), premise]);
    let result = match config.deduction {
        DeductionKind::TabU1 => tabu1_prove(&axioms, psi, &config.language, budget),
        _ => tableau_prove(&axioms, psi, &config.language, budget),
    };
    Ok(match result {
        ProveResult::Proved(_) => BracedVerdict::Yes,
        _ => BracedVerdict::NoWithinBudget,
    })
}

/// Provenance sidecar for constructed sentences.
#[derive(Serialize)]
pub struct SentenceSidecar {
    pub template_code_hex: String,
    pub k: Option<u32>,
    pub context: String,
    pub codec_scheme: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval_bounded, BudgetMeter, Env, EvalBudget};
    use crate::parse::parse_formula;

    fn xi_star_ctx(k: u32) -> ArithAtomContext {
        ArithAtomContext::for_config(&GenericConfiguration::xi_star(), k)
    }

    #[test]
    fn neg1_accepts_reverse_pair() {
        let lang = LanguageConfig::u_star();
        let a = parse_formula("(forall x (<= 0 x))", &lang).unwrap();
        let rev = a.reverse().unwrap();
        let ctx = xi_star_ctx(1);
        let x = codec::encode_formula(&a).to_nat();
        let y = codec::encode_formula(&rev).to_nat();
        assert!(ctx.neg_k(1, &x, &y));
        assert!(!ctx.neg_k(1, &x, &x));
        assert!(!ctx.neg_k(0, &x, &y), "a proper Pi_1 sentence is not Delta_0");
    }

    #[test]
    fn prf_accepts_the_four_node_proof() {
        let config = GenericConfiguration::xi_star();
        let goal = parse_formula("(forall x (<= 0 x))", &config.language).unwrap();
        let proof = tableau_prove(
            &config.base_axioms,
            &goal,
            &config.language,
            &SearchBudget::small(),
        )
        .proof()
        .unwrap();
        let ctx = xi_star_ctx(1);
        let t = codec::encode_formula(&goal).to_nat();
        let p = crate::prover::encode_proof(&proof.tree).to_nat();
        assert!(ctx.prf(&t, &p));
        // SubstPrf reduces to Prf when the template does not match
        let junk_template = codec::encode_formula(
            &parse_formula("(= x x)", &config.language).unwrap(),
        )
        .to_nat();
        assert!(ctx.substprf(&junk_template, &t, &p));
        // malformed codes are false, never an error
        assert!(!ctx.prf(&Nat::from(5u64), &Nat::from(6u64)));
    }

    #[test]
    fn substprf_decomposition_by_enumeration() {
        // SubstPrf(g,t,p) agrees with literal enumeration of h <= p for
        // small p
        let ctx = xi_star_ctx(1);
        let lang = LanguageConfig::u_star();
        let template = parse_formula("(= x x)", &lang).unwrap();
        let g = codec::encode_formula(&template).to_nat();
        for p in 0u64..(1 << 12) {
            let p = Nat::from(p);
            let t = Nat::from(3u64);
            let smart = ctx.substprf(&g, &t, &p);
            let mut literal = ctx.prf(&t, &p);
            if !literal {
                let mut h = Nat::ZERO;
                while h <= p {
                    if codec::subst_check_values(&g, &h) && ctx.exprf(&h, &t, &p) {
                        literal = true;
                        break;
                    }
                    h = h.add(&Nat::ONE);
                }
            }
            assert_eq!(smart, literal, "p = {p}");
        }
    }

    #[test]
    fn selfref_fixed_point() {
        let (template_code, sentence) = build_selfref();
        assert_eq!(sentence.classify_prenex(), PrenexClass::Pi(1));
        let h = codec::encode_formula(&sentence);
        assert!(codec::subst_check(&template_code, &h));
    }

    #[test]
    fn selfcons_fixed_point_and_tags() {
        for k in [0, 1] {
            let sc = build_selfcons(k);
            assert!(sc.fixed_point_holds(), "k = {k}");
            assert_eq!(sc.formula.classify_prenex(), PrenexClass::Pi(1));
        }
        // templates differ only in the Neg tag (the embedded numerals of the
        // final sentences then differ as a consequence)
        let a = crate::print::print_formula(&selfcons_template(0));
        let b = crate::print::print_formula(&selfcons_template(1));
        assert_ne!(a, b);
        assert_eq!(a.replace("Neg0", "NegK"), b.replace("Neg1", "NegK"));
    }

    #[test]
    fn build_g_counts_members() {
        let config = GenericConfiguration::xi_star();
        let theta = AxiomSystem::new(vec![
            parse_formula("(forall x (<= x (+ x 1)))", &config.language).unwrap(),
        ]);
        let g = build_g(&theta, &config, 1).unwrap();
        assert_eq!(
            g.sentences.len(),
            theta.sentences.len() + config.base_axioms.sentences.len() + 1
        );
        let empty = build_g(&AxiomSystem::empty(), &config, 0).unwrap();
        assert_eq!(empty.sentences.len(), config.base_axioms.sentences.len() + 1);
        // non-Pi_1 member rejected
        let sigma = AxiomSystem {
            sentences: vec![parse_formula("(exists x (= x 0))", &config.language).unwrap()],
            generator: None,
        };
        assert!(build_g(&sigma, &config, 1).is_err());
    }

    #[test]
    fn group2_and_globsim_shapes() {
        let lang = LanguageConfig::u_star();
        let psi = parse_formula("(forall x (<= 0 x))", &lang).unwrap();
        let g2 = group2_axiom(&psi).unwrap();
        assert_eq!(g2.classify_prenex(), PrenexClass::Pi(1));
        assert_eq!(g2.count_quantifiers(), 1 + psi.count_quantifiers());
        assert_eq!(
            crate::print::print_formula(&g2),
            format!(
                "(forall q (forall x (-> (Prf {} q) (<= 0 x))))",
                codec::encode_formula(&psi).to_nat()
            )
        );
        let gs = globsim_sentence(0).unwrap();
        assert_eq!(gs.classify_prenex(), PrenexClass::Pi(1));
        assert_eq!(
            crate::print::print_formula(&gs),
            "(forall t (forall q (forall x (-> (and (Prf t q) (Check t)) (Test0 t x)))))"
        );
        assert!(globsim_sentence(3).is_err());
    }

    #[test]
    fn reflection_shape() {
        let lang = LanguageConfig::u_star();
        let psi = parse_formula("(forall x (<= 0 x))", &lang).unwrap();
        let t = test_translation(&psi, 0).unwrap();
        assert_eq!(t.classify_prenex(), PrenexClass::Pi(1));
        let r = reflection_sentence(&psi, 0).unwrap();
        let code_hex = codec::encode_formula(&psi).to_nat();
        let expected = format!(
            "(forall p (-> (Prf {code_hex} p) (forall x (Test0 {code_hex} x))))"
        );
        assert_eq!(crate::print::print_formula(&r), expected);
    }

    #[test]
    fn test0_matches_refutation_search() {
        // Test0(code(psi), x) for all x below a cap iff no refutation of psi
        // with code <= cap exists
        let config = GenericConfiguration::xi_star();
        let ctx = xi_star_ctx(1);
        let lang = &config.language;
        let true_psi = parse_formula("(forall x (<= 0 x))", lang).unwrap();
        let t = codec::encode_formula(&true_psi).to_nat();
        // spot-check small x: no refutation of a true sentence
        for x in 0u64..64 {
            assert!(
                ctx.eval_atom(ArithTag::Test0, &[t.clone(), Nat::from(x)]).unwrap(),
                "x = {x}"
            );
        }
        // a false Delta_0 sentence is refuted: its reverse is provable, so
        // Test0 fails at the witness proof code
        let false_psi = parse_formula("(= 0 1)", lang).unwrap();
        let rev = false_psi.reverse().unwrap();
        let proof = tableau_prove(&config.base_axioms, &rev, lang, &SearchBudget::small())
            .proof()
            .unwrap();
        let x = crate::prover::encode_proof(&proof.tree).to_nat();
        let tf = codec::encode_formula(&false_psi).to_nat();
        assert!(!ctx.eval_atom(ArithTag::Test0, &[tf, x]).unwrap());
    }

    #[test]
    fn selfcons_good_evaluates_at_tiny_scope() {
        // the Level(1) self-consistency sentence for the toy base holds at
        // small scopes: no tiny witness tuple exists
        let sc = build_selfcons(1);
        let ctx = xi_star_ctx(1);
        let scoped = crate::eval::scope_e(&sc.formula, 3).unwrap();
        let mut env = Env::new();
        let mut meter = BudgetMeter::new(&EvalBudget::small());
        assert_eq!(eval_bounded(&scoped, &mut env, &ctx, &mut meter), Ok(true));
    }

    #[test]
    fn braced_membership_for_true_delta0() {
        let config = GenericConfiguration::xi_star();
        let psi = parse_formula("(forall (x 2) (<= x 2))", &config.language).unwrap();
        let phi = parse_formula("(forall x (<= x x))", &config.language).unwrap();
        let verdict = braced_member(&psi, &phi, 0, &config, &SearchBudget::small()).unwrap();
        assert_eq!(verdict, BracedVerdict::Yes);
        // starved budget
        let starved = SearchBudget::new(2, 2, 1, 10);
        let verdict = braced_member(&psi, &phi, 0, &config, &starved).unwrap();
        assert_eq!(verdict, BracedVerdict::NoWithinBudget);
    }
}
