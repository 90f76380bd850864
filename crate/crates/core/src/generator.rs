//! Schema generators: the r.e. part of an axiom system, materialized to a
//! caller-fixed Godel-code bound.

use crate::codec;
use crate::eval::{eval_bounded, BudgetMeter, Env, EvalBudget, NoAtoms};
use crate::formula::{ArithTag, Atom, Formula, NamedConst, Term};
use crate::lang::LanguageConfig;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// All Delta_0 sentences of the language true at Standard-M, enumerated in
    /// increasing Godel-code order. A desk-scale stand-in for Sigma_1
    /// completeness.
    TrueDelta0 { lang: LanguageConfig },
    /// Add(K_i, K_i, K_{i+1}) for i >= 1.
    KSequenceAdd { max_index: u32 },
    /// Mult(C_i, C_i, C_{i+1}) for i >= 1.
    CSequenceMult { max_index: u32 },
    /// One reflection axiom `forall q (Prf(code(psi), q) -> psi)` per Pi_1
    /// sentence psi, enumerated in increasing Godel-code order.
    Group2 { lang: LanguageConfig },
}

impl Generator {
    /// Sentences whose own Godel code fits below 2^max_code_bits.
    pub fn produce(&self, max_code_bits: u32) -> Vec<Formula> {
        match self {
            Generator::TrueDelta0 { lang } => {
                let mut out = Vec::new();
                let budget = EvalBudget::small();
                for f in codec::enumerate_formulas(max_code_bits) {
                    if !f.is_sentence() || !f.is_delta0(lang) {
                        continue;
                    }
                    let mut env = Env::new();
                    let mut meter = BudgetMeter::new(&budget);
                    if eval_bounded(&f, &mut env, &NoAtoms, &mut meter) == Ok(true) {
                        out.push(f);
                    }
                }
                out
            }
            Generator::KSequenceAdd { max_index } => (1..=*max_index)
                .map(|i| {
                    Formula::Atom(Atom::Add3(
                        Term::Named(NamedConst::K(i)),
                        Term::Named(NamedConst::K(i)),
                        Term::Named(NamedConst::K(i + 1)),
                    ))
                })
                .filter(|f| codec::encode_formula(f).bits() <= max_code_bits as u64)
                .collect(),
            Generator::CSequenceMult { max_index } => (1..=*max_index)
                .map(|i| {
                    Formula::Atom(Atom::Mult3(
                        Term::Named(NamedConst::C(i)),
                        Term::Named(NamedConst::C(i)),
                        Term::Named(NamedConst::C(i + 1)),
                    ))
                })
                .filter(|f| codec::encode_formula(f).bits() <= max_code_bits as u64)
                .collect(),
            Generator::Group2 { lang } => {
                let mut out = Vec::new();
                for f in codec::enumerate_formulas(max_code_bits) {
                    if !f.is_sentence() || !f.language_ok(lang) {
                        continue;
                    }
                    if !f.classify_prenex().within_pi(1) {
                        continue;
                    }
                    out.push(group2_shape(&f));
                }
                out
            }
        }
    }
}

/// forall q { Prf(code(psi), q) -> psi }, emitted in prenex form (psi's
/// leading universals pulled past the implication) so the axiom classifies
/// Pi_1 like the sentence it reflects.
pub fn group2_shape(psi: &Formula) -> Formula {
    let code = codec::encode_formula(psi);
    // peel psi's universal prefix
    let mut prefix: Vec<String> = Vec::new();
    let mut core: &Formula = psi;
    while let Formula::Forall { var, body } = core {
        prefix.push(var.clone());
        core = body;
    }
    let qvar = if prefix.iter().any(|v| v == "q") { "q0".to_string() } else { "q".to_string() };
    let mut out = Formula::implies(
        Formula::Atom(Atom::Arith(
            ArithTag::Prf,
            vec![Term::Const(code.to_nat()), Term::Var(qvar.clone())],
        )),
        core.clone(),
    );
    for v in prefix.into_iter().rev() {
        out = Formula::Forall { var: v, body: Box::new(out) };
    }
    Formula::Forall { var: qvar, body: Box::new(out) }
}
