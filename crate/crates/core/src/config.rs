//! Generic configurations: the 5-tuple of language, fully-bounded formula
//! class, base axiom system, deduction method and Godel scheme, plus the four
//! desk-scale presets.

use crate::formula::{AxiomSystem, Formula};
use crate::generator::Generator;
use crate::lang::LanguageConfig;
use crate::parse::parse_formula;
use crate::prover::DeductionKind;

pub const CODEC_SCHEME: &str = "digit8-v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericConfiguration {
    pub name: String,
    pub language: LanguageConfig,
    pub base_axioms: AxiomSystem,
    pub deduction: DeductionKind,
    pub codec_scheme: String,
}

impl GenericConfiguration {
    /// Semantic tableaux over the eight U-grounding functions; the base is a
    /// toy Type-A system: addition-totality in its Pi_1 form, order facts,
    /// and the true-Delta_0 generator standing in for Sigma_1 completeness.
    pub fn xi_star() -> GenericConfiguration {
        let lang = LanguageConfig::u_star();
        let axioms = vec![
            parse_formula("(forall x (forall y (exists (z (+ x y)) (= z (+ x y)))))", &lang)
                .unwrap(),
            parse_formula("(forall x (<= 0 x))", &lang).unwrap(),
            parse_formula("(forall x (<= x x))", &lang).unwrap(),
            parse_formula("(forall x (<= x (double x)))", &lang).unwrap(),
        ];
        GenericConfiguration {
            name: "xi-star".into(),
            language: lang.clone(),
            base_axioms: AxiomSystem::new(axioms)
                .with_generator(Generator::TrueDelta0 { lang }),
            deduction: DeductionKind::Tableaux,
            codec_scheme: CODEC_SCHEME.into(),
        }
    }

    /// Same base as xi-star with the Tab-U1 cut extension.
    pub fn xi_star_star() -> GenericConfiguration {
        let mut c = Self::xi_star();
        c.name = "xi-star-star".into();
        c.deduction = DeductionKind::TabU1;
        c
    }

    /// Hilbert deduction over the six grounding functions; constants come
    /// from the doubling K-sequence, addition and multiplication are 3-way
    /// atoms.
    pub fn xi_minus() -> GenericConfiguration {
        let lang = LanguageConfig::minus();
        let axioms = vec![
            parse_formula("(forall x (<= 0 x))", &lang).unwrap(),
            parse_formula("(forall x (<= x x))", &lang).unwrap(),
        ];
        GenericConfiguration {
            name: "xi-minus".into(),
            language: lang.clone(),
            base_axioms: AxiomSystem::new(axioms)
                .with_generator(Generator::KSequenceAdd { max_index: 16 }),
            deduction: DeductionKind::Hilbert,
            codec_scheme: CODEC_SCHEME.into(),
        }
    }

    /// Herbrand-style deduction with Max-only quantifier bounds.
    pub fn xi_r() -> GenericConfiguration {
        let lang = LanguageConfig::r();
        let axioms = vec![
            parse_formula("(forall x (<= 0 x))", &lang).unwrap(),
            parse_formula("(forall x (<= x x))", &lang).unwrap(),
        ];
        GenericConfiguration {
            name: "xi-R".into(),
            language: lang.clone(),
            base_axioms: AxiomSystem::new(axioms)
                .with_generator(Generator::TrueDelta0 { lang }),
            deduction: DeductionKind::Herbrand,
            codec_scheme: CODEC_SCHEME.into(),
        }
    }

    pub fn by_name(name: &str) -> Option<GenericConfiguration> {
        Some(match name {
            "xi-star" => Self::xi_star(),
            "xi-star-star" => Self::xi_star_star(),
            "xi-minus" => Self::xi_minus(),
            "xi-R" | "xi-r" => Self::xi_r(),
            _ => return None,
        })
    }

    pub fn is_delta0(&self, f: &Formula) -> bool {
        f.is_delta0(&self.language)
    }

    /// Base axioms must be Pi_1 sentences; the UStar preset must carry the
    /// Pi_1 addition-totality declaration.
    pub fn validate(&self) -> Result<(), String> {
        for a in &self.base_axioms.sentences {
            if !a.is_sentence() {
                return Err(format!("base axiom `{a}` has free variables"));
            }
            if !a.classify_prenex().within_pi(1) {
                return Err(format!("base axiom `{a}` is not Pi_1"));
            }
        }
        if self.language == LanguageConfig::u_star() {
            let d1a = parse_formula(
                "(forall x (forall y (exists (z (+ x y)) (= z (+ x y)))))",
                &self.language,
            )
            .unwrap();
            if !self.base_axioms.sentences.contains(&d1a) {
                return Err("UStar base must declare addition total in Pi_1 form".into());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in ["xi-star", "xi-star-star", "xi-minus", "xi-R"] {
            let c = GenericConfiguration::by_name(name).unwrap();
            c.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn preset_deductions_match_their_lanes() {
        assert_eq!(GenericConfiguration::xi_star().deduction, DeductionKind::Tableaux);
        assert_eq!(GenericConfiguration::xi_star_star().deduction, DeductionKind::TabU1);
        assert_eq!(GenericConfiguration::xi_minus().deduction, DeductionKind::Hilbert);
        assert_eq!(GenericConfiguration::xi_r().deduction, DeductionKind::Herbrand);
    }
}
