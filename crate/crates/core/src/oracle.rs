//! Independent brute-force oracles, kept apart from the implementation paths
//! they cross-check.

use crate::eval::{eval_bounded, AtomSemantics, BudgetMeter, Env, EvalBudget, EvalError, Sharp};
use crate::formula::{Formula, Symbol};
use crate::nat::Nat;

/// The minimal counterexample to a Pi_1 sentence: among assignments to the
/// leading universal variables with every component below `limit`, the tuple
/// with the least maximum component (lexicographically least among those)
/// falsifying the Delta_0 core. None when no such tuple exists.
pub fn min_counterexample(
    f: &Formula,
    limit: u64,
    budget: &EvalBudget,
    atoms: &dyn AtomSemantics,
) -> Result<Option<Vec<u64>>, EvalError> {
    let mut vars: Vec<Symbol> = Vec::new();
    let mut core: &Formula = f;
    while let Formula::Forall { var, body } = core {
        vars.push(var.clone());
        core = body;
    }
    assert!(
        core.is_fully_bounded(),
        "minimal-counterexample search is defined for Pi_1 sentences"
    );
    let mut meter = BudgetMeter::new(budget);
    let mut env = Env::new();
    if vars.is_empty() {
        let value = eval_bounded(core, &mut env, atoms, &mut meter)?;
        return Ok(if value { None } else { Some(Vec::new()) });
    }
    for max_component in 0..limit {
        // lexicographic scan of tuples whose maximum equals max_component
        let mut tuple = vec![0u64; vars.len()];
        loop {
            if tuple.iter().any(|v| *v == max_component) {
                for (v, val) in vars.iter().zip(&tuple) {
                    env.insert(v.clone(), Nat::from(*val));
                }
                if !eval_bounded(core, &mut env, atoms, &mut meter)? {
                    return Ok(Some(tuple));
                }
            }
            let mut i = vars.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                tuple[i] += 1;
                if tuple[i] <= max_component {
                    break;
                }
                tuple[i] = 0;
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX {
                break;
            }
        }
    }
    Ok(None)
}

/// Sharp derived from the minimal counterexample: the witness's maximum
/// component M gives Finite(bits(M) - 1), i.e. the bit length of the witness
/// exceeds the threshold by exactly one; no witness below 2^nmax gives
/// AtLeast(nmax).
pub fn sharp_from_witness(
    f: &Formula,
    nmax: u32,
    budget: &EvalBudget,
    atoms: &dyn AtomSemantics,
) -> Result<Sharp, EvalError> {
    let limit = 1u64 << nmax.min(62);
    match min_counterexample(f, limit, budget, atoms)? {
        None => Ok(Sharp::AtLeast(nmax)),
        Some(tuple) => {
            let max = tuple.iter().copied().max().unwrap_or(0);
            let bits = Nat::from(max).bit_len() as i64;
            Ok(Sharp::Finite(bits - 1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{sharp, NoAtoms};
    use crate::lang::LanguageConfig;
    use crate::parse::parse_formula;

    #[test]
    fn witness_oracle_agrees_with_sharp_scan() {
        let lang = LanguageConfig::u_star();
        let budget = EvalBudget::small();
        let cases = [
            "(forall x (<= x 5))",
            "(forall x (<= x 0))",
            "(forall x (<= x x))",
            "(forall x (forall y (<= x (+ x y))))",
            "(forall x (forall y (<= (+ x y) 9)))",
            "(forall x (<= (+ x 1) 0))",
        ];
        for src in cases {
            let f = parse_formula(src, &lang).unwrap();
            let scan = sharp(&f, 8, &budget, &NoAtoms).unwrap();
            let oracle = sharp_from_witness(&f, 8, &budget, &NoAtoms).unwrap();
            assert_eq!(scan, oracle, "{src}");
        }
    }

    #[test]
    fn witness_is_minimal_and_least() {
        let lang = LanguageConfig::u_star();
        let budget = EvalBudget::small();
        let f = parse_formula("(forall x (forall y (<= (+ x y) 9)))", &lang).unwrap();
        let w = min_counterexample(&f, 256, &budget, &NoAtoms).unwrap().unwrap();
        // least maximum component is 5 (5+5=10 > 9), lexicographically least
        assert_eq!(w, vec![5, 5]);
    }
}
