//! Arithmetic languages: function-symbol inventories, quantifier-bound
//! policies and constant schemes.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Function symbols available across the supported languages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FnSym {
    Add,
    Mul,
    Max,
    Sub,
    Div,
    Root,
    Log,
    Count,
    Double,
}

impl FnSym {
    pub fn arity(self) -> usize {
        match self {
            FnSym::Log | FnSym::Double => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FnSym::Add => "+",
            FnSym::Mul => "*",
            FnSym::Max => "max",
            FnSym::Sub => "-",
            FnSym::Div => "div",
            FnSym::Root => "root",
            FnSym::Log => "log",
            FnSym::Count => "count",
            FnSym::Double => "double",
        }
    }

    pub fn from_name(s: &str) -> Option<FnSym> {
        Some(match s {
            "+" => FnSym::Add,
            "*" => FnSym::Mul,
            "max" => FnSym::Max,
            "-" => FnSym::Sub,
            "div" => FnSym::Div,
            "root" => FnSym::Root,
            "log" => FnSym::Log,
            "count" => FnSym::Count,
            "double" => FnSym::Double,
            _ => return None,
        })
    }

    /// The six non-growth grounding functions.
    pub fn grounding() -> [FnSym; 6] {
        [FnSym::Sub, FnSym::Div, FnSym::Root, FnSym::Max, FnSym::Log, FnSym::Count]
    }
}

impl fmt::Display for FnSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LanguageName {
    /// +, *, Max as functions, arbitrary bound terms.
    DeltaA,
    /// The eight U-grounding functions (six grounding + addition + Double).
    UStar,
    /// Six grounding functions only; Add/Mult are 3-way atoms.
    Minus,
    /// DeltaA symbols with Max-only quantifier bounds.
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundPolicy {
    /// Any term of the active language may bound a quantifier.
    AnyTerm,
    /// Bounds must be a variable, a constant, or Max applied to such
    /// (nested Max allowed).
    MaxOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstantScheme {
    Numerals,
    /// Named constants K_i (doubling) and C_i (squaring), reaching arbitrary
    /// values together with subtraction.
    KSequence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageConfig {
    pub name: LanguageName,
    pub function_symbols: BTreeSet<FnSym>,
    pub quantifier_bound_policy: BoundPolicy,
    pub constant_scheme: ConstantScheme,
}

impl LanguageConfig {
    pub fn delta_a() -> LanguageConfig {
        LanguageConfig {
            name: LanguageName::DeltaA,
            function_symbols: [FnSym::Add, FnSym::Mul, FnSym::Max].into_iter().collect(),
            quantifier_bound_policy: BoundPolicy::AnyTerm,
            constant_scheme: ConstantScheme::Numerals,
        }
    }

    pub fn u_star() -> LanguageConfig {
        let mut fs: BTreeSet<FnSym> = FnSym::grounding().into_iter().collect();
        fs.insert(FnSym::Add);
        fs.insert(FnSym::Double);
        LanguageConfig {
            name: LanguageName::UStar,
            function_symbols: fs,
            quantifier_bound_policy: BoundPolicy::AnyTerm,
            constant_scheme: ConstantScheme::Numerals,
        }
    }

    pub fn minus() -> LanguageConfig {
        LanguageConfig {
            name: LanguageName::Minus,
            function_symbols: FnSym::grounding().into_iter().collect(),
            quantifier_bound_policy: BoundPolicy::AnyTerm,
            constant_scheme: ConstantScheme::KSequence,
        }
    }

    pub fn r() -> LanguageConfig {
        LanguageConfig {
            name: LanguageName::R,
            function_symbols: [FnSym::Add, FnSym::Mul, FnSym::Max].into_iter().collect(),
            quantifier_bound_policy: BoundPolicy::MaxOnly,
            constant_scheme: ConstantScheme::Numerals,
        }
    }

    pub fn allows_fn(&self, f: FnSym) -> bool {
        self.function_symbols.contains(&f)
    }
}
