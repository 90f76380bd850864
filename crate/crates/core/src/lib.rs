//! Bounded-arithmetic formula language, Standard-M bounded evaluation,
//! semantic-tableaux and Herbrand provers, Godel encoding with fixed-point
//! self-reference, and a desk-scale probe lab for the stability, tightness
//! and consistency-preservation invariants these systems are built on.

pub mod codec;
pub mod config;
pub mod eval;
pub mod formula;
pub mod generator;
pub mod lab;
pub mod lang;
pub mod nat;
pub mod oracle;
pub mod parse;
pub mod print;
pub mod prover;
pub mod selfref;
pub mod translate;

pub use eval::{is_good, scope_e, sharp, sharp_set, EvalBudget, Sharp};
pub use formula::{AxiomSystem, Formula, PrenexClass, Term};
pub use lang::LanguageConfig;
pub use nat::Nat;
