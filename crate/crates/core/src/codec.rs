//! Godel numbering of formulas and proofs.
//!
//! Encodings are bijective base-8 digit streams, so codes order by digit
//! count then lexicographically and decode unambiguously. Every function
//! symbol occurrence costs at least two digits (six bits) while structural
//! tokens cost one, which keeps one-node deduction trees over tiny atoms
//! numerically small and still guarantees the floor: a proof or formula with
//! J function-symbol occurrences has code >= 64^J >= 32^J.

use crate::formula::{ArithTag, Atom, BoundKind, Formula, NamedConst, Term};
use crate::nat::Nat;
use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodeKind {
    FormulaCode,
    ProofCode,
    Raw,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoedelCode {
    pub value: BigUint,
    pub kind: CodeKind,
}

impl GoedelCode {
    pub fn bits(&self) -> u64 {
        self.value.bits()
    }

    pub fn to_nat(&self) -> Nat {
        Nat::from_biguint(self.value.clone())
    }

    /// Big-endian hexadecimal, the report serialization.
    pub fn hex(&self) -> String {
        format!("{:x}", self.value)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("malformed code: {0}")]
    Malformed(&'static str),
    #[error("wrong code kind")]
    WrongKind,
}

/// floor(log2 x) for x >= 2, zero otherwise (the grounding-function Log).
pub fn log2floor(x: &Nat) -> Nat {
    x.log2_floor()
}

// ---------------------------------------------------------------------------
// Seq / STRING lexicographic encodings
// ---------------------------------------------------------------------------

/// A finite, possibly empty bit string.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BitString(pub Vec<bool>);

impl BitString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Seq(x): the bit string to the right of the leftmost 1 in binary(x + 1).
/// Maps 0 to the empty string and enumerates all bit strings in
/// lexicographic order.
pub fn seq(x: &Nat) -> BitString {
    let v = x.to_biguint() + 1u32;
    let bits = v.bits();
    let mut out = Vec::with_capacity((bits - 1) as usize);
    for i in (0..bits - 1).rev() {
        out.push(v.bit(i));
    }
    BitString(out)
}

/// Inverse of `seq`.
pub fn seq_inv(s: &BitString) -> Nat {
    let mut v = BigUint::from(1u32);
    for b in &s.0 {
        v <<= 1;
        if *b {
            v += 1u32;
        }
    }
    Nat::from_biguint(v - 1u32)
}

/// STRING(x_1 .. x_k): the value whose Seq image is the concatenation of the
/// members' Seq images. The empty concatenation is 0.
pub fn string_value(xs: &[Nat]) -> Nat {
    let mut cat = Vec::new();
    for x in xs {
        cat.extend(seq(x).0);
    }
    seq_inv(&BitString(cat))
}

// ---------------------------------------------------------------------------
// Digit streams (bijective base 8)
// ---------------------------------------------------------------------------

#[derive(Default)]
pub(crate) struct DigitWriter {
    digits: Vec<u8>,
}

impl DigitWriter {
    pub fn new() -> DigitWriter {
        DigitWriter { digits: Vec::new() }
    }

    pub fn push(&mut self, d: u8) {
        debug_assert!(d < 8);
        self.digits.push(d);
    }

    /// Self-delimiting numeral: bijective base-7 digits (values 0..6), most
    /// significant first, terminated by 7. Zero is the bare terminator.
    pub fn push_numeral(&mut self, n: &BigUint) {
        let mut rev = Vec::new();
        let mut v = n.clone();
        let seven = BigUint::from(7u32);
        while !v.is_zero() {
            // bijective base-7 digit in 1..=7
            let mut r = (&v % &seven)
                .try_into()
                .map(|x: u64| x as u8)
                .unwrap_or(0);
            if r == 0 {
                r = 7;
            }
            rev.push(r - 1);
            v = (v - BigUint::from(r)) / &seven;
        }
        for d in rev.iter().rev() {
            self.push(*d);
        }
        self.push(7);
    }

    pub fn push_numeral_u64(&mut self, n: u64) {
        self.push_numeral(&BigUint::from(n));
    }

    pub(crate) fn digits_vec(&self) -> Vec<u8> {
        self.digits.clone()
    }

    /// Digits interpreted as a bijective base-8 number, most significant
    /// digit first.
    pub fn finish(self) -> BigUint {
        let mut v = BigUint::zero();
        for d in self.digits {
            v = v * 8u32 + BigUint::from(d + 1);
        }
        v
    }

}

pub(crate) struct DigitReader {
    digits: Vec<u8>,
    pos: usize,
}

impl DigitReader {
    pub fn new(value: &BigUint) -> DigitReader {
        let mut digits = Vec::new();
        let mut v = value.clone();
        let eight = BigUint::from(8u32);
        while !v.is_zero() {
            let mut r: u8 = (&v % &eight).try_into().map(|x: u64| x as u8).unwrap_or(0);
            if r == 0 {
                r = 8;
            }
            digits.push(r - 1);
            v = (v - BigUint::from(r)) / &eight;
        }
        digits.reverse();
        DigitReader { digits, pos: 0 }
    }

    pub fn from_u64(value: u64) -> DigitReader {
        let mut digits = Vec::new();
        let mut v = value;
        while v != 0 {
            let mut r = (v % 8) as u8;
            if r == 0 {
                r = 8;
            }
            digits.push(r - 1);
            v = (v - r as u64) / 8;
        }
        digits.reverse();
        DigitReader { digits, pos: 0 }
    }

    pub fn next(&mut self) -> Result<u8, DecodeError> {
        let d = *self
            .digits
            .get(self.pos)
            .ok_or(DecodeError::Malformed("unexpected end of digits"))?;
        self.pos += 1;
        Ok(d)
    }

    pub fn read_numeral(&mut self) -> Result<BigUint, DecodeError> {
        let mut v = BigUint::zero();
        loop {
            let d = self.next()?;
            if d == 7 {
                return Ok(v);
            }
            v = v * 7u32 + BigUint::from(d + 1);
        }
    }

    pub fn read_numeral_u64(&mut self) -> Result<u64, DecodeError> {
        let n = self.read_numeral()?;
        n.try_into().map_err(|_| DecodeError::Malformed("numeral too large"))
    }

    pub fn at_end(&self) -> bool {
        self.pos == self.digits.len()
    }
}

// ---------------------------------------------------------------------------
// Name spelling (variables and uninterpreted predicate names)
// ---------------------------------------------------------------------------

const NAME_ALPHABET: &str = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
const COMMON_VARS: [&str; 7] = ["v", "x", "y", "z", "p", "q", "u"];

fn push_name(w: &mut DigitWriter, name: &str) {
    for c in name.chars() {
        let idx = NAME_ALPHABET
            .find(c)
            .unwrap_or_else(|| panic!("name `{name}` contains unencodable character `{c}`"));
        w.push((idx / 8) as u8);
        w.push((idx % 8) as u8);
    }
    w.push(7);
    w.push(7);
}

fn read_name(r: &mut DigitReader) -> Result<String, DecodeError> {
    let mut out = String::new();
    loop {
        let hi = r.next()?;
        let lo = r.next()?;
        if hi == 7 && lo == 7 {
            if out.is_empty() {
                return Err(DecodeError::Malformed("empty name"));
            }
            return Ok(out);
        }
        let idx = hi as usize * 8 + lo as usize;
        let c = NAME_ALPHABET
            .as_bytes()
            .get(idx)
            .ok_or(DecodeError::Malformed("bad name character"))?;
        out.push(*c as char);
    }
}

// ---------------------------------------------------------------------------
// Term encoding
// ---------------------------------------------------------------------------

pub(crate) fn write_term(w: &mut DigitWriter, t: &Term) {
    match t {
        Term::Const(n) => match n.as_u64() {
            Some(0) => w.push(0),
            Some(1) => w.push(1),
            Some(2) => w.push(2),
            _ => {
                w.push(3);
                w.push_numeral(&(n.to_biguint() - 3u32));
            }
        },
        Term::Var(name) => {
            w.push(4);
            match COMMON_VARS.iter().position(|v| v == name) {
                Some(i) => w.push(i as u8),
                None => {
                    w.push(7);
                    push_name(w, name);
                }
            }
        }
        Term::Apply(f, args) => {
            use crate::lang::FnSym::*;
            w.push(5);
            match f {
                Add => w.push(0),
                Mul => w.push(1),
                Max => w.push(2),
                Sub => w.push(3),
                Div => w.push(4),
                Root => w.push(5),
                Log => w.push(6),
                Count => {
                    w.push(7);
                    w.push(0);
                }
                Double => {
                    w.push(7);
                    w.push(1);
                }
            }
            for a in args {
                write_term(w, a);
            }
        }
        Term::E(n) => {
            w.push(5);
            w.push(7);
            w.push(2);
            w.push_numeral_u64(*n as u64);
        }
        Term::Named(NamedConst::K(i)) => {
            w.push(6);
            w.push_numeral_u64(*i as u64);
        }
        Term::Named(NamedConst::C(i)) => {
            w.push(7);
            w.push_numeral_u64(*i as u64);
        }
    }
}

pub(crate) fn read_term(r: &mut DigitReader) -> Result<Term, DecodeError> {
    use crate::lang::FnSym::*;
    match r.next()? {
        0 => Ok(Term::num(0)),
        1 => Ok(Term::num(1)),
        2 => Ok(Term::num(2)),
        3 => {
            let n = r.read_numeral()?;
            Ok(Term::Const(Nat::from_biguint(n + 3u32)))
        }
        4 => {
            let v = r.next()?;
            if (v as usize) < COMMON_VARS.len() {
                Ok(Term::Var(COMMON_VARS[v as usize].to_string()))
            } else if v == 7 {
                Ok(Term::Var(read_name(r)?))
            } else {
                Err(DecodeError::Malformed("bad variable tag"))
            }
        }
        5 => {
            let f = match r.next()? {
                0 => Add,
                1 => Mul,
                2 => Max,
                3 => Sub,
                4 => Div,
                5 => Root,
                6 => Log,
                7 => match r.next()? {
                    0 => Count,
                    1 => Double,
                    2 => {
                        let n = r.read_numeral_u64()?;
                        let n: u32 = n
                            .try_into()
                            .map_err(|_| DecodeError::Malformed("E exponent too large"))?;
                        return Ok(Term::E(n));
                    }
                    _ => return Err(DecodeError::Malformed("bad function escape")),
                },
                _ => unreachable!(),
            };
            let mut args = Vec::with_capacity(f.arity());
            for _ in 0..f.arity() {
                args.push(read_term(r)?);
            }
            Ok(Term::Apply(f, args))
        }
        6 => {
            let i = r.read_numeral_u64()?;
            let i: u32 = i.try_into().map_err(|_| DecodeError::Malformed("K index too large"))?;
            Ok(Term::Named(NamedConst::K(i)))
        }
        7 => {
            let i = r.read_numeral_u64()?;
            let i: u32 = i.try_into().map_err(|_| DecodeError::Malformed("C index too large"))?;
            Ok(Term::Named(NamedConst::C(i)))
        }
        _ => unreachable!(),
    }
}

// ---------------------------------------------------------------------------
// Formula encoding
// ---------------------------------------------------------------------------

pub(crate) fn write_formula(w: &mut DigitWriter, f: &Formula) {
    match f {
        Formula::Atom(Atom::Eq(a, b)) => {
            w.push(0);
            write_term(w, a);
            write_term(w, b);
        }
        Formula::Atom(Atom::Leq(a, b)) => {
            w.push(1);
            write_term(w, a);
            write_term(w, b);
        }
        Formula::Not(inner) => {
            w.push(2);
            write_formula(w, inner);
        }
        Formula::Forall { var, body } => {
            w.push(3);
            w.push(0);
            write_var(w, var);
            write_formula(w, body);
        }
        Formula::Exists { var, body } => {
            w.push(3);
            w.push(1);
            write_var(w, var);
            write_formula(w, body);
        }
        Formula::BoundedForall { var, kind, bound, body } => {
            w.push(3);
            w.push(if *kind == BoundKind::Leq { 2 } else { 4 });
            write_var(w, var);
            write_term(w, bound);
            write_formula(w, body);
        }
        Formula::BoundedExists { var, kind, bound, body } => {
            w.push(3);
            w.push(if *kind == BoundKind::Leq { 3 } else { 5 });
            write_var(w, var);
            write_term(w, bound);
            write_formula(w, body);
        }
        Formula::And(fs) => {
            w.push(4);
            w.push(0);
            w.push_numeral_u64(fs.len() as u64);
            for g in fs {
                write_formula(w, g);
            }
        }
        Formula::Or(fs) => {
            w.push(4);
            w.push(1);
            w.push_numeral_u64(fs.len() as u64);
            for g in fs {
                write_formula(w, g);
            }
        }
        Formula::Implies(a, b) => {
            w.push(4);
            w.push(2);
            write_formula(w, a);
            write_formula(w, b);
        }
        Formula::Atom(Atom::Add3(a, b, c)) => {
            w.push(5);
            write_term(w, a);
            write_term(w, b);
            write_term(w, c);
        }
        Formula::Atom(Atom::Mult3(a, b, c)) => {
            w.push(6);
            write_term(w, a);
            write_term(w, b);
            write_term(w, c);
        }
        Formula::Atom(Atom::Arith(tag, ts)) => {
            w.push(7);
            match tag {
                ArithTag::Prf => w.push(0),
                ArithTag::ExPrf => w.push(1),
                ArithTag::SubstPrf => w.push(2),
                ArithTag::Subst => w.push(3),
                ArithTag::Neg0 => w.push(4),
                ArithTag::Neg1 => w.push(5),
                ArithTag::Check => w.push(6),
                ArithTag::NegPrf => {
                    w.push(7);
                    w.push(0);
                }
                ArithTag::Test0 => {
                    w.push(7);
                    w.push(1);
                }
            }
            for t in ts {
                write_term(w, t);
            }
        }
        Formula::Atom(Atom::Other(name, ts)) => {
            w.push(7);
            w.push(7);
            w.push(2);
            push_name(w, name);
            w.push_numeral_u64(ts.len() as u64);
            for t in ts {
                write_term(w, t);
            }
        }
    }
}

fn write_var(w: &mut DigitWriter, name: &str) {
    match COMMON_VARS.iter().position(|v| v == &name) {
        Some(i) => {
            w.push(i as u8);
        }
        None => {
            w.push(7);
            push_name(w, name);
        }
    }
}

fn read_var(r: &mut DigitReader) -> Result<String, DecodeError> {
    let v = r.next()?;
    if (v as usize) < COMMON_VARS.len() {
        Ok(COMMON_VARS[v as usize].to_string())
    } else if v == 7 {
        read_name(r)
    } else {
        Err(DecodeError::Malformed("bad binder variable tag"))
    }
}

pub(crate) fn read_formula(r: &mut DigitReader) -> Result<Formula, DecodeError> {
    match r.next()? {
        0 => Ok(Formula::Atom(Atom::Eq(read_term(r)?, read_term(r)?))),
        1 => Ok(Formula::Atom(Atom::Leq(read_term(r)?, read_term(r)?))),
        2 => Ok(Formula::not(read_formula(r)?)),
        3 => {
            let q = r.next()?;
            let var = read_var(r)?;
            match q {
                0 | 1 => {
                    let body = Box::new(read_formula(r)?);
                    Ok(if q == 0 {
                        Formula::Forall { var, body }
                    } else {
                        Formula::Exists { var, body }
                    })
                }
                2..=5 => {
                    let bound = read_term(r)?;
                    let body = Box::new(read_formula(r)?);
                    let kind = if q <= 3 { BoundKind::Leq } else { BoundKind::Lt };
                    Ok(if q % 2 == 0 {
                        Formula::BoundedForall { var, kind, bound, body }
                    } else {
                        Formula::BoundedExists { var, kind, bound, body }
                    })
                }
                _ => Err(DecodeError::Malformed("bad quantifier tag")),
            }
        }
        4 => match r.next()? {
            c @ (0 | 1) => {
                let n = r.read_numeral_u64()?;
                if n < 2 || n > 4096 {
                    return Err(DecodeError::Malformed("bad connective arity"));
                }
                let fs: Vec<Formula> =
                    (0..n).map(|_| read_formula(r)).collect::<Result<_, _>>()?;
                Ok(if c == 0 { Formula::And(fs) } else { Formula::Or(fs) })
            }
            2 => Ok(Formula::implies(read_formula(r)?, read_formula(r)?)),
            _ => Err(DecodeError::Malformed("bad connective tag")),
        },
        5 => Ok(Formula::Atom(Atom::Add3(read_term(r)?, read_term(r)?, read_term(r)?))),
        6 => Ok(Formula::Atom(Atom::Mult3(read_term(r)?, read_term(r)?, read_term(r)?))),
        7 => {
            let tag = match r.next()? {
                0 => ArithTag::Prf,
                1 => ArithTag::ExPrf,
                2 => ArithTag::SubstPrf,
                3 => ArithTag::Subst,
                4 => ArithTag::Neg0,
                5 => ArithTag::Neg1,
                6 => ArithTag::Check,
                7 => match r.next()? {
                    0 => ArithTag::NegPrf,
                    1 => ArithTag::Test0,
                    2 => {
                        let name = read_name(r)?;
                        let n = r.read_numeral_u64()?;
                        if n > 4096 {
                            return Err(DecodeError::Malformed("bad atom arity"));
                        }
                        let ts: Vec<Term> =
                            (0..n).map(|_| read_term(r)).collect::<Result<_, _>>()?;
                        return Ok(Formula::Atom(Atom::Other(name, ts)));
                    }
                    _ => return Err(DecodeError::Malformed("bad escape tag")),
                },
                _ => unreachable!(),
            };
            let ts: Vec<Term> =
                (0..tag.arity()).map(|_| read_term(r)).collect::<Result<_, _>>()?;
            Ok(Formula::Atom(Atom::Arith(tag, ts)))
        }
        _ => unreachable!(),
    }
}

/// Token-stream Godel code of a formula.
pub fn encode_formula(f: &Formula) -> GoedelCode {
    let mut w = DigitWriter::new();
    write_formula(&mut w, f);
    GoedelCode { value: w.finish(), kind: CodeKind::FormulaCode }
}

pub fn decode_formula(c: &GoedelCode) -> Result<Formula, DecodeError> {
    if c.kind != CodeKind::FormulaCode {
        return Err(DecodeError::WrongKind);
    }
    decode_formula_value(&c.value)
}

pub(crate) fn decode_formula_value(value: &BigUint) -> Result<Formula, DecodeError> {
    let mut r = DigitReader::new(value);
    let f = read_formula(&mut r)?;
    if !r.at_end() {
        return Err(DecodeError::Malformed("trailing digits"));
    }
    Ok(f)
}

/// All well-formed formulas whose code needs at most `max_code_bits` bits,
/// in increasing code order.
pub fn enumerate_formulas(max_code_bits: u32) -> impl Iterator<Item = Formula> {
    let cap: u64 = if max_code_bits >= 63 { u64::MAX } else { 1u64 << max_code_bits };
    (1..cap).filter_map(|code| {
        let mut r = DigitReader::from_u64(code);
        let f = read_formula(&mut r).ok()?;
        r.at_end().then_some(f)
    })
}

/// Godel's substitution check: g encodes a formula with free variables, h
/// encodes the sentence obtained by replacing every free variable with the
/// numeral for g's own value. Malformed codes yield false.
pub fn subst_check(g: &GoedelCode, h: &GoedelCode) -> bool {
    subst_check_values(&g.to_nat(), &h.to_nat())
}

pub(crate) fn subst_check_values(g: &Nat, h: &Nat) -> bool {
    let Ok(template) = decode_formula_value(&g.to_biguint()) else {
        return false;
    };
    let free = template.free_vars();
    if free.is_empty() {
        return false;
    }
    let Ok(target) = decode_formula_value(&h.to_biguint()) else {
        return false;
    };
    let numeral = Term::Const(g.clone());
    let mut substituted = template;
    for v in &free {
        substituted = substituted.substitute(v, &numeral);
    }
    substituted == target
}

/// The sentence obtained from a template by substituting the template's own
/// code for every free variable (the fixed-point step).
pub fn self_substitution(template: &Formula) -> (GoedelCode, Formula) {
    let code = encode_formula(template);
    let numeral = Term::Const(code.to_nat());
    let mut out = template.clone();
    for v in &template.free_vars() {
        out = out.substitute(v, &numeral);
    }
    (code, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::LanguageConfig;
    use crate::parse::parse_formula;

    #[test]
    fn seq_matches_lexicographic_table() {
        assert_eq!(seq(&Nat::from(0u64)).to_string(), "");
        assert_eq!(seq(&Nat::from(1u64)).to_string(), "0");
        assert_eq!(seq(&Nat::from(2u64)).to_string(), "1");
        assert_eq!(seq(&Nat::from(3u64)).to_string(), "00");
        assert_eq!(seq(&Nat::from(4u64)).to_string(), "01");
        assert_eq!(seq(&Nat::from(5u64)).to_string(), "10");
        assert_eq!(seq(&Nat::from(6u64)).to_string(), "11");
    }

    #[test]
    fn seq_bijection_small_range() {
        for x in 0u64..64 {
            let s = seq(&Nat::from(x));
            assert_eq!(seq_inv(&s), Nat::from(x));
        }
        assert_eq!(seq_inv(&BitString(vec![true, false])), Nat::from(5u64));
    }

    #[test]
    fn string_value_examples() {
        assert_eq!(string_value(&[Nat::ZERO, Nat::ZERO, Nat::ZERO]), Nat::from(0u64));
        // concatenation associativity: "10" = "1" ++ "0"
        let a = string_value(&[seq_inv(&BitString(vec![true, false])), Nat::ZERO, Nat::ZERO]);
        let b = string_value(&[
            seq_inv(&BitString(vec![true])),
            seq_inv(&BitString(vec![false])),
            Nat::ZERO,
        ]);
        assert_eq!(a, b);
    }

    #[test]
    fn formula_roundtrip() {
        let lang = LanguageConfig::u_star();
        let sources = [
            "(= 0 0)",
            "(forall x (<= 0 x))",
            "(forall x (forall y (exists (z (+ x y)) (= z (+ x y)))))",
            "(Add K1 K1 K2)",
            "(not (and (= 0 1) (<= 2 0) (Prf 5 7)))",
            "(exists (v < (E 3)) (= v 2))",
            "(SubstPrf 99 3 w)",
            "(myPred x 0)",
            "(forall longname (<= longname 2))",
        ];
        for src in sources {
            let lang = if src.contains('K') { LanguageConfig::minus() } else { lang.clone() };
            let f = parse_formula(src, &lang).unwrap();
            let code = encode_formula(&f);
            let back = decode_formula(&code).unwrap();
            assert_eq!(back, f, "roundtrip {src}");
        }
    }

    #[test]
    fn encode_injective_over_small_codes() {
        // decode is a partial inverse, so distinct decodable codes map to
        // distinct formulas and re-encode identically
        let mut count = 0;
        for f in enumerate_formulas(16) {
            let code = encode_formula(&f);
            assert_eq!(decode_formula(&code).unwrap(), f);
            count += 1;
        }
        assert!(count > 50, "expected a healthy population, got {count}");
    }

    #[test]
    fn function_symbol_floor() {
        let lang = LanguageConfig::u_star();
        let cases = [
            "(= (+ 0 1) 1)",
            "(forall x (<= x (max x (+ x (double x)))))",
            "(= (root (log (count 7 2)) 2) 0)",
        ];
        for src in cases {
            let f = parse_formula(src, &lang).unwrap();
            let j = f.count_fn_symbols();
            let code = encode_formula(&f);
            let floor = BigUint::from(32u32).pow(j as u32);
            assert!(code.value >= floor, "{src}: code {} < 32^{j}", code.value);
        }
    }

    #[test]
    fn subst_check_fixed_point_shape() {
        let lang = LanguageConfig::u_star();
        let template = parse_formula("(= x x)", &lang).unwrap();
        let (code, sentence) = self_substitution(&template);
        let hcode = encode_formula(&sentence);
        assert!(subst_check(&code, &hcode));
        // a closed template never passes
        let closed = parse_formula("(= 0 0)", &lang).unwrap();
        let ccode = encode_formula(&closed);
        assert!(!subst_check(&ccode, &ccode));
        // partial substitution fails
        let partial = parse_formula("(= 3 x)", &lang).unwrap();
        assert!(!subst_check(&code, &encode_formula(&partial)));
    }

    #[test]
    fn numeral_roundtrip_large() {
        let mut w = DigitWriter::new();
        let big = BigUint::from(7u32).pow(30) + BigUint::from(123456u32);
        w.push_numeral(&big);
        let v = w.finish();
        let mut r = DigitReader::new(&v);
        assert_eq!(r.read_numeral().unwrap(), big);
        assert!(r.at_end());
    }
}
