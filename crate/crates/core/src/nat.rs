//! Unbounded naturals with a fast small-value path.
//!
//! Exhaustive model checking spends nearly all of its time iterating small
//! values, while Godel codes routinely exceed `u64`. `Nat` keeps values in a
//! `u64` whenever they fit and falls back to `BigUint` otherwise.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Nat {
    Small(u64),
    Big(BigUint),
}

impl Nat {
    pub const ZERO: Nat = Nat::Small(0);
    pub const ONE: Nat = Nat::Small(1);

    pub fn from_biguint(b: BigUint) -> Nat {
        match b.to_u64() {
            Some(v) => Nat::Small(v),
            None => Nat::Big(b),
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match self {
            Nat::Small(v) => BigUint::from(*v),
            Nat::Big(b) => b.clone(),
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self {
            Nat::Small(v) => Some(*v),
            Nat::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Nat::Small(0))
    }

    /// 2^n.
    pub fn pow2(n: u32) -> Nat {
        if n < 64 {
            Nat::Small(1u64 << n)
        } else {
            Nat::Big(BigUint::one() << n)
        }
    }

    pub fn add(&self, other: &Nat) -> Nat {
        match (self, other) {
            (Nat::Small(a), Nat::Small(b)) => match a.checked_add(*b) {
                Some(c) => Nat::Small(c),
                None => Nat::Big(BigUint::from(*a) + BigUint::from(*b)),
            },
            _ => Nat::from_biguint(self.to_biguint() + other.to_biguint()),
        }
    }

    pub fn mul(&self, other: &Nat) -> Nat {
        match (self, other) {
            (Nat::Small(a), Nat::Small(b)) => match a.checked_mul(*b) {
                Some(c) => Nat::Small(c),
                None => Nat::Big(BigUint::from(*a) * BigUint::from(*b)),
            },
            _ => Nat::from_biguint(self.to_biguint() * other.to_biguint()),
        }
    }

    /// Saturating subtraction: zero whenever self <= other.
    pub fn sub_floor(&self, other: &Nat) -> Nat {
        if self <= other {
            return Nat::ZERO;
        }
        match (self, other) {
            (Nat::Small(a), Nat::Small(b)) => Nat::Small(a - b),
            _ => Nat::from_biguint(self.to_biguint() - other.to_biguint()),
        }
    }

    /// x when divisor is zero, floor(x / divisor) otherwise.
    pub fn div_total(&self, other: &Nat) -> Nat {
        if other.is_zero() {
            return self.clone();
        }
        match (self, other) {
            (Nat::Small(a), Nat::Small(b)) => Nat::Small(a / b),
            _ => Nat::from_biguint(self.to_biguint() / other.to_biguint()),
        }
    }

    /// x when y = 0, otherwise the ceiling of the y-th root of x.
    pub fn root_ceil(&self, y: &Nat) -> Nat {
        let Some(y) = y.as_u64() else {
            // root index beyond u64: any x >= 2 has root ceil 2 only for
            // absurdly small x; for y that large the root is 0 or 1 for x in
            // {0, 1}, else 2 never reached. ceil(x^(1/y)) is 1 for x >= 1.
            return if self.is_zero() { Nat::ZERO } else { Nat::ONE };
        };
        if y == 0 {
            return self.clone();
        }
        if y == 1 || self.is_zero() || *self == Nat::ONE {
            return self.clone();
        }
        // smallest r with r^y >= x
        let x = self.to_biguint();
        let mut lo = BigUint::one();
        let mut hi = BigUint::from(2u32);
        while hi.pow(y as u32) < x {
            hi = &hi * 2u32;
        }
        // invariant: lo^y < x <= hi^y is not quite right at start; fix lo=1 (1^y=1 < x since x>=2)
        while &lo + BigUint::one() < hi {
            let mid = (&lo + &hi) / 2u32;
            if mid.pow(y as u32) < x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Nat::from_biguint(hi)
    }

    /// floor(log2 x) for x >= 2, zero otherwise.
    pub fn log2_floor(&self) -> Nat {
        match self {
            Nat::Small(v) if *v < 2 => Nat::ZERO,
            Nat::Small(v) => Nat::Small(63 - v.leading_zeros() as u64),
            Nat::Big(b) => Nat::Small(b.bits() - 1),
        }
    }

    /// Number of binary digits; 0 for 0.
    pub fn bit_len(&self) -> u64 {
        match self {
            Nat::Small(0) => 0,
            Nat::Small(v) => 64 - v.leading_zeros() as u64,
            Nat::Big(b) => b.bits(),
        }
    }

    /// Number of one bits among the rightmost j bits.
    pub fn count_ones_low(&self, j: &Nat) -> Nat {
        let width = self.bit_len();
        let j = match j.as_u64() {
            Some(j) => j.min(width),
            None => width,
        };
        match self {
            Nat::Small(v) => {
                let masked = if j >= 64 { *v } else { v & ((1u64 << j) - 1).max(0) };
                Nat::Small(masked.count_ones() as u64)
            }
            Nat::Big(b) => {
                let mut n = 0u64;
                for i in 0..j {
                    if b.bit(i) {
                        n += 1;
                    }
                }
                Nat::Small(n)
            }
        }
    }

    pub fn max_with(&self, other: &Nat) -> Nat {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }
}

impl PartialOrd for Nat {
    fn partial_cmp(&self, other: &Nat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Nat {
    fn cmp(&self, other: &Nat) -> Ordering {
        match (self, other) {
            (Nat::Small(a), Nat::Small(b)) => a.cmp(b),
            (Nat::Small(_), Nat::Big(_)) => Ordering::Less,
            (Nat::Big(_), Nat::Small(_)) => Ordering::Greater,
            (Nat::Big(a), Nat::Big(b)) => a.cmp(b),
        }
    }
}

impl From<u64> for Nat {
    fn from(v: u64) -> Nat {
        Nat::Small(v)
    }
}

impl From<u32> for Nat {
    fn from(v: u32) -> Nat {
        Nat::Small(v as u64)
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nat::Small(v) => write!(f, "{v}"),
            Nat::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Nat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Nat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Nat, D::Error> {
        let s = String::deserialize(d)?;
        let b: BigUint = s.parse().map_err(serde::de::Error::custom)?;
        Ok(Nat::from_biguint(b))
    }
}

impl Zero for Nat {
    fn zero() -> Self {
        Nat::ZERO
    }
    fn is_zero(&self) -> bool {
        Nat::is_zero(self)
    }
}

impl std::ops::Add for Nat {
    type Output = Nat;
    fn add(self, rhs: Nat) -> Nat {
        Nat::add(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_ceil_matches_brute_force() {
        for x in 0u64..200 {
            for y in 0u64..6 {
                let got = Nat::from(x).root_ceil(&Nat::from(y));
                let want = if y == 0 {
                    x
                } else {
                    (0u64..).find(|r| r.pow(y as u32) >= x).unwrap()
                };
                assert_eq!(got, Nat::from(want), "root({x},{y})");
            }
        }
    }

    #[test]
    fn log2_floor_of_powers() {
        for k in 0u32..60 {
            assert_eq!(Nat::pow2(k).log2_floor(), Nat::from(k as u64));
        }
        assert_eq!(Nat::from(1u64).log2_floor(), Nat::ZERO);
        assert_eq!(Nat::from(0u64).log2_floor(), Nat::ZERO);
    }

    #[test]
    fn count_ones_low_bits() {
        // 11 = 1011, rightmost 3 bits are 011
        assert_eq!(Nat::from(11u64).count_ones_low(&Nat::from(3u64)), Nat::from(2u64));
        assert_eq!(Nat::from(11u64).count_ones_low(&Nat::from(64u64)), Nat::from(3u64));
    }

    #[test]
    fn big_small_crossover() {
        let big = Nat::pow2(70);
        let one = Nat::ONE;
        assert!(big > one);
        assert_eq!(big.sub_floor(&big), Nat::ZERO);
        assert_eq!(big.log2_floor(), Nat::from(70u64));
        assert_eq!(Nat::from_biguint(BigUint::from(5u32)), Nat::Small(5));
    }
}
