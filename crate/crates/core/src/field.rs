//! Prime-field scalars.
//!
//! Linear algebra works directly on reduced `u32` residues through the free
//! functions in this module; [`FieldElem`] is the checked, self-describing
//! value used at API boundaries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u32 = 32003;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Rejects even moduli, composites and anything that does not fit the
/// `u32` residue representation used by the elimination kernels.
pub fn check_modulus(p: u64) -> Result<u32> {
    if !(3..=(1 << 31)).contains(&p) || !is_prime(p) {
        return Err(Error::BadModulus(p));
    }
    Ok(p as u32)
}

#[inline]
pub fn add(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    if s >= p as u64 {
        (s - p as u64) as u32
    } else {
        s as u32
    }
}

#[inline]
pub fn sub(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        (a as u64 + p as u64 - b as u64) as u32
    }
}

#[inline]
pub fn neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1u32 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse by Fermat. Panics on zero.
pub fn inv(a: u32, p: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "inverse of zero in F_{p}");
    pow(a, p as u64 - 2, p)
}

/// Maps a signed integer into `[0, p)`.
pub fn reduce_i64(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// Symmetric lift into `(-p/2, p/2]`, used when printing small negatives.
pub fn signed(a: u32, p: u32) -> i64 {
    if a > p / 2 {
        a as i64 - p as i64
    } else {
        a as i64
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u32,
    p: u32,
}

impl FieldElem {
    pub fn new(value: i64, p: u32) -> Result<Self> {
        check_modulus(p as u64)?;
        Ok(Self {
            value: reduce_i64(value, p),
            p,
        })
    }

    /// Caller guarantees `p` is an odd prime and `value < p`.
    pub(crate) fn from_raw(value: u32, p: u32) -> Self {
        debug_assert!(value < p);
        Self { value, p }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(Self::from_raw(inv(self.value, self.p), self.p))
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        Self::from_raw(pow(self.value, e, self.p), self.p)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElem {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        Self::from_raw(add(self.value, rhs.value, self.p), self.p)
    }
}

impl Sub for FieldElem {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        Self::from_raw(sub(self.value, rhs.value, self.p), self.p)
    }
}

impl Mul for FieldElem {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        Self::from_raw(mul(self.value, rhs.value, self.p), self.p)
    }
}

impl Neg for FieldElem {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_raw(neg(self.value, self.p), self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_moduli() {
        assert!(check_modulus(2).is_err());
        assert!(check_modulus(9).is_err());
        assert!(check_modulus(1).is_err());
        assert_eq!(check_modulus(32003).unwrap(), 32003);
        assert!(FieldElem::new(3, 4).is_err());
    }

    #[test]
    fn negative_literals_reduce() {
        let a = FieldElem::new(-1, 7).unwrap();
        assert_eq!(a.value(), 6);
        assert_eq!(signed(6, 7), -1);
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u32..32003, b in 0u32..32003, c in 0u32..32003) {
            let p = DEFAULT_PRIME;
            let (a, b, c) = (FieldElem::from_raw(a, p), FieldElem::from_raw(b, p), FieldElem::from_raw(c, p));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a + (-a), FieldElem::from_raw(0, p));
            if let Some(ai) = a.inverse() {
                prop_assert_eq!(a * ai, FieldElem::from_raw(1, p));
            } else {
                prop_assert!(a.is_zero());
            }
        }
    }
}
