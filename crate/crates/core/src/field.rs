//! Arithmetic in prime fields GF(p).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest modulus accepted. Products of two residues fit in a `u32`.
pub const MAX_PRIME: u32 = 65_521;

/// A prime field GF(p), stored as its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// The binary field, the default everywhere in this crate.
    pub const GF2: PrimeField = PrimeField { p: 2 };

    pub fn new(p: u32) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn is_binary(self) -> bool {
        self.p == 2
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    /// Multiplicative inverse by Fermat's little theorem. `a` must be nonzero.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }

    pub fn pow(self, mut base: u32, mut exp: u32) -> u32 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn element(self, value: u32) -> FieldElement {
        FieldElement {
            value: value % self.p,
            field: self,
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField::GF2
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A single value of GF(p), carrying its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: PrimeField,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        self.field.element(self.field.add(self.value, rhs.value))
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        self.field.element(self.field.sub(self.value, rhs.value))
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        self.field.element(self.field.mul(self.value, rhs.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        self.field.element(self.field.neg(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_trivial_moduli() {
        for p in [0, 1, 4, 9, 15, 65_536] {
            assert_eq!(PrimeField::new(p), Err(Error::NotPrime(p)));
        }
        for p in [2, 3, 5, 7, 251, 65_521] {
            assert!(PrimeField::new(p).is_ok());
        }
    }

    #[test]
    fn inverses() {
        for p in [2, 3, 5, 7, 13] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                assert_eq!(f.mul(a, f.inv(a)), 1, "p = {p}, a = {a}");
            }
        }
    }

    #[test]
    fn element_ops_wrap() {
        let f = PrimeField::new(5).unwrap();
        let a = f.element(3);
        let b = f.element(4);
        assert_eq!((a + b).value(), 2);
        assert_eq!((a - b).value(), 4);
        assert_eq!((a * b).value(), 2);
        assert_eq!((-a).value(), 2);
        assert_eq!(f.reduce(-7), 3);
    }
}
