//! Arithmetic in prime fields F_q.
//!
//! Field elements are stored as plain `u32` residues in `0..q`; a
//! [`PrimeField`] value carries the modulus and performs the arithmetic.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A residue modulo the prime of the owning [`PrimeField`].
pub type FieldElem = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    q: u32,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { q: 2 }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        // Products of two residues must fit in u64.
        if !is_prime(q as u64) || q > (1 << 31) {
            return Err(Error::NotPrime(q as u64));
        }
        Ok(PrimeField { q })
    }

    pub fn f2() -> Self {
        PrimeField { q: 2 }
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Reduces a signed integer into the field. Values with `|v| >= q` are rejected.
    pub fn from_i64(&self, v: i64) -> Result<FieldElem> {
        let q = self.q as i64;
        if v <= -q || v >= q {
            return Err(Error::Coefficient { value: v, q: self.q });
        }
        Ok(v.rem_euclid(q) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        ((a as u64 + b as u64) % self.q as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        ((a as u64 + self.q as u64 - b as u64) % self.q as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    /// Multiplicative inverse via Fermat's little theorem. Panics on zero.
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        assert!(a % self.q != 0, "inverse of zero in F_{}", self.q);
        let mut result = 1u64;
        let mut base = a as u64 % self.q as u64;
        let mut e = self.q as u64 - 2;
        let m = self.q as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        result as u32
    }

    #[inline]
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    /// Signed representative in `(-q/2, q/2]`, used for printing boundary coefficients.
    pub fn signed(&self, a: FieldElem) -> i64 {
        let a = a as i64;
        let q = self.q as i64;
        if a > q / 2 {
            a - q
        } else {
            a
        }
    }
}
