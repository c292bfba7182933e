//! Arithmetic in prime fields `F_p` with `p < 2^62`.
//!
//! Elements are always kept as canonical residues in `[0, p)`. All arithmetic
//! the algorithms perform goes through the [`FieldOps`] trait so that an
//! instrumented implementation can count field operations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Exclusive upper bound on supported moduli.
pub const MODULUS_LIMIT: u64 = 1 << 62;

/// A prime modulus, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..MODULUS_LIMIT).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self(p))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    /// The element `v mod p`.
    #[inline]
    pub fn elem(self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.0,
            modulus: self,
        }
    }

    /// The element `v mod p` for a signed `v`.
    pub fn elem_i64(self, v: i64) -> FieldElement {
        FieldElement {
            value: (v as i128).rem_euclid(self.0 as i128) as u64,
            modulus: self,
        }
    }

    /// Builds an element from an already canonical residue.
    pub fn canonical(self, v: u64) -> Result<FieldElement> {
        if v >= self.0 {
            return Err(Error::Validation(format!(
                "{v} is not a canonical residue modulo {}",
                self.0
            )));
        }
        Ok(FieldElement {
            value: v,
            modulus: self,
        })
    }

    #[inline]
    pub fn zero(self) -> FieldElement {
        FieldElement {
            value: 0,
            modulus: self,
        }
    }

    #[inline]
    pub fn one(self) -> FieldElement {
        FieldElement {
            value: 1,
            modulus: self,
        }
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A canonical residue together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: PrimeModulus,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check_same(self, other: Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.0,
                right: other.modulus.0,
            });
        }
        Ok(())
    }

    pub fn try_add(self, other: Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(raw_add(self, other))
    }

    pub fn try_sub(self, other: Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(raw_sub(self, other))
    }

    pub fn try_mul(self, other: Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(raw_mul(self, other))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(self) -> Result<Self> {
        raw_inv(self)
    }

    pub fn pow(self, e: u64) -> Self {
        self.modulus.pow(self, e)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operator forms panic on mismatched moduli; use the `try_*` methods to get an error instead.
impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(rhs).expect("field addition")
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(rhs).expect("field subtraction")
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(rhs).expect("field multiplication")
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        raw_neg(self)
    }
}

#[inline]
fn raw_add(a: FieldElement, b: FieldElement) -> FieldElement {
    let p = a.modulus.0;
    // a, b < 2^62 so the sum cannot overflow.
    let s = a.value + b.value;
    FieldElement {
        value: if s >= p { s - p } else { s },
        modulus: a.modulus,
    }
}

#[inline]
fn raw_sub(a: FieldElement, b: FieldElement) -> FieldElement {
    let p = a.modulus.0;
    FieldElement {
        value: if a.value >= b.value {
            a.value - b.value
        } else {
            a.value + p - b.value
        },
        modulus: a.modulus,
    }
}

#[inline]
fn raw_neg(a: FieldElement) -> FieldElement {
    FieldElement {
        value: if a.value == 0 {
            0
        } else {
            a.modulus.0 - a.value
        },
        modulus: a.modulus,
    }
}

#[inline]
fn raw_mul(a: FieldElement, b: FieldElement) -> FieldElement {
    let prod = (a.value as u128) * (b.value as u128);
    FieldElement {
        value: (prod % a.modulus.0 as u128) as u64,
        modulus: a.modulus,
    }
}

fn raw_inv(a: FieldElement) -> Result<FieldElement> {
    if a.value == 0 {
        return Err(Error::DivisionByZero);
    }
    let p = a.modulus.0 as i128;
    let (mut r0, mut r1) = (p, a.value as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "gcd with a prime modulus must be 1");
    Ok(FieldElement {
        value: t0.rem_euclid(p) as u64,
        modulus: a.modulus,
    })
}

/// The field operations used by every algorithm in this crate.
///
/// [`PrimeModulus`] is the plain implementation. Instrumented implementations
/// (see [`crate::algo::counting`]) wrap it and count calls. Operands are
/// assumed to belong to `self.modulus()`; this is checked in debug builds.
pub trait FieldOps {
    fn modulus(&self) -> PrimeModulus;
    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement;
    fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement;
    fn neg(&self, a: FieldElement) -> FieldElement;
    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement;
    fn inv(&self, a: FieldElement) -> Result<FieldElement>;

    fn zero(&self) -> FieldElement {
        self.modulus().zero()
    }

    fn one(&self) -> FieldElement {
        self.modulus().one()
    }

    /// Square-and-multiply. Uses `popcount(e) + bitlen(e) - 1` multiplications
    /// for `e >= 1` and none for `e = 0`.
    fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// `acc + c * x`.
    #[inline]
    fn mul_add(&self, acc: FieldElement, c: FieldElement, x: FieldElement) -> FieldElement {
        self.add(acc, self.mul(c, x))
    }
}

impl FieldOps for PrimeModulus {
    #[inline]
    fn modulus(&self) -> PrimeModulus {
        *self
    }

    #[inline]
    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.modulus == *self && b.modulus == *self);
        raw_add(a, b)
    }

    #[inline]
    fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.modulus == *self && b.modulus == *self);
        raw_sub(a, b)
    }

    #[inline]
    fn neg(&self, a: FieldElement) -> FieldElement {
        debug_assert!(a.modulus == *self);
        raw_neg(a)
    }

    #[inline]
    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.modulus == *self && b.modulus == *self);
        raw_mul(a, b)
    }

    fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        debug_assert!(a.modulus == *self);
        raw_inv(a)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
