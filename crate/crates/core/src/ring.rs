//! Coefficient domains.
//!
//! A [`Ring`] value is the runtime description of a coefficient domain; its
//! elements are plain data. Polynomials carry their ring so that moduli and
//! number fields travel with the values that depend on them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;

/// Descriptive tag of a coefficient domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CoefDomain {
    Integer,
    Rational,
    ModPrimePower { p: u64, k: u32 },
    PrimeField { p: u64 },
    NumberField { minpoly: String },
    RationalFunctions { vars: Vec<String> },
}

impl fmt::Display for CoefDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefDomain::Integer => write!(f, "ZZ"),
            CoefDomain::Rational => write!(f, "QQ"),
            CoefDomain::ModPrimePower { p, k } => write!(f, "Z/{p}^{k}"),
            CoefDomain::PrimeField { p } => write!(f, "GF({p})"),
            CoefDomain::NumberField { minpoly } => write!(f, "Q[z]/({minpoly})"),
            CoefDomain::RationalFunctions { vars } => write!(f, "Q({})", vars.join(",")),
        }
    }
}

pub trait Ring: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn domain(&self) -> CoefDomain;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    /// Image of a rational number, when its denominator is invertible here.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    /// `a / b` if the quotient exists in this ring.
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    fn is_field(&self) -> bool;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// A square root, if one exists and this domain knows how to find it.
    fn sqrt(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    /// `Some(true)` for negative elements of an ordered domain.
    fn is_negative(&self, _a: &Self::Elem) -> Option<bool> {
        None
    }
}

/// Marker for domains where every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.div(&self.one(), a)
    }
}

/// The integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn domain(&self) -> CoefDomain {
        CoefDomain::Integer
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigInt) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn add_assign(&self, a: &mut BigInt, b: &BigInt) {
        *a += b;
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigInt> {
        q.is_integer().then(|| q.numer().clone())
    }
    fn div(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return None;
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }
    fn is_field(&self) -> bool {
        false
    }
    fn fmt_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn sqrt(&self, a: &BigInt) -> Option<BigInt> {
        arith::exact_isqrt(a)
    }
    fn is_negative(&self, a: &BigInt) -> Option<bool> {
        Some(a.is_negative())
    }
}

/// The rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn domain(&self) -> CoefDomain {
        CoefDomain::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn add_assign(&self, a: &mut BigRational, b: &BigRational) {
        *a += b;
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        (!b.is_zero()).then(|| a / b)
    }
    fn is_field(&self) -> bool {
        true
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        arith::exact_rational_sqrt(a)
    }
    fn is_negative(&self, a: &BigRational) -> Option<bool> {
        Some(a.is_negative())
    }
}

impl Field for Rationals {}

/// Residues modulo `p^k`, stored as least nonnegative representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPrimePower {
    p: u64,
    k: u32,
    modulus: BigInt,
}

impl ModPrimePower {
    pub fn new(p: u64, k: u32) -> Self {
        assert!(arith::is_prime_u64(p), "{p} is not prime");
        assert!(k >= 1, "precision must be at least 1");
        ModPrimePower {
            p,
            k,
            modulus: BigInt::from(p).pow(k),
        }
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }
    pub fn reduce(&self, a: &BigInt) -> BigInt {
        arith::modulo(a, &self.modulus)
    }
    pub fn is_unit(&self, a: &BigInt) -> bool {
        !(a % BigInt::from(self.p)).is_zero()
    }
}

impl Ring for ModPrimePower {
    type Elem = BigInt;

    fn domain(&self) -> CoefDomain {
        CoefDomain::ModPrimePower { p: self.p, k: self.k }
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        self.reduce(&BigInt::one())
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let s = a + b;
        if s >= self.modulus {
            s - &self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let s = a - b;
        if s.is_negative() {
            s + &self.modulus
        } else {
            s
        }
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        if a.is_zero() {
            a.clone()
        } else {
            &self.modulus - a
        }
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) % &self.modulus
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        self.reduce(n)
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigInt> {
        let inv = arith::mod_inverse(q.denom(), &self.modulus)?;
        Some(self.reduce(&(q.numer() * inv)))
    }
    fn div(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        let inv = arith::mod_inverse(b, &self.modulus)?;
        Some(self.mul(a, &inv))
    }
    fn is_field(&self) -> bool {
        self.k == 1
    }
    fn fmt_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn sqrt(&self, a: &BigInt) -> Option<BigInt> {
        if a.is_zero() {
            return Some(BigInt::zero());
        }
        arith::sqrt_mod_prime_power(a, self.p, self.k)
    }
}

/// The prime field `GF(p)` with machine-word residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(arith::is_prime_u64(p), "{p} is not prime");
        assert!(p < (1 << 62), "prime too large for word arithmetic");
        PrimeField { p }
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    /// Inverse of a nonzero residue.
    pub fn inv_u64(&self, a: u64) -> u64 {
        arith::mod_inverse_u64(a, self.p).expect("zero has no inverse")
    }
    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        arith::modulo(n, &BigInt::from(self.p)).to_u64().unwrap()
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn domain(&self) -> CoefDomain {
        CoefDomain::PrimeField { p: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        arith::mul_mod_u64(*a, *b, self.p)
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        self.reduce_int(n)
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let d = self.reduce_int(q.denom());
        let inv = arith::mod_inverse_u64(d, self.p)?;
        Some(self.mul(&self.reduce_int(q.numer()), &inv))
    }
    fn div(&self, a: &u64, b: &u64) -> Option<u64> {
        let inv = arith::mod_inverse_u64(*b, self.p)?;
        Some(self.mul(a, &inv))
    }
    fn is_field(&self) -> bool {
        true
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn sqrt(&self, a: &u64) -> Option<u64> {
        arith::sqrt_mod_u64(*a, self.p)
    }
}

impl Field for PrimeField {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_prime_power_arithmetic() {
        let r = ModPrimePower::new(7, 2);
        let a = r.from_i64(-1);
        assert_eq!(a, BigInt::from(48));
        assert_eq!(r.mul(&BigInt::from(10), &BigInt::from(10)), BigInt::from(2));
        let half = r.from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(r.mul(&half, &BigInt::from(2)), BigInt::one());
        assert!(r.div(&BigInt::one(), &BigInt::from(7)).is_none());
        assert_eq!(r.sqrt(&BigInt::from(2)), Some(BigInt::from(10)));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(19);
        assert_eq!(f.from_i64(-1), 18);
        assert_eq!(f.inv(&2), Some(10));
        assert_eq!(f.pow(&2, 18), 1);
        let r = f.sqrt(&5).unwrap();
        assert_eq!(f.mul(&r, &r), 5);
    }

    #[test]
    fn integer_division_is_exact_only() {
        assert_eq!(Integers.div(&BigInt::from(12), &BigInt::from(4)), Some(BigInt::from(3)));
        assert_eq!(Integers.div(&BigInt::from(12), &BigInt::from(5)), None);
    }
}
