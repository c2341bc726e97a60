//! Polynomials as coefficients: lets the univariate algorithms (pseudo
//! remainders, subresultants, Bareiss determinants) run over `R[vars]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::mpoly::{MPoly, Vars};
use crate::ring::{CoefDomain, Integers, PrimeField, Rationals, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<R: Ring> {
    pub base: R,
    pub vars: Vars,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R, vars: Vars) -> Self {
        PolyRing { base, vars }
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = MPoly<R>;

    fn domain(&self) -> CoefDomain {
        self.base.domain()
    }
    fn zero(&self) -> MPoly<R> {
        MPoly::zero(self.base.clone(), self.vars.clone())
    }
    fn one(&self) -> MPoly<R> {
        MPoly::one(self.base.clone(), self.vars.clone())
    }
    fn is_zero(&self, a: &MPoly<R>) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &MPoly<R>) -> bool {
        a.constant_value().is_some_and(|c| self.base.is_one(&c))
    }
    fn add(&self, a: &MPoly<R>, b: &MPoly<R>) -> MPoly<R> {
        a.add_poly(b)
    }
    fn sub(&self, a: &MPoly<R>, b: &MPoly<R>) -> MPoly<R> {
        a.sub_poly(b)
    }
    fn neg(&self, a: &MPoly<R>) -> MPoly<R> {
        a.neg_poly()
    }
    fn mul(&self, a: &MPoly<R>, b: &MPoly<R>) -> MPoly<R> {
        a.mul_poly(b)
    }
    fn from_int(&self, n: &BigInt) -> MPoly<R> {
        MPoly::constant(self.base.clone(), self.vars.clone(), self.base.from_int(n))
    }
    fn from_rational(&self, q: &BigRational) -> Option<MPoly<R>> {
        let c = self.base.from_rational(q)?;
        Some(MPoly::constant(self.base.clone(), self.vars.clone(), c))
    }
    fn div(&self, a: &MPoly<R>, b: &MPoly<R>) -> Option<MPoly<R>> {
        a.exact_div(b).ok()
    }
    fn is_field(&self) -> bool {
        false
    }
    fn fmt_elem(&self, a: &MPoly<R>) -> String {
        format!("({a})")
    }
}

/// Domains with a gcd, used for content extraction in primitive remainder
/// sequences. Over a field every nonzero gcd is 1.
pub trait GcdRing: Ring {
    fn gcd(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Unit-normalizes `a` (positive / monic-like); returns the normal form.
    fn normalize(&self, a: &Self::Elem) -> Self::Elem {
        a.clone()
    }
}

impl GcdRing for Integers {
    fn gcd(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a.gcd(b)
    }
    fn normalize(&self, a: &BigInt) -> BigInt {
        a.abs()
    }
}

impl GcdRing for Rationals {
    fn gcd(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if a.is_zero() && b.is_zero() {
            BigRational::zero()
        } else {
            BigRational::one()
        }
    }
    fn normalize(&self, a: &BigRational) -> BigRational {
        if a.is_zero() {
            a.clone()
        } else {
            BigRational::one()
        }
    }
}

impl GcdRing for PrimeField {
    fn gcd(&self, a: &u64, b: &u64) -> u64 {
        u64::from(*a != 0 || *b != 0)
    }
    fn normalize(&self, a: &u64) -> u64 {
        u64::from(*a != 0)
    }
}

impl GcdRing for PolyRing<Integers> {
    fn gcd(&self, a: &MPoly<Integers>, b: &MPoly<Integers>) -> MPoly<Integers> {
        super::gcd::mpoly_gcd(a, b)
    }
    fn normalize(&self, a: &MPoly<Integers>) -> MPoly<Integers> {
        if a.is_zero() {
            return a.clone();
        }
        if a.leading_coeff().is_negative() {
            a.neg_poly()
        } else {
            a.clone()
        }
    }
}
