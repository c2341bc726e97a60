//! Quotients of integer polynomials in lowest terms.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::gcd::mpoly_gcd;
use super::mpoly::{MPoly, Vars};
use super::PolyError;
use crate::ring::{CoefDomain, Field, Integers, Rationals, Ring};

/// `num / den` with `gcd(num, den) = 1` and positive leading coefficient of
/// `den`. Rational constants are absorbed: both parts have integer
/// coefficients.
#[derive(Clone, PartialEq)]
pub struct RatFunc {
    num: MPoly<Integers>,
    den: MPoly<Integers>,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.constant_value().is_some_and(|c| c == BigInt::from(1)) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl RatFunc {
    pub fn new(num: MPoly<Integers>, den: MPoly<Integers>) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.vars() != den.vars() {
            return Err(PolyError::VariableMismatch(
                num.vars().names().join(","),
                den.vars().names().join(","),
            ));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MPoly<Integers>, den: MPoly<Integers>) -> Self {
        if num.is_zero() {
            return RatFunc { den: MPoly::one(Integers, num.vars().clone()), num };
        }
        let g = mpoly_gcd(&num, &den);
        let (mut num, mut den) = if g.is_constant() && g.constant_term() == BigInt::from(1) {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        if den.leading_coeff().is_negative() {
            num = num.neg_poly();
            den = den.neg_poly();
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: MPoly<Integers>) -> Self {
        let den = MPoly::one(Integers, p.vars().clone());
        RatFunc { num: p, den }
    }

    pub fn from_rational_poly(p: &MPoly<Rationals>) -> Self {
        let (scale, prim) = p.to_integer_primitive();
        let vars = p.vars().clone();
        let num = prim.scale(scale.numer());
        let den = MPoly::constant(Integers, vars, scale.denom().clone());
        Self::reduce(num, den)
    }

    pub fn num(&self) -> &MPoly<Integers> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<Integers> {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator is constant.
    pub fn as_poly(&self) -> Option<MPoly<Rationals>> {
        let d = self.den.constant_value()?;
        let inv = BigRational::new(BigInt::from(1), d);
        Some(self.num.to_rational().scale(&inv))
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::reduce(self.num.add_poly(&o.num), self.den.clone());
        }
        let num = self.num.mul_poly(&o.den).add_poly(&o.num.mul_poly(&self.den));
        Self::reduce(num, self.den.mul_poly(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg_poly(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::reduce(self.num.mul_poly(&o.num), self.den.mul_poly(&o.den))
    }

    pub fn div(&self, o: &Self) -> Result<Self, PolyError> {
        if o.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::reduce(self.num.mul_poly(&o.den), self.den.mul_poly(&o.num)))
    }

    pub fn pow(&self, e: u32) -> Self {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        Some(BigRational::new(self.num.constant_value()?, self.den.constant_value()?))
    }

    /// Re-expresses over another variable list by name.
    pub fn embed(&self, vars: &Vars) -> Result<Self, PolyError> {
        Ok(RatFunc { num: self.num.embed(vars)?, den: self.den.embed(vars)? })
    }

    /// Replaces every variable by a value in the rational function field of
    /// `target`.
    pub fn compose(&self, target: &RatFuncField, values: &[RatFunc]) -> Option<RatFunc> {
        self.eval_in(target, values)
    }

    /// Value at a rational point; `None` if the denominator vanishes there.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let q = Rationals;
        let d = self.den.eval_hom(&q, point, |c| q.from_int(c));
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_hom(&q, point, |c| q.from_int(c)) / d)
    }

    /// Evaluates in any ring receiving the integers; `None` if the
    /// denominator is not invertible at the point.
    pub fn eval_in<S: Ring>(&self, ring: &S, point: &[S::Elem]) -> Option<S::Elem> {
        let d = self.den.eval_hom(ring, point, |c| ring.from_int(c));
        let n = self.num.eval_hom(ring, point, |c| ring.from_int(c));
        ring.div(&n, &d)
    }
}

/// The field of rational functions over a fixed variable list.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFuncField {
    vars: Vars,
}

impl RatFuncField {
    pub fn new(vars: Vars) -> Self {
        RatFuncField { vars }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn var(&self, name: &str) -> Result<RatFunc, PolyError> {
        Ok(RatFunc::from_poly(MPoly::var(Integers, self.vars.clone(), name)?))
    }
}

impl Ring for RatFuncField {
    type Elem = RatFunc;

    fn domain(&self) -> CoefDomain {
        CoefDomain::RationalFunctions { vars: self.vars.names().to_vec() }
    }
    fn zero(&self) -> RatFunc {
        RatFunc::from_poly(MPoly::zero(Integers, self.vars.clone()))
    }
    fn one(&self) -> RatFunc {
        RatFunc::from_poly(MPoly::one(Integers, self.vars.clone()))
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn from_int(&self, n: &BigInt) -> RatFunc {
        RatFunc::from_poly(MPoly::constant(Integers, self.vars.clone(), n.clone()))
    }
    fn from_rational(&self, q: &BigRational) -> Option<RatFunc> {
        let v = self.vars.clone();
        Some(RatFunc::reduce(
            MPoly::constant(Integers, v.clone(), q.numer().clone()),
            MPoly::constant(Integers, v, q.denom().clone()),
        ))
    }
    fn div(&self, a: &RatFunc, b: &RatFunc) -> Option<RatFunc> {
        a.div(b).ok()
    }
    fn is_field(&self) -> bool {
        true
    }
    fn fmt_elem(&self, a: &RatFunc) -> String {
        if a.num().len() <= 1 && a.den().is_constant() && a.den().constant_term() == BigInt::from(1) {
            a.to_string()
        } else {
            format!("({a})")
        }
    }
}

impl Field for RatFuncField {}

/// Substitutes `var = r` into `p`, clearing denominators:
/// `sum c_k var^k  ->  sum c_k num^k den^(d-k) / den^d`.
pub fn substitute_ratfunc(p: &MPoly<Integers>, var: &str, r: &RatFunc) -> Result<RatFunc, PolyError> {
    let i = p.vars().require(var)?;
    if r.vars() != p.vars() {
        return Err(PolyError::VariableMismatch(p.vars().names().join(","), r.vars().names().join(",")));
    }
    let coeffs = p.to_univariate(i);
    let d = coeffs.len() - 1;
    let name = &p.vars().names()[i];
    let mut num = MPoly::zero(Integers, p.vars().clone());
    let mut num_pow = MPoly::one(Integers, p.vars().clone());
    let mut den_pows = vec![MPoly::one(Integers, p.vars().clone())];
    for k in 1..=d {
        den_pows.push(den_pows[k - 1].mul_poly(r.den()));
    }
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let c_full = MPoly::from_univariate(std::slice::from_ref(c), i, name);
            num = num.add_poly(&c_full.mul_poly(&num_pow).mul_poly(&den_pows[d - k]));
        }
        if k < d {
            num_pow = num_pow.mul_poly(r.num());
        }
    }
    RatFunc::new(num, den_pows[d].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{parse_int_poly, parse_ratfunc};

    #[test]
    fn substitution_into_fraction() {
        let v = Vars::new(&["x0", "x1", "u", "v"]);
        let p = parse_int_poly("x0*x1 + x0", &v).unwrap();
        let r = parse_ratfunc("(u+1)/v", &v).unwrap();
        let s = substitute_ratfunc(&p, "x0", &r).unwrap();
        assert_eq!(s.to_string(), "(x1*u + x1 + u + 1)/(v)");
    }

    #[test]
    fn lowest_terms() {
        let v = Vars::new(&["x", "y"]);
        let r = parse_ratfunc("(x^2-y^2)/(2*y-2*x)", &v).unwrap();
        assert_eq!(r.num().to_string(), "-x - y");
        assert_eq!(r.den().to_string(), "2");
        let half = parse_ratfunc("x/2 + x/2", &v).unwrap();
        assert_eq!(half.to_string(), "x");
    }
}
