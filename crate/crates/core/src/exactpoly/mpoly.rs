use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::PolyError;
use crate::ring::{Integers, Rationals, Ring};

pub type Exponent = u16;

/// Exponent vector, one entry per variable of the owning polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub SmallVec<[Exponent; 8]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize, e: Exponent) -> Self {
        let mut m = Self::one(n);
        m.0[i] = e;
        m
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn without(&self, i: usize) -> Monomial {
        let mut v = self.0.clone();
        v.remove(i);
        Monomial(v)
    }

    pub fn with_inserted(&self, i: usize, e: Exponent) -> Monomial {
        let mut v = self.0.clone();
        v.insert(i, e);
        Monomial(v)
    }
}

/// Ordered list of variable names shared between polynomials of one system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, PolyError> {
        self.index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn without(&self, i: usize) -> Vars {
        let mut v: Vec<String> = self.0.to_vec();
        v.remove(i);
        Vars(v.into())
    }

    pub fn with_inserted(&self, i: usize, name: &str) -> Vars {
        let mut v: Vec<String> = self.0.to_vec();
        v.insert(i, name.to_string());
        Vars(v.into())
    }
}

impl<S: AsRef<str>> From<&[S]> for Vars {
    fn from(names: &[S]) -> Self {
        Vars::new(names)
    }
}

/// Sparse multivariate polynomial with exact coefficients.
///
/// Terms are kept sorted by strictly decreasing lexicographic exponent
/// vector with no zero coefficients, so structural equality is equality.
#[derive(Clone)]
pub struct MPoly<R: Ring> {
    ring: R,
    vars: Vars,
    terms: Vec<(Monomial, R::Elem)>,
}

impl<R: Ring> PartialEq for MPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl<R: Ring> fmt::Debug for MPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({})", self.ring.domain(), super::text::format_poly(self))
    }
}

impl<R: Ring> fmt::Display for MPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_poly(self))
    }
}

/// The four ring operations plus exact division, as a checked entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Pow(u32),
    ExactDiv,
}

impl<R: Ring> MPoly<R> {
    pub fn zero(ring: R, vars: Vars) -> Self {
        MPoly { ring, vars, terms: Vec::new() }
    }

    pub fn constant(ring: R, vars: Vars, c: R::Elem) -> Self {
        let n = vars.len();
        let terms = if ring.is_zero(&c) { vec![] } else { vec![(Monomial::one(n), c)] };
        MPoly { ring, vars, terms }
    }

    pub fn one(ring: R, vars: Vars) -> Self {
        let c = ring.one();
        Self::constant(ring, vars, c)
    }

    pub fn from_int(ring: R, vars: Vars, n: i64) -> Self {
        let c = ring.from_i64(n);
        Self::constant(ring, vars, c)
    }

    pub fn var_at(ring: R, vars: Vars, i: usize) -> Self {
        let n = vars.len();
        let c = ring.one();
        MPoly { ring, vars, terms: vec![(Monomial::var(n, i, 1), c)] }
    }

    pub fn var(ring: R, vars: Vars, name: &str) -> Result<Self, PolyError> {
        let i = vars.require(name)?;
        Ok(Self::var_at(ring, vars, i))
    }

    /// Builds a polynomial from arbitrary (possibly repeated, zero, unsorted) terms.
    pub fn from_terms(ring: R, vars: Vars, terms: Vec<(Monomial, R::Elem)>) -> Self {
        let mut map: FxHashMap<Monomial, R::Elem> = FxHashMap::default();
        for (m, c) in terms {
            debug_assert_eq!(m.len(), vars.len());
            match map.get_mut(&m) {
                Some(acc) => ring.add_assign(acc, &c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        Self::from_map(ring, vars, map)
    }

    fn from_map(ring: R, vars: Vars, map: FxHashMap<Monomial, R::Elem>) -> Self {
        let mut terms: Vec<(Monomial, R::Elem)> =
            map.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MPoly { ring, vars, terms }
    }

    /// Terms already sorted descending, distinct and nonzero.
    pub(crate) fn from_sorted_terms(ring: R, vars: Vars, terms: Vec<(Monomial, R::Elem)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        MPoly { ring, vars, terms }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &[(Monomial, R::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, R::Elem)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_value(&self) -> Option<R::Elem> {
        if self.is_zero() {
            Some(self.ring.zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> R::Elem {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.ring.zero(),
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, R::Elem)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> R::Elem {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(|| self.ring.zero())
    }

    pub fn coeff_of(&self, m: &Monomial) -> R::Elem {
        match self.terms.binary_search_by(|t| m.cmp(&t.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.ring.zero(),
        }
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.0[i] as u32).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn contains_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.0[i] > 0)
    }

    /// Indices of the variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.contains_var(i)).collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::DomainMismatch(
                self.ring.domain().to_string(),
                other.ring.domain().to_string(),
            ));
        }
        if self.vars != other.vars {
            return Err(PolyError::VariableMismatch(
                self.vars.names().join(","),
                other.vars.names().join(","),
            ));
        }
        Ok(())
    }

    /// Checked ring operation.
    pub fn ring_op(&self, other: &Self, op: RingOp) -> Result<Self, PolyError> {
        if let RingOp::Pow(n) = op {
            return Ok(self.pow(n));
        }
        self.check_compatible(other)?;
        Ok(match op {
            RingOp::Add => self.add_poly(other),
            RingOp::Sub => self.sub_poly(other),
            RingOp::Mul => self.mul_poly(other),
            RingOp::ExactDiv => self.exact_div(other)?,
            RingOp::Pow(_) => unreachable!(),
        })
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        debug_assert!(self.vars == other.vars, "variable lists differ");
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                std::cmp::Ordering::Less
            } else if j == b.len() {
                std::cmp::Ordering::Greater
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate_other { ring.neg(&b[j].1) } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other {
                        ring.sub(&a[i].1, &b[j].1)
                    } else {
                        ring.add(&a[i].1, &b[j].1)
                    };
                    if !ring.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MPoly { ring: self.ring.clone(), vars: self.vars.clone(), terms: out }
    }

    pub fn add_poly(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub_poly(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn neg_poly(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), self.ring.neg(c))).collect();
        MPoly { ring: self.ring.clone(), vars: self.vars.clone(), terms }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), self.ring.mul(a, c)))
            .filter(|(_, a)| !self.ring.is_zero(a))
            .collect();
        MPoly { ring: self.ring.clone(), vars: self.vars.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &R::Elem) -> Self {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(t, a)| (t.mul(m), self.ring.mul(a, c)))
            .filter(|(_, a)| !self.ring.is_zero(a))
            .collect();
        MPoly { ring: self.ring.clone(), vars: self.vars.clone(), terms }
    }

    pub fn mul_poly(&self, other: &Self) -> Self {
        debug_assert!(self.vars == other.vars, "variable lists differ");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring.clone(), self.vars.clone());
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_monomial(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_monomial(m, c);
        }
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let ring = &self.ring;
        let mut map: FxHashMap<Monomial, R::Elem> =
            FxHashMap::with_capacity_and_hasher(small.len() * big.len() / 2 + 1, Default::default());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                let m = ma.mul(mb);
                let p = ring.mul(ca, cb);
                match map.get_mut(&m) {
                    Some(acc) => ring.add_assign(acc, &p),
                    None => {
                        map.insert(m, p);
                    }
                }
            }
        }
        Self::from_map(self.ring.clone(), self.vars.clone(), map)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.vars.clone());
        if n == 0 {
            return acc;
        }
        let mut base = self.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                acc = acc.mul_poly(&base);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul_poly(&base);
        }
        acc
    }

    /// Exact multivariate division (lexicographic leading terms).
    pub fn exact_div(&self, d: &Self) -> Result<Self, PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let ring = &self.ring;
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return Err(PolyError::InexactDivision);
                }
                let q = ring.div(c, dc).ok_or(PolyError::InexactDivision)?;
                if !ring.is_zero(&q) {
                    terms.push((dm.quotient_of(m), q));
                }
            }
            return Ok(MPoly { ring: ring.clone(), vars: self.vars.clone(), terms });
        }
        let (lm, lc) = &d.terms[0];
        let mut rem: BTreeMap<Monomial, R::Elem> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            if !lm.divides(&m) {
                return Err(PolyError::InexactDivision);
            }
            let qc = ring.div(&c, lc).ok_or(PolyError::InexactDivision)?;
            let qm = lm.quotient_of(&m);
            for (dm, dc) in d.terms.iter().skip(1) {
                let key = qm.mul(dm);
                let prod = ring.mul(&qc, dc);
                match rem.get_mut(&key) {
                    Some(acc) => {
                        *acc = ring.sub(acc, &prod);
                        if ring.is_zero(acc) {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, ring.neg(&prod));
                    }
                }
            }
            quot.push((qm, qc));
        }
        Ok(MPoly { ring: ring.clone(), vars: self.vars.clone(), terms: quot })
    }

    /// `Some(q)` with `self = d * q`, else `None`.
    pub fn try_div(&self, d: &Self) -> Option<Self> {
        self.exact_div(d).ok()
    }

    pub fn derivative(&self, i: usize) -> Self {
        let terms: Vec<_> = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[i] > 0)
            .map(|(m, c)| {
                let e = m.0[i];
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                (m2, self.ring.mul(c, &self.ring.from_i64(e as i64)))
            })
            .filter(|(_, c)| !self.ring.is_zero(c))
            .collect();
        // lowering one exponent keeps lexicographic order
        MPoly { ring: self.ring.clone(), vars: self.vars.clone(), terms }
    }

    /// Coefficient of `var^d`, as a polynomial in the remaining variables.
    pub fn coeff_in(&self, var: &str, d: u32) -> Result<Self, PolyError> {
        let i = self.vars.require(var)?;
        Ok(self.coeff_at(i, d))
    }

    pub fn coeff_at(&self, i: usize, d: u32) -> Self {
        let terms: Vec<_> = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[i] as u32 == d)
            .map(|(m, c)| (m.without(i), c.clone()))
            .collect();
        MPoly { ring: self.ring.clone(), vars: self.vars.without(i), terms }
    }

    /// Coefficients in variable `i` (dense by degree), each without that variable.
    pub fn to_univariate(&self, i: usize) -> Vec<Self> {
        let deg = self.degree_in(i) as usize;
        let sub = self.vars.without(i);
        let mut buckets: Vec<Vec<(Monomial, R::Elem)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.0[i] as usize].push((m.without(i), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut ts| {
                ts.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                MPoly { ring: self.ring.clone(), vars: sub.clone(), terms: ts }
            })
            .collect()
    }

    /// Inverse of [`to_univariate`]: inserts variable `name` at position `i`.
    pub fn from_univariate(coeffs: &[Self], i: usize, name: &str) -> Self {
        let base = &coeffs[0];
        let vars = base.vars.with_inserted(i, name);
        let mut terms = Vec::new();
        for (d, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                terms.push((m.with_inserted(i, d as Exponent), a.clone()));
            }
        }
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MPoly { ring: base.ring.clone(), vars, terms }
    }

    /// Removes variable `i`, which must not occur.
    pub fn drop_var(&self, i: usize) -> Self {
        assert!(!self.contains_var(i), "dropping a variable that occurs");
        let terms = self.terms.iter().map(|(m, c)| (m.without(i), c.clone())).collect();
        MPoly { ring: self.ring.clone(), vars: self.vars.without(i), terms }
    }

    /// Re-expresses this polynomial over another variable list (by name).
    pub fn embed(&self, vars: &Vars) -> Result<Self, PolyError> {
        if &self.vars == vars {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.nvars());
        for (i, name) in self.vars.names().iter().enumerate() {
            match vars.index_of(name) {
                Some(j) => map.push(Some(j)),
                None if !self.contains_var(i) => map.push(None),
                None => return Err(PolyError::UnknownVariable(name.clone())),
            }
        }
        let n = vars.len();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = Monomial::one(n);
                for (i, j) in map.iter().enumerate() {
                    if let Some(j) = j {
                        e.0[*j] = m.0[i];
                    }
                }
                (e, c.clone())
            })
            .collect();
        Ok(Self::from_terms(self.ring.clone(), vars.clone(), terms))
    }

    /// Replaces variable `var` by the polynomial `r` (same variable list).
    pub fn substitute(&self, var: &str, r: &Self) -> Result<Self, PolyError> {
        let i = self.vars.require(var)?;
        self.check_compatible(r)?;
        Ok(self.substitute_at(i, r))
    }

    pub fn substitute_at(&self, i: usize, r: &Self) -> Self {
        let coeffs = self.to_univariate(i);
        let ring = self.ring.clone();
        // Horner in the substituted value
        let mut acc = Self::zero(ring, self.vars.clone());
        for c in coeffs.iter().rev() {
            let c_full = Self::from_univariate(std::slice::from_ref(c), i, &self.vars.names()[i]);
            acc = acc.mul_poly(r).add_poly(&c_full);
        }
        acc
    }

    /// Substitutes a value for variable `i` and removes it.
    pub fn specialize(&self, i: usize, value: &R::Elem) -> Self {
        let ring = &self.ring;
        let deg = self.degree_in(i) as usize;
        let mut pows = Vec::with_capacity(deg + 1);
        pows.push(ring.one());
        for k in 1..=deg {
            pows.push(ring.mul(&pows[k - 1], value));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.without(i), ring.mul(c, &pows[m.0[i] as usize])))
            .collect();
        Self::from_terms(ring.clone(), self.vars.without(i), terms)
    }

    /// Full evaluation.
    pub fn eval(&self, point: &[R::Elem]) -> R::Elem {
        let ring = self.ring.clone();
        self.eval_hom(&ring, point, |c| c.clone())
    }

    /// Evaluation in another ring through a coefficient map.
    pub fn eval_hom<S: Ring>(
        &self,
        target: &S,
        point: &[S::Elem],
        coef: impl Fn(&R::Elem) -> S::Elem,
    ) -> S::Elem {
        assert_eq!(point.len(), self.nvars(), "point has wrong dimension");
        let powers = power_table(target, point, &self.max_degrees());
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut t = coef(c);
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = target.mul(&t, &powers[v][e as usize]);
                }
            }
            target.add_assign(&mut acc, &t);
        }
        acc
    }

    pub fn max_degrees(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.nvars()];
        for (m, _) in &self.terms {
            for (v, &e) in m.0.iter().enumerate() {
                d[v] = d[v].max(e as u32);
            }
        }
        d
    }

    pub fn map_coeffs<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> MPoly<S> {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(c)))
            .filter(|(_, c)| !target.is_zero(c))
            .collect();
        MPoly { ring: target, vars: self.vars.clone(), terms }
    }

    /// Same terms over a renamed variable list of equal length.
    pub fn with_renamed_vars(&self, vars: Vars) -> Self {
        assert_eq!(vars.len(), self.nvars());
        MPoly { ring: self.ring.clone(), vars, terms: self.terms.clone() }
    }
}

pub(crate) fn power_table<S: Ring>(ring: &S, point: &[S::Elem], degs: &[u32]) -> Vec<Vec<S::Elem>> {
    point
        .iter()
        .zip(degs)
        .map(|(x, &d)| {
            let mut v = Vec::with_capacity(d as usize + 1);
            v.push(ring.one());
            for k in 1..=d as usize {
                let next = ring.mul(&v[k - 1], x);
                v.push(next);
            }
            v
        })
        .collect()
}

impl MPoly<Integers> {
    /// Content (gcd of coefficients, signed so the primitive part has a
    /// positive leading coefficient) and primitive part. Zero gives `(0, 0)`.
    pub fn content_primitive(&self) -> (BigInt, Self) {
        if self.is_zero() {
            return (BigInt::zero(), self.clone());
        }
        let mut g = crate::arith::gcd_all(self.terms.iter().map(|(_, c)| c));
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        let prim = if g.is_one() {
            self.clone()
        } else {
            let terms = self.terms.iter().map(|(m, c)| (m.clone(), c / &g)).collect();
            MPoly { ring: Integers, vars: self.vars.clone(), terms }
        };
        (g, prim)
    }

    pub fn primitive(&self) -> Self {
        self.content_primitive().1
    }

    pub fn to_rational(&self) -> MPoly<Rationals> {
        self.map_coeffs(Rationals, |c| BigRational::from_integer(c.clone()))
    }
}

impl MPoly<Rationals> {
    /// Writes `self = scale * prim` with `prim` primitive over the integers
    /// with positive leading coefficient.
    pub fn to_integer_primitive(&self) -> (BigRational, MPoly<Integers>) {
        if self.is_zero() {
            return (BigRational::zero(), MPoly::zero(Integers, self.vars.clone()));
        }
        let den = crate::arith::lcm_all(self.terms.iter().map(|(_, c)| c.denom()));
        let ints: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), (c * BigRational::from_integer(den.clone())).to_integer()))
            .collect();
        let p = MPoly { ring: Integers, vars: self.vars.clone(), terms: ints };
        let (g, prim) = p.content_primitive();
        (BigRational::new(g, den), prim)
    }

    /// Common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        crate::arith::lcm_all(self.terms.iter().map(|(_, c)| c.denom()))
    }
}

macro_rules! impl_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<'a, R: Ring> $tr<&'a MPoly<R>> for &'a MPoly<R> {
            type Output = MPoly<R>;
            fn $m(self, rhs: &'a MPoly<R>) -> MPoly<R> {
                assert!(self.ring == rhs.ring, "coefficient domains differ");
                assert!(self.vars == rhs.vars, "variable lists differ");
                self.$f(rhs)
            }
        }
        impl<R: Ring> $tr<MPoly<R>> for MPoly<R> {
            type Output = MPoly<R>;
            fn $m(self, rhs: MPoly<R>) -> MPoly<R> {
                (&self).$m(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, add_poly);
impl_binop!(Sub, sub, sub_poly);
impl_binop!(Mul, mul, mul_poly);

impl<R: Ring> Neg for &MPoly<R> {
    type Output = MPoly<R>;
    fn neg(self) -> MPoly<R> {
        self.neg_poly()
    }
}

impl<R: Ring> Neg for MPoly<R> {
    type Output = MPoly<R>;
    fn neg(self) -> MPoly<R> {
        self.neg_poly()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz(s: &str, vars: &[&str]) -> MPoly<Integers> {
        crate::exactpoly::parse_int_poly(s, &Vars::new(vars)).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let v = ["t"];
        let a = zz("t+1", &v);
        let b = zz("t-1", &v);
        assert_eq!(&a * &b, zz("t^2-1", &v));
        assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        let c = zz("t^2+t+1", &v);
        assert_eq!(c.exact_div(&b), Err(PolyError::InexactDivision));
    }

    #[test]
    fn coeff_extraction() {
        let v = ["x2", "t"];
        let p = zz("x2*t^2 + 3*t + 5", &v);
        assert_eq!(p.coeff_in("t", 2).unwrap().to_string(), "x2");
        let x = zz("t^4+t^3", &["t"]);
        assert_eq!(x.pow(3).coeff_in("t", 12).unwrap().to_string(), "1");
        assert!(p.coeff_in("y", 1).is_err());
    }

    #[test]
    fn substitution() {
        let v = ["t"];
        let p = zz("t^2+1", &v);
        let r = zz("t-1", &v);
        assert_eq!(p.substitute("t", &r).unwrap(), zz("t^2-2*t+2", &v));
    }

    #[test]
    fn content_and_sign() {
        let v = ["t"];
        let (c, p) = zz("6*t^2+9*t", &v).content_primitive();
        assert_eq!((c, p.to_string()), (BigInt::from(3), "2*t^2 + 3*t".to_string()));
        let (c, p) = zz("-4*t-8", &v).content_primitive();
        assert_eq!((c, p.to_string()), (BigInt::from(-4), "t + 2".to_string()));
        let (c, p) = MPoly::zero(Integers, Vars::new(&v)).content_primitive();
        assert!(c.is_zero() && p.is_zero());
    }

    #[test]
    fn ring_op_rejects_mismatch() {
        let a = zz("t+1", &["t"]);
        let b = zz("u+1", &["u"]);
        assert!(matches!(a.ring_op(&b, RingOp::Add), Err(PolyError::VariableMismatch(..))));
    }
}
