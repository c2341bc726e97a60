//! Number fields `Q[z]/(m(z))` in the power basis, their p-adic embeddings
//! and relative quadratic elements `u + v·sqrt(c)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::exactpoly::dense::{self, Dense};
use crate::exactpoly::{self, infer_vars, parse_poly, MPoly, PolyError, Vars};
use crate::ring::{CoefDomain, Field, PrimeField, Rationals, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NfError {
    #[error("minimal polynomial must be monic of positive degree")]
    NotMonic,
    #[error("minimal polynomial is reducible: {0}")]
    Reducible(String),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0}")]
    Poly(#[from] PolyError),
    #[error("expected a polynomial in the single variable {0}")]
    BadElement(String),
}

/// How irreducibility of the defining polynomial is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irreducibility {
    /// Factorization degree patterns modulo small primes leave no room for a factor.
    Certified,
    /// No contradiction found; accepted as an input contract.
    Assumed,
}

#[derive(Debug)]
struct FieldData {
    minpoly: Dense<Rationals>,
    var: String,
    irreducibility: Irreducibility,
}

/// A number field given by a monic irreducible polynomial. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct NumberField(Arc<FieldData>);

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.minpoly == other.0.minpoly
    }
}

/// Element of a number field: rational coordinates in `1, θ, …, θ^(n-1)`.
#[derive(Clone)]
pub struct NFElem {
    field: NumberField,
    coords: Vec<BigRational>,
}

impl PartialEq for NFElem {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.field == other.field
    }
}

impl fmt::Debug for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = arith::lcm_all(self.coords.iter().map(|c| c.denom()));
        let vars = Vars::new(&[self.field.var()]);
        let ints: Vec<BigRational> = self
            .coords
            .iter()
            .map(|c| c * BigRational::from_integer(den.clone()))
            .collect();
        let p = MPoly::from_dense(Rationals, vars, 0, &dense::trimmed(&Rationals, ints));
        if den.is_one() {
            write!(f, "{p}")
        } else if p.len() == 1 {
            write!(f, "{p}/{den}")
        } else {
            write!(f, "({p})/{den}")
        }
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl NumberField {
    /// Field defined by a monic polynomial (coefficients lowest first).
    pub fn new(minpoly: Dense<Rationals>, var: &str) -> Result<Self, NfError> {
        let minpoly = dense::trimmed(&Rationals, minpoly);
        if minpoly.len() < 2 || !minpoly.last().unwrap().is_one() {
            return Err(NfError::NotMonic);
        }
        let irreducibility = check_irreducible(&minpoly)?;
        Ok(NumberField(Arc::new(FieldData { minpoly, var: var.to_string(), irreducibility })))
    }

    /// Parses `z^4-2*z^3-4*z^2+5*z-2` (optionally prefixed by `K:`).
    pub fn parse(s: &str) -> Result<Self, NfError> {
        let body = s.split_once(':').map(|(_, b)| b).unwrap_or(s);
        let vars = infer_vars(body)?;
        if vars.len() != 1 {
            return Err(NfError::BadElement("one variable".into()));
        }
        let p = parse_poly(body, &vars)?;
        Self::new(p.to_dense(0)?, &vars.names()[0])
    }

    pub fn degree(&self) -> usize {
        self.0.minpoly.len() - 1
    }

    pub fn var(&self) -> &str {
        &self.0.var
    }

    pub fn minpoly(&self) -> &Dense<Rationals> {
        &self.0.minpoly
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.0.irreducibility
    }

    pub fn minpoly_string(&self) -> String {
        let vars = Vars::new(&[self.var()]);
        MPoly::from_dense(Rationals, vars, 0, &self.0.minpoly).to_string()
    }

    /// Reduces a polynomial in θ modulo the defining polynomial.
    pub fn from_poly(&self, p: &Dense<Rationals>) -> NFElem {
        let (_, r) = dense::divrem(&Rationals, p, &self.0.minpoly).expect("monic");
        let mut coords = r;
        coords.resize(self.degree(), BigRational::zero());
        NFElem { field: self.clone(), coords }
    }

    pub fn elem(&self, coords: &[BigRational]) -> NFElem {
        self.from_poly(&coords.to_vec())
    }

    pub fn elem_i64(&self, coords: &[i64]) -> NFElem {
        self.from_poly(&coords.iter().map(|&c| q(c)).collect())
    }

    pub fn rational(&self, c: &BigRational) -> NFElem {
        self.from_poly(&vec![c.clone()])
    }

    pub fn int(&self, n: i64) -> NFElem {
        self.rational(&q(n))
    }

    pub fn theta(&self) -> NFElem {
        self.from_poly(&vec![q(0), q(1)])
    }

    /// Parses an element written as a polynomial in the field variable, e.g.
    /// `(9069984*z^3+66428384*z^2+19934816*z-283298787)/2430000`.
    pub fn parse_elem(&self, s: &str) -> Result<NFElem, NfError> {
        let vars = Vars::new(&[self.var()]);
        let p = parse_poly(s, &vars).map_err(|_| NfError::BadElement(self.var().to_string()))?;
        Ok(self.from_poly(&p.to_dense(0)?))
    }

    /// Discriminant of the defining polynomial.
    pub fn poly_discriminant(&self) -> BigRational {
        let m = &self.0.minpoly;
        let n = self.degree();
        let r = dense::subresultant(&Rationals, m, &dense::derivative(&Rationals, m));
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Integer coefficients of the defining polynomial when they are integral.
    pub fn integral_minpoly(&self) -> Option<Vec<BigInt>> {
        self.0.minpoly.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    /// p-adic roots of the defining polynomial, one per simple root mod p.
    pub fn padic_roots(&self, p: u64, k: u32) -> PadicRoots {
        let mut out = PadicRoots { p, k, roots: Vec::new(), excluded: Vec::new(), diagnostics: Vec::new() };
        let Some(mz) = self.integral_minpoly() else {
            out.diagnostics.push("defining polynomial is not integral".into());
            return out;
        };
        let disc = self.poly_discriminant();
        if arith::valuation(disc.numer(), p).is_some_and(|v| v > 0) {
            out.diagnostics.push(format!("{p} divides the discriminant {disc}"));
        }
        let f = PrimeField::new(p);
        let mp: Vec<u64> = mz.iter().map(|c| f.reduce_int(c)).collect();
        let dmp = dense::derivative(&f, &mp);
        for r in exactpoly::roots::roots_mod_p(&f, &mp) {
            if dense::eval(&f, &dmp, &r) == 0 {
                out.excluded.push(r);
                out.diagnostics.push(format!("root {r} mod {p} is repeated"));
                continue;
            }
            let lifted = exactpoly::roots::lift_simple_root(&mz, &BigInt::from(r), p, k).expect("simple root");
            out.roots.push(lifted);
        }
        if out.roots.is_empty() && out.excluded.is_empty() {
            out.diagnostics.push(format!("no degree-1 prime above {p}"));
        }
        out
    }
}

/// Outcome of lifting the roots of a defining polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct PadicRoots {
    pub p: u64,
    pub k: u32,
    pub roots: Vec<BigInt>,
    /// Residues mod p that are repeated roots and were not lifted.
    pub excluded: Vec<u64>,
    pub diagnostics: Vec<String>,
}

/// Distinct-degree factorization pattern of a square-free polynomial mod p:
/// the multiset of irreducible factor degrees.
fn factor_degrees_mod_p(f: &PrimeField, m: &Dense<PrimeField>) -> Vec<usize> {
    let mut degs = Vec::new();
    let mut rest = dense::monic(f, m);
    let x = vec![0, 1];
    let mut xp = x.clone();
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            degs.push(rest.len() - 1);
            break;
        }
        xp = dense::pow_mod(f, &xp, f.p() as u128, &rest);
        let g = dense::gcd_field(f, &rest, &dense::sub(f, &xp, &x));
        if g.len() > 1 {
            for _ in 0..(g.len() - 1) / d {
                degs.push(d);
            }
            rest = dense::exact_quotient(f, &rest, &g).unwrap();
            xp = dense::divrem(f, &xp, &rest).unwrap().1;
        }
    }
    degs
}

fn subset_sums(degs: &[usize], n: usize) -> Vec<bool> {
    let mut can = vec![false; n + 1];
    can[0] = true;
    for &d in degs {
        for s in (d..=n).rev() {
            if can[s - d] {
                can[s] = true;
            }
        }
    }
    can
}

fn check_irreducible(m: &Dense<Rationals>) -> Result<Irreducibility, NfError> {
    let n = m.len() - 1;
    if n == 1 {
        return Ok(Irreducibility::Certified);
    }
    let sf = exactpoly::roots::square_free_decomposition(&Rationals, m);
    if sf.len() != 1 || sf[0].1 != 1 {
        return Err(NfError::Reducible("repeated factor".into()));
    }
    if let Some((r, _)) = exactpoly::roots::rational_roots(m).first() {
        return Err(NfError::Reducible(format!("rational root {r}")));
    }
    let den = arith::lcm_all(m.iter().map(|c| c.denom()));
    let mz: Vec<BigInt> = m.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let mut possible = vec![true; n + 1];
    let mut used = 0;
    for p in arith::primes_from(3) {
        if used >= 12 || p > 2000 {
            break;
        }
        let f = PrimeField::new(p);
        let mp: Vec<u64> = mz.iter().map(|c| f.reduce_int(c)).collect();
        if *mp.last().unwrap() == 0 {
            continue;
        }
        if dense::gcd_field(&f, &mp, &dense::derivative(&f, &mp)).len() > 1 {
            continue;
        }
        used += 1;
        let sums = subset_sums(&factor_degrees_mod_p(&f, &mp), n);
        for d in 1..n {
            possible[d] &= sums[d];
        }
        if (1..n).all(|d| !possible[d]) {
            return Ok(Irreducibility::Certified);
        }
    }
    Ok(Irreducibility::Assumed)
}

impl NFElem {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coords[1..].iter().all(|c| c.is_zero()).then(|| self.coords[0].clone())
    }

    fn poly(&self) -> Dense<Rationals> {
        dense::trimmed(&Rationals, self.coords.clone())
    }

    /// Checked binary operation: errors on elements of different fields.
    pub fn checked(&self, b: &NFElem, op: impl Fn(&NFElem, &NFElem) -> NFElem) -> Result<NFElem, NfError> {
        if self.field != b.field {
            return Err(NfError::FieldMismatch);
        }
        Ok(op(self, b))
    }

    pub fn add(&self, b: &NFElem) -> NFElem {
        let coords = self.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        NFElem { field: self.field.clone(), coords }
    }

    pub fn sub(&self, b: &NFElem) -> NFElem {
        let coords = self.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect();
        NFElem { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> NFElem {
        NFElem { field: self.field.clone(), coords: self.coords.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, b: &NFElem) -> NFElem {
        self.field.from_poly(&dense::mul(&Rationals, &self.poly(), &b.poly()))
    }

    pub fn scale(&self, c: &BigRational) -> NFElem {
        NFElem { field: self.field.clone(), coords: self.coords.iter().map(|x| x * c).collect() }
    }

    /// Inverse by the extended Euclidean algorithm in Q[z].
    pub fn inv(&self) -> Result<NFElem, NfError> {
        if self.is_zero() {
            return Err(NfError::DivisionByZero);
        }
        let qr = Rationals;
        let (mut r0, mut r1) = (self.field.minpoly().clone(), self.poly());
        let (mut s0, mut s1): (Dense<Rationals>, Dense<Rationals>) = (Vec::new(), vec![q(1)]);
        while r1.len() > 1 {
            let (quot, rem) = dense::divrem(&qr, &r0, &r1).unwrap();
            let s2 = dense::sub(&qr, &s0, &dense::mul(&qr, &quot, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant because the defining polynomial is irreducible
        let c = r1[0].clone();
        Ok(self.field.from_poly(&dense::scale(&qr, &s1, &(BigRational::one() / c))))
    }

    pub fn div(&self, b: &NFElem) -> Result<NFElem, NfError> {
        Ok(self.mul(&b.inv()?))
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, e: i64) -> Result<NFElem, NfError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.field.int(1);
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Matrix of multiplication by this element (columns are images of θ^j).
    pub fn mult_matrix(&self) -> Vec<Vec<BigRational>> {
        let n = self.field.degree();
        let mut cols = Vec::with_capacity(n);
        let mut basis = self.field.int(1);
        let theta = self.field.theta();
        for _ in 0..n {
            cols.push(self.mul(&basis).coords);
            basis = basis.mul(&theta);
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Norm: determinant of the multiplication matrix.
    pub fn norm(&self) -> BigRational {
        dense::bareiss_det(&Rationals, self.mult_matrix())
    }

    pub fn trace(&self) -> BigRational {
        let m = self.mult_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    /// Characteristic polynomial `Res_z(m(z), x - a(z))`, monic in x.
    pub fn charpoly(&self) -> Dense<Rationals> {
        let vars = Vars::new(&[self.field.var(), "x__"]);
        let m = MPoly::from_dense(Rationals, vars.clone(), 0, self.field.minpoly());
        let a = MPoly::from_dense(Rationals, vars.clone(), 0, &self.poly());
        let x = MPoly::var_at(Rationals, vars, 1);
        let r = exactpoly::resultant(&m, &x.sub_poly(&a), self.field.var()).expect("positive degree");
        let c = r.to_dense(1).expect("univariate in x");
        dense::monic(&Rationals, &c)
    }

    /// Minimal polynomial over Q (monic), the square-free part of the
    /// characteristic polynomial.
    pub fn minpoly(&self) -> Dense<Rationals> {
        if let Some(c) = self.as_rational() {
            return vec![-c, q(1)];
        }
        let ch = self.charpoly();
        let g = dense::gcd_field(&Rationals, &ch, &dense::derivative(&Rationals, &ch));
        dense::monic(&Rationals, &dense::exact_quotient(&Rationals, &ch, &g).unwrap())
    }

    /// Image in `Z/p^k` under θ ↦ `root`; `None` when a denominator is divisible by p.
    pub fn embed(&self, root: &BigInt, p: u64, k: u32) -> Option<BigInt> {
        let m = BigInt::from(p).pow(k);
        let mut acc = BigInt::zero();
        for c in self.coords.iter().rev() {
            let ci = (c.numer() * arith::mod_inverse(c.denom(), &m)?) % &m;
            acc = (acc * root + ci) % &m;
        }
        Some(arith::modulo(&acc, &m))
    }

    /// Valuation at the degree-one prime corresponding to a p-adic root of
    /// the defining polynomial, computed to precision `k` (capped).
    pub fn valuation_at_root(&self, root: &BigInt, p: u64, k: u32) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let den = arith::lcm_all(self.coords.iter().map(|c| c.denom()));
        let vd = arith::valuation(&den, p).unwrap_or(0) as i64;
        let scaled = self.scale(&BigRational::from_integer(den));
        let v = scaled.embed(root, p, k)?;
        Some(arith::valuation_capped(&v, p, k) as i64 - vd)
    }

    /// Valuation at the unique prime above p with residue degree `f`,
    /// read off the norm.
    pub fn valuation_unique_prime(&self, p: u64, f: u32) -> Option<i64> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let vn = arith::valuation(n.numer(), p).unwrap() as i64 - arith::valuation(n.denom(), p).unwrap() as i64;
        Some(vn / f as i64)
    }

    /// A square root in the field, if one exists.
    pub fn sqrt(&self) -> Option<NFElem> {
        nf_sqrt(self)
    }
}

/// Square root via a completely split prime: square roots in each p-adic
/// embedding, every sign pattern interpolated back and rationally
/// reconstructed, exact check last. Precision doubles until success or a cap.
fn nf_sqrt(a: &NFElem) -> Option<NFElem> {
    if a.is_zero() {
        return Some(a.clone());
    }
    let field = a.field();
    let n = field.degree();
    if let Some(c) = a.as_rational() {
        if let Some(r) = arith::exact_rational_sqrt(&c) {
            return Some(field.rational(&r));
        }
        if n == 1 {
            return None;
        }
    }
    let mz = field.integral_minpoly()?;
    let den = arith::lcm_all(a.coords.iter().map(|c| c.denom()));
    // completely split odd primes not dividing denominators or disc; a
    // non-residue in any embedding rules out a square root
    let disc = field.poly_discriminant();
    let mut prime = None;
    let mut tested = 0;
    for p in arith::primes_from(101) {
        if tested >= 8 || p > 200_000 {
            break;
        }
        if (den.clone() % BigInt::from(p)).is_zero() || (disc.numer() % BigInt::from(p)).is_zero() {
            continue;
        }
        let f = PrimeField::new(p);
        let mp: Vec<u64> = mz.iter().map(|c| f.reduce_int(c)).collect();
        let rs = exactpoly::roots::roots_mod_p(&f, &mp);
        if rs.len() != n {
            continue;
        }
        let vals: Vec<u64> = rs
            .iter()
            .map(|r| a.embed(&BigInt::from(*r), p, 1).unwrap().to_u64().unwrap())
            .collect();
        if vals.contains(&0) {
            continue;
        }
        if vals.iter().any(|v| f.sqrt(v).is_none()) {
            return None;
        }
        tested += 1;
        if prime.is_none() {
            prime = Some((p, rs));
        }
    }
    let (p, rs) = prime?;
    let mut k = 32u32;
    while k <= 4096 {
        let m = BigInt::from(p).pow(k);
        let roots: Vec<BigInt> = rs
            .iter()
            .map(|r| exactpoly::roots::lift_simple_root(&mz, &BigInt::from(*r), p, k).unwrap())
            .collect();
        let sq: Vec<BigInt> = roots
            .iter()
            .map(|r| arith::sqrt_mod_prime_power(&a.embed(r, p, k).unwrap(), p, k).unwrap())
            .collect();
        let ring = crate::ring::ModPrimePower::new(p, k);
        // Vandermonde rows r^j
        let vand: Vec<Vec<BigInt>> = roots
            .iter()
            .map(|r| {
                let mut row = Vec::with_capacity(n);
                let mut acc = BigInt::one();
                for _ in 0..n {
                    row.push(acc.clone());
                    acc = (acc * r) % &m;
                }
                row
            })
            .collect();
        let inv = crate::linalg::invert_mod(&ring, &vand)?;
        for signs in 0u64..(1u64 << (n - 1)) {
            let rhs: Vec<BigInt> = sq
                .iter()
                .enumerate()
                .map(|(i, s)| if i > 0 && (signs >> (i - 1)) & 1 == 1 { arith::modulo(&-s, &m) } else { s.clone() })
                .collect();
            let coords: Option<Vec<BigRational>> = (0..n)
                .map(|i| {
                    let mut acc = BigInt::zero();
                    for j in 0..n {
                        acc += &inv[i][j] * &rhs[j];
                    }
                    arith::rational_reconstruct(&arith::modulo(&acc, &m), &m)
                })
                .collect();
            if let Some(c) = coords {
                let cand = field.elem(&c);
                if cand.mul(&cand) == *a {
                    return Some(cand);
                }
                let neg = cand.neg();
                if neg.mul(&neg) == *a {
                    return Some(neg);
                }
            }
        }
        k *= 2;
    }
    None
}

macro_rules! nf_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&NFElem> for &NFElem {
            type Output = NFElem;
            fn $m(self, rhs: &NFElem) -> NFElem {
                assert!(self.field == rhs.field, "elements of different fields");
                NFElem::$f(self, rhs)
            }
        }
    };
}
nf_binop!(Add, add, add);
nf_binop!(Sub, sub, sub);
nf_binop!(Mul, mul, mul);

impl Ring for NumberField {
    type Elem = NFElem;

    fn domain(&self) -> CoefDomain {
        CoefDomain::NumberField { minpoly: self.minpoly_string() }
    }
    fn zero(&self) -> NFElem {
        self.int(0)
    }
    fn one(&self) -> NFElem {
        self.int(1)
    }
    fn is_zero(&self, a: &NFElem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &NFElem, b: &NFElem) -> NFElem {
        a.add(b)
    }
    fn sub(&self, a: &NFElem, b: &NFElem) -> NFElem {
        a.sub(b)
    }
    fn neg(&self, a: &NFElem) -> NFElem {
        a.neg()
    }
    fn mul(&self, a: &NFElem, b: &NFElem) -> NFElem {
        a.mul(b)
    }
    fn from_int(&self, n: &BigInt) -> NFElem {
        self.rational(&BigRational::from_integer(n.clone()))
    }
    fn from_rational(&self, c: &BigRational) -> Option<NFElem> {
        Some(self.rational(c))
    }
    fn div(&self, a: &NFElem, b: &NFElem) -> Option<NFElem> {
        a.div(b).ok()
    }
    fn is_field(&self) -> bool {
        true
    }
    fn fmt_elem(&self, a: &NFElem) -> String {
        let s = a.to_string();
        if a.as_rational().is_some() && !s.contains('(') && !s.contains(' ') {
            s
        } else {
            format!("({s})")
        }
    }
    fn sqrt(&self, a: &NFElem) -> Option<NFElem> {
        a.sqrt()
    }
    fn is_negative(&self, a: &NFElem) -> Option<bool> {
        // rational elements keep their order; the rest are unordered
        a.as_rational().map(|c| c.is_negative())
    }
}

impl Field for NumberField {}

/// `u + v·sqrt(c)` over a number field, with `c` fixed by context.
#[derive(Clone, Debug, PartialEq)]
pub struct RelQuadElem {
    pub u: NFElem,
    pub v: NFElem,
}

impl RelQuadElem {
    pub fn new(u: NFElem, v: NFElem) -> Self {
        RelQuadElem { u, v }
    }

    pub fn one(field: &NumberField) -> Self {
        RelQuadElem { u: field.int(1), v: field.int(0) }
    }

    pub fn mul(&self, o: &Self, c: &NFElem) -> Self {
        RelQuadElem {
            u: self.u.mul(&o.u).add(&c.mul(&self.v.mul(&o.v))),
            v: self.u.mul(&o.v).add(&self.v.mul(&o.u)),
        }
    }

    pub fn conjugate(&self) -> Self {
        RelQuadElem { u: self.u.clone(), v: self.v.neg() }
    }

    /// `u² − c·v²`.
    pub fn rel_norm(&self, c: &NFElem) -> NFElem {
        self.u.mul(&self.u).sub(&c.mul(&self.v.mul(&self.v)))
    }

    /// Integer power; negative exponents need relative norm 1 (inverse = conjugate).
    pub fn pow(&self, e: i64, c: &NFElem) -> Result<Self, NfError> {
        let base = if e < 0 {
            let nrm = self.rel_norm(c);
            if nrm.is_zero() {
                return Err(NfError::DivisionByZero);
            }
            let inv = nrm.inv()?;
            let cj = self.conjugate();
            RelQuadElem { u: cj.u.mul(&inv), v: cj.v.mul(&inv) }
        } else {
            self.clone()
        };
        let mut acc = Self::one(self.u.field());
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b, c);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul(&b, c);
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic() -> NumberField {
        NumberField::parse("K: z^4-2*z^3-4*z^2+5*z-2").unwrap()
    }

    #[test]
    fn reduction_of_theta_power() {
        let k = quartic();
        let t = k.theta();
        let t4 = t.mul(&t.pow(3).unwrap());
        assert_eq!(t4, k.parse_elem("2*z^3+4*z^2-5*z+2").unwrap());
    }

    #[test]
    fn norms_and_inverse() {
        let k = quartic();
        assert_eq!(k.theta().norm(), q(-2));
        let beta = k.parse_elem("2*z^3+2*z^2-6*z-3").unwrap();
        assert_eq!(beta.norm(), q(3271));
        let inv = beta.inv().unwrap();
        assert_eq!(inv.mul(&beta), k.int(1));
        assert!(k.int(0).inv().is_err());
        let other = NumberField::parse("z^2-2").unwrap();
        assert_eq!(k.theta().checked(&other.theta(), NFElem::mul), Err(NfError::FieldMismatch));
        assert_eq!(k.irreducibility(), Irreducibility::Certified);
    }

    #[test]
    fn minpoly_of_theta_and_rational() {
        let k = quartic();
        assert_eq!(k.theta().minpoly(), *k.minpoly());
        assert_eq!(k.int(3).minpoly(), vec![q(-3), q(1)]);
    }

    #[test]
    fn reducible_rejected() {
        assert!(matches!(NumberField::parse("z^2-4"), Err(NfError::Reducible(_))));
        assert!(matches!(NumberField::parse("2*z^2-3"), Err(NfError::NotMonic)));
    }

    #[test]
    fn padic_roots_examples() {
        let f = NumberField::parse("z^2-2").unwrap();
        let r = f.padic_roots(7, 2);
        assert_eq!(r.roots, vec![BigInt::from(10), BigInt::from(39)]);
        let k = quartic();
        assert!(!k.padic_roots(17, 8).roots.is_empty());
        let r3 = k.padic_roots(3, 8);
        assert!(r3.roots.is_empty());
        assert!(r3.diagnostics.iter().any(|d| d.contains("discriminant")));
        let r11 = k.padic_roots(11, 4);
        assert_eq!(r11.excluded, vec![6]);
    }

    #[test]
    fn square_roots() {
        let k = quartic();
        let s = k.parse_elem("49*z^3+41*z^2-77*z+33").unwrap();
        let sq = s.mul(&s);
        let r = sq.sqrt().unwrap();
        assert!(r == s || r == s.neg());
        assert!(k.theta().sqrt().is_none());
    }
}
