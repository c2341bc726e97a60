//! Templates and coefficient-matching systems for
//! `X³ + A·X + B = Q·Y²`, signature families, changes of variable, and the
//! symbolic Case I derivation.

pub mod appendix;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::elim::PolySystem;
use crate::exactpoly::dense::{self, Dense};
use crate::exactpoly::{parse_poly, MPoly, PolyError, Vars};
use crate::ring::{Integers, Rationals, Ring};

pub use appendix::{appendix_case1_derivation, Agreement, DerivationTrace, TraceStep, TraceValue};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BuilderError {
    #[error("inconsistent signature {0}: need 3x = q + 2y")]
    InconsistentSignature(Signature),
    #[error("bad signature {0:?}: expected five comma-separated degrees a,b,q,x,y")]
    SignatureSyntax(String),
    #[error("degree of {0} must be positive")]
    DegreeTooSmall(&'static str),
    #[error("multipliers violate sX^3 = sA*sX = sB = sQ*sY^2")]
    InconsistentMultipliers,
    #[error("{0} is not a polynomial in t alone")]
    NotUnivariate(&'static str),
    #[error("3*deg X - deg Q = {0} is odd")]
    OddDegree(usize),
    #[error("leading coefficient of X^3/Q is not a square")]
    LeadingNotSquare,
    #[error("cannot normalize: {0}")]
    Normalization(&'static str),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Degrees `(a, b, q, x, y)` of `A, B, Q, X, Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub a: u32,
    pub b: u32,
    pub q: u32,
    pub x: u32,
    pub y: u32,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.a, self.b, self.q, self.x, self.y)
    }
}

impl Signature {
    pub fn new(a: u32, b: u32, q: u32, x: u32, y: u32) -> Result<Self, BuilderError> {
        let s = Signature { a, b, q, x, y };
        if 3 * x != q + 2 * y {
            return Err(BuilderError::InconsistentSignature(s));
        }
        Ok(s)
    }

    /// Number of free coefficients after normalization.
    pub fn unknown_count(&self) -> u32 {
        (self.x - 1) + (self.y - 1) + self.q + (self.a + 1) + (self.b + 1)
    }

    /// At least as many unknowns as equations.
    pub fn is_admissible(&self) -> bool {
        self.a + self.b + self.q + self.x + self.y >= 3 * self.x
    }

    /// The four base cases.
    pub fn base_cases() -> [Signature; 4] {
        [
            Signature { a: 0, b: 1, q: 2, x: 4, y: 5 },
            Signature { a: 1, b: 1, q: 2, x: 6, y: 8 },
            Signature { a: 1, b: 2, q: 2, x: 8, y: 11 },
            Signature { a: 2, b: 3, q: 2, x: 12, y: 17 },
        ]
    }

    /// `x / max(a/2, b/3)`, the limiting ρ of the family; `None` when A and B
    /// are both constant.
    pub fn rho(&self) -> Option<BigRational> {
        let ha = BigRational::new(self.a.into(), 2.into());
        let hb = BigRational::new(self.b.into(), 3.into());
        let m = if ha > hb { ha } else { hb };
        (!m.is_zero()).then(|| BigRational::from_integer(self.x.into()) / m)
    }
}

impl FromStr for Signature {
    type Err = BuilderError;

    fn from_str(s: &str) -> Result<Self, BuilderError> {
        let parts: Vec<u32> = s
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| BuilderError::SignatureSyntax(s.to_string()))?;
        match parts[..] {
            [a, b, q, x, y] => Signature::new(a, b, q, x, y),
            _ => Err(BuilderError::SignatureSyntax(s.to_string())),
        }
    }
}

/// How the `t^(x-1)` coefficient of X is fixed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum XNormalization {
    #[default]
    One,
    /// The degenerate alternative where that coefficient vanishes.
    Zero,
}

/// Symbolic X, A, B, Q, Y with unknown coefficients, over the unknowns
/// followed by `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpzTemplate {
    pub sig: Signature,
    pub x_norm: XNormalization,
    vars: Vars,
    pub x: MPoly<Integers>,
    pub a: MPoly<Integers>,
    pub b: MPoly<Integers>,
    pub q: MPoly<Integers>,
    pub y: MPoly<Integers>,
}

pub fn make_template(sig: Signature) -> Result<EpzTemplate, BuilderError> {
    make_template_with(sig, XNormalization::One)
}

pub fn make_template_with(sig: Signature, x_norm: XNormalization) -> Result<EpzTemplate, BuilderError> {
    Signature::new(sig.a, sig.b, sig.q, sig.x, sig.y)?;
    if sig.x == 0 {
        return Err(BuilderError::DegreeTooSmall("X"));
    }
    if sig.y == 0 {
        return Err(BuilderError::DegreeTooSmall("Y"));
    }
    let mut names: Vec<String> = Vec::new();
    names.extend((0..sig.x - 1).map(|i| format!("x{i}")));
    names.extend((0..sig.y - 1).map(|i| format!("y{i}")));
    names.extend((0..sig.q).map(|i| format!("q{i}")));
    names.extend((0..=sig.a).map(|i| format!("a{i}")));
    names.extend((0..=sig.b).map(|i| format!("b{i}")));
    names.push("t".to_string());
    let vars = Vars::new(&names);
    let t = MPoly::var(Integers, vars.clone(), "t")?;
    let term = |letter: &str, i: u32| -> Result<MPoly<Integers>, PolyError> {
        Ok(MPoly::var(Integers, vars.clone(), &format!("{letter}{i}"))?.mul_poly(&t.pow(i)))
    };
    let sum = |letter: &str, range: std::ops::Range<u32>| -> Result<MPoly<Integers>, PolyError> {
        let mut acc = MPoly::zero(Integers, vars.clone());
        for i in range {
            acc = acc.add_poly(&term(letter, i)?);
        }
        Ok(acc)
    };
    let mut x = t.pow(sig.x).add_poly(&sum("x", 0..sig.x - 1)?);
    if x_norm == XNormalization::One {
        x = x.add_poly(&t.pow(sig.x - 1));
    }
    let y = t.pow(sig.y).add_poly(&sum("y", 0..sig.y - 1)?);
    let q = t.pow(sig.q).add_poly(&sum("q", 0..sig.q)?);
    let a = sum("a", 0..sig.a + 1)?;
    let b = sum("b", 0..sig.b + 1)?;
    Ok(EpzTemplate { sig, x_norm, vars, x, a, b, q, y })
}

impl EpzTemplate {
    /// Unknowns followed by `t`.
    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn unknowns(&self) -> Vars {
        self.vars.without(self.vars.len() - 1)
    }

    /// `X³ + A·X + B − Q·Y²`.
    pub fn residual(&self) -> MPoly<Integers> {
        self.x
            .pow(3)
            .add_poly(&self.a.mul_poly(&self.x))
            .add_poly(&self.b)
            .sub_poly(&self.q.mul_poly(&self.y.pow(2)))
    }

    /// The concrete family at the given unknown values.
    pub fn instantiate<F: Ring>(&self, ring: &F, values: &[(String, F::Elem)]) -> Result<EpzFamily<F>, BuilderError> {
        let unknowns = self.unknowns();
        let mut point = Vec::with_capacity(unknowns.len());
        for n in unknowns.names() {
            let v = values
                .iter()
                .find(|(m, _)| m == n)
                .map(|(_, v)| v.clone())
                .ok_or(PolyError::UnknownVariable(n.clone()))?;
            point.push(v);
        }
        let ti = self.vars.len() - 1;
        let inst = |p: &MPoly<Integers>| -> MPoly<F> {
            let coeffs: Dense<F> = p
                .to_univariate(ti)
                .iter()
                .map(|c| c.eval_hom(ring, &point, |z| ring.from_int(z)))
                .collect();
            MPoly::from_dense(ring.clone(), Vars::new(&["t"]), 0, &dense::trimmed(ring, coeffs))
        };
        Ok(EpzFamily::new(inst(&self.x), inst(&self.a), inst(&self.b), inst(&self.q), inst(&self.y))?)
    }
}

/// The coefficient equations: `t^0 … t^(3x−1)` of the residual, over the
/// unknowns.
pub fn equate_coefficients(tpl: &EpzTemplate) -> Result<PolySystem, crate::elim::ElimError> {
    let r = tpl.residual();
    let ti = tpl.vars.len() - 1;
    let coeffs = r.to_univariate(ti);
    let eqs: Vec<MPoly<Integers>> = (0..3 * tpl.sig.x as usize).filter_map(|d| coeffs.get(d).cloned()).collect();
    PolySystem::new(tpl.unknowns(), eqs)
}

/// Concrete `X, A, B, Q, Y` in `t` over a coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub struct EpzFamily<R: Ring> {
    pub sig: Signature,
    pub x: MPoly<R>,
    pub a: MPoly<R>,
    pub b: MPoly<R>,
    pub q: MPoly<R>,
    pub y: MPoly<R>,
}

fn t_vars() -> Vars {
    Vars::new(&["t"])
}

fn deg_t<R: Ring>(p: &MPoly<R>) -> u32 {
    p.degree_in(0)
}

impl<R: Ring> EpzFamily<R> {
    /// Builds a family from polynomials in `t`; the signature is read off
    /// the degrees and is not required to be consistent.
    pub fn new(x: MPoly<R>, a: MPoly<R>, b: MPoly<R>, q: MPoly<R>, y: MPoly<R>) -> Result<Self, PolyError> {
        let v = t_vars();
        let x = x.embed(&v)?;
        let a = a.embed(&v)?;
        let b = b.embed(&v)?;
        let q = q.embed(&v)?;
        let y = y.embed(&v)?;
        let sig = Signature { a: deg_t(&a), b: deg_t(&b), q: deg_t(&q), x: deg_t(&x), y: deg_t(&y) };
        Ok(EpzFamily { sig, x, a, b, q, y })
    }

    pub fn ring(&self) -> &R {
        self.x.ring()
    }

    /// `X³ + A·X + B − Q·Y²`.
    pub fn residual(&self) -> MPoly<R> {
        self.x
            .pow(3)
            .add_poly(&self.a.mul_poly(&self.x))
            .add_poly(&self.b)
            .sub_poly(&self.q.mul_poly(&self.y.pow(2)))
    }

    pub fn is_identity(&self) -> bool {
        self.residual().is_zero()
    }

    pub fn dense(&self) -> [Dense<R>; 5] {
        let d = |p: &MPoly<R>| p.to_dense(0).expect("univariate in t");
        [d(&self.x), d(&self.a), d(&self.b), d(&self.q), d(&self.y)]
    }

    fn from_dense(ring: &R, parts: [Dense<R>; 5]) -> Self {
        let [x, a, b, q, y] = parts.map(|p| MPoly::from_dense(ring.clone(), t_vars(), 0, &dense::trimmed(ring, p)));
        EpzFamily::new(x, a, b, q, y).expect("polynomials in t")
    }

    /// Text form, one line per letter.
    pub fn display(&self) -> String {
        format!("X = {}\nA = {}\nB = {}\nQ = {}\nY = {}", self.x, self.a, self.b, self.q, self.y)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "signature": [self.sig.a, self.sig.b, self.sig.q, self.sig.x, self.sig.y],
            "X": self.x.to_string(),
            "A": self.a.to_string(),
            "B": self.b.to_string(),
            "Q": self.q.to_string(),
            "Y": self.y.to_string(),
        })
    }
}

impl EpzFamily<Rationals> {
    /// Parses `X, A, B, Q, Y` written in `t`.
    pub fn parse(x: &str, a: &str, b: &str, q: &str, y: &str) -> Result<Self, PolyError> {
        let v = t_vars();
        EpzFamily::new(parse_poly(x, &v)?, parse_poly(a, &v)?, parse_poly(b, &v)?, parse_poly(q, &v)?, parse_poly(y, &v)?)
    }

    pub fn from_json(j: &serde_json::Value) -> Result<Self, PolyError> {
        let get = |k: &str| -> Result<String, PolyError> {
            j.get(k)
                .and_then(|v| v.as_str())
                .map(str::to_string)
                .ok_or(PolyError::Parse { pos: 0, msg: format!("missing field {k}") })
        };
        Self::parse(&get("X")?, &get("A")?, &get("B")?, &get("Q")?, &get("Y")?)
    }
}

/// One row of the infinite signature families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRow {
    pub row: usize,
    pub sig: Signature,
    pub rho: Option<BigRational>,
}

/// The four families of signatures with as many equations as unknowns,
/// indexed by `m`.
pub fn signature_families(m: u32) -> Vec<FamilyRow> {
    let rows = [
        (2 * m, 3 * m, 10 * m + 2, 15 * m + 2),
        (2 * m, 3 * m + 1, 10 * m + 4, 15 * m + 5),
        (2 * m + 1, 3 * m + 1, 10 * m + 6, 15 * m + 8),
        (2 * m + 1, 3 * m + 2, 10 * m + 8, 15 * m + 11),
    ];
    rows.iter()
        .enumerate()
        .map(|(i, &(a, b, x, y))| {
            let sig = Signature { a, b, q: 2, x, y };
            FamilyRow { row: i + 1, sig, rho: sig.rho() }
        })
        .collect()
}

/// A change of variable in `t`.
#[derive(Clone, Debug, PartialEq)]
pub enum Moebius<E> {
    /// `t ↦ α·t + β`.
    Affine { alpha: E, beta: E },
    /// `t ↦ 1/t`, clearing denominators with the signature degrees.
    Inversion,
}

/// Constant multipliers applied to `(X, Y, Q, A, B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multipliers<E> {
    pub sx: E,
    pub sy: E,
    pub sq: E,
    pub sa: E,
    pub sb: E,
}

impl<E: Clone> Multipliers<E> {
    pub fn identity<R: Ring<Elem = E>>(ring: &R) -> Self {
        let one = ring.one();
        Multipliers { sx: one.clone(), sy: one.clone(), sq: one.clone(), sa: one.clone(), sb: one }
    }

    /// `(sX, sY, sQ, sA, sB) = (s, c·s, …)` style constructor from a scale
    /// for X and a multiplier for Y, with A, B, Q forced by consistency.
    pub fn from_x_y<R: Ring<Elem = E>>(ring: &R, sx: E, sy: E) -> Option<Self> {
        let sx2 = ring.mul(&sx, &sx);
        let sx3 = ring.mul(&sx2, &sx);
        let sq = ring.div(&sx3, &ring.mul(&sy, &sy))?;
        Some(Multipliers { sa: sx2, sb: sx3, sx, sy, sq })
    }

    pub fn is_consistent<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        let x3 = ring.mul(&ring.mul(&self.sx, &self.sx), &self.sx);
        let ax = ring.mul(&self.sa, &self.sx);
        let qy2 = ring.mul(&self.sq, &ring.mul(&self.sy, &self.sy));
        let eq = |a: &E, b: &E| ring.is_zero(&ring.sub(a, b));
        !ring.is_zero(&x3) && eq(&x3, &ax) && eq(&ax, &self.sb) && eq(&self.sb, &qy2)
    }
}

/// Reverses a dense polynomial padded to `deg`: `t^deg·p(1/t)`.
fn reverse_padded<R: Ring>(ring: &R, p: &Dense<R>, deg: usize) -> Dense<R> {
    let mut v = p.clone();
    v.resize(deg + 1, ring.zero());
    v.reverse();
    dense::trimmed(ring, v)
}

/// Applies a change of variable followed by constant multipliers.
pub fn apply_moebius<R: Ring>(
    fam: &EpzFamily<R>,
    map: &Moebius<R::Elem>,
    mult: &Multipliers<R::Elem>,
) -> Result<EpzFamily<R>, BuilderError> {
    let ring = fam.ring().clone();
    if !mult.is_consistent(&ring) {
        return Err(BuilderError::InconsistentMultipliers);
    }
    let [x, a, b, q, y] = fam.dense();
    let moved: [Dense<R>; 5] = match map {
        Moebius::Affine { alpha, beta } => {
            let g = vec![beta.clone(), alpha.clone()];
            [x, a, b, q, y].map(|p| dense::compose(&ring, &p, &g))
        }
        Moebius::Inversion => {
            let dx = fam.sig.x as usize;
            let dq = fam.sig.q as usize;
            let dy = fam.sig.y as usize;
            if fam.sig.a as usize > 2 * dx || fam.sig.b as usize > 3 * dx {
                return Err(BuilderError::Normalization("deg A > 2 deg X or deg B > 3 deg X"));
            }
            [
                reverse_padded(&ring, &x, dx),
                reverse_padded(&ring, &a, 2 * dx),
                reverse_padded(&ring, &b, 3 * dx),
                reverse_padded(&ring, &q, dq),
                reverse_padded(&ring, &y, dy),
            ]
        }
    };
    let [x, a, b, q, y] = moved;
    let out = EpzFamily::from_dense(
        &ring,
        [
            dense::scale(&ring, &x, &mult.sx),
            dense::scale(&ring, &a, &mult.sa),
            dense::scale(&ring, &b, &mult.sb),
            dense::scale(&ring, &q, &mult.sq),
            dense::scale(&ring, &y, &mult.sy),
        ],
    );
    debug_assert_eq!(fam.is_identity(), out.is_identity());
    Ok(out)
}

/// Brings a family into template form: translate so Y has no `t^(y−1)`
/// term, rescale `t` so X's `t^(x−1)` coefficient equals its leading one,
/// then make X, Y, Q monic. Returns the normalized family and the template
/// unknowns it realizes.
pub fn normalize_to_template<R: Ring>(
    fam: &EpzFamily<R>,
) -> Result<(EpzFamily<R>, Vec<(String, R::Elem)>), BuilderError> {
    let ring = fam.ring().clone();
    let sig = fam.sig;
    let [_, _, _, _, y] = fam.dense();
    let ny = sig.y as usize;
    if ny == 0 {
        return Err(BuilderError::DegreeTooSmall("Y"));
    }
    let n = ring.from_i64(ny as i64);
    let shift = ring.neg(
        &ring
            .div(&y[ny - 1], &ring.mul(&n, &y[ny]))
            .ok_or(BuilderError::Normalization("cannot divide by deg Y times lc(Y)"))?,
    );
    let one = ring.one();
    let translated = apply_moebius(
        fam,
        &Moebius::Affine { alpha: one.clone(), beta: shift },
        &Multipliers::identity(&ring),
    )?;
    let [x, ..] = translated.dense();
    let nx = sig.x as usize;
    if nx == 0 {
        return Err(BuilderError::DegreeTooSmall("X"));
    }
    let lx = x[nx].clone();
    if ring.is_zero(&x[nx - 1]) {
        return Err(BuilderError::Normalization("t^(x-1) coefficient of X vanishes"));
    }
    let lambda = ring.div(&x[nx - 1], &lx).ok_or(BuilderError::Normalization("lc(X) not invertible"))?;
    let [_, _, _, q, y] = translated.dense();
    let lq = q[sig.q as usize].clone();
    let ly = y[ny].clone();
    let inv = |c: &R::Elem, e: u32| -> Result<R::Elem, BuilderError> {
        let d = ring.mul(c, &ring.pow(&lambda, e as u64));
        ring.div(&ring.one(), &d).ok_or(BuilderError::Normalization("leading coefficient not invertible"))
    };
    let sx = inv(&lx, sig.x)?;
    let mult = Multipliers {
        sa: ring.mul(&sx, &sx),
        sb: ring.mul(&ring.mul(&sx, &sx), &sx),
        sq: inv(&lq, sig.q)?,
        sy: inv(&ly, sig.y)?,
        sx,
    };
    let scaled = apply_moebius(
        &translated,
        &Moebius::Affine { alpha: lambda, beta: ring.zero() },
        &mult,
    )?;
    let [x, a, b, q, y] = scaled.dense();
    let mut values = Vec::new();
    let coeff = |p: &Dense<R>, i: usize| p.get(i).cloned().unwrap_or_else(|| ring.zero());
    for i in 0..nx - 1 {
        values.push((format!("x{i}"), coeff(&x, i)));
    }
    for i in 0..ny - 1 {
        values.push((format!("y{i}"), coeff(&y, i)));
    }
    for i in 0..sig.q as usize {
        values.push((format!("q{i}"), coeff(&q, i)));
    }
    for i in 0..=sig.a as usize {
        values.push((format!("a{i}"), coeff(&a, i)));
    }
    for i in 0..=sig.b as usize {
        values.push((format!("b{i}"), coeff(&b, i)));
    }
    Ok((scaled, values))
}

/// Polynomial part of the Laurent expansion of `(X³/Q)^(1/2)` at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct SqrtTail<R: Ring> {
    pub y: Dense<R>,
    /// `(degree, coefficient)` of `X³ − Q·Y²` for every degree above the
    /// allowed one, highest first: these must vanish.
    pub conditions: Vec<(usize, R::Elem)>,
    pub residual: Dense<R>,
}

/// Chooses Y so that `X³ − Q·Y²` has degree below `deg Y + deg Q`, and
/// reports the remaining coefficients above `allowed_degree` as conditions.
/// The leading coefficient of Y is the ring's square root of
/// `lc(X)³/lc(Q)` (1 when that is 1).
pub fn series_sqrt_tail<R: Ring>(
    ring: &R,
    x: &Dense<R>,
    q: &Dense<R>,
    allowed_degree: usize,
) -> Result<SqrtTail<R>, BuilderError> {
    let f = dense::pow(ring, x, 3);
    let df = dense::degree::<R>(&f).ok_or(BuilderError::DegreeTooSmall("X"))?;
    let dq = dense::degree::<R>(q).ok_or(BuilderError::DegreeTooSmall("Q"))?;
    if df < dq || (df - dq) % 2 == 1 {
        return Err(BuilderError::OddDegree(df.saturating_sub(dq)));
    }
    let n = (df - dq) / 2;
    let lead = ring.div(&f[df], &q[dq]).ok_or(BuilderError::LeadingNotSquare)?;
    let yn = if ring.is_one(&lead) { ring.one() } else { ring.sqrt(&lead).ok_or(BuilderError::LeadingNotSquare)? };
    let denom = ring.mul(&ring.from_i64(2), &ring.mul(&q[dq], &yn));
    let mut y = vec![ring.zero(); n + 1];
    y[n] = yn;
    for k in 1..=n {
        let deg = df - k;
        // coefficient of t^deg in Q·Y² with y[n-k] still zero
        let mut acc = ring.zero();
        for (i, qi) in q.iter().enumerate() {
            if i > deg || ring.is_zero(qi) {
                continue;
            }
            let rest = deg - i;
            for j1 in (n - k + 1)..=n {
                if j1 > rest {
                    break;
                }
                let j2 = rest - j1;
                if j2 <= n && j2 > n - k {
                    let t = ring.mul(qi, &ring.mul(&y[j1], &y[j2]));
                    acc = ring.add(&acc, &t);
                }
            }
        }
        let diff = ring.sub(&f[deg], &acc);
        y[n - k] = ring.div(&diff, &denom).ok_or(BuilderError::LeadingNotSquare)?;
    }
    let residual = dense::sub(ring, &f, &dense::mul(ring, q, &dense::mul(ring, &y, &y)));
    let conditions = (allowed_degree + 1..residual.len())
        .rev()
        .map(|d| (d, residual[d].clone()))
        .collect();
    Ok(SqrtTail { y, conditions, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::parse_int_poly;

    #[test]
    fn case1_template_shape() {
        let tpl = make_template(Signature::new(0, 1, 2, 4, 5).unwrap()).unwrap();
        assert_eq!(tpl.x.to_string(), "x0 + x1*t + x2*t^2 + t^4 + t^3");
        assert_eq!(tpl.y.to_string(), "y0 + y1*t + y2*t^2 + y3*t^3 + t^5");
        assert_eq!(tpl.q.to_string(), "q0 + q1*t + t^2");
        assert_eq!(tpl.a.to_string(), "a0");
        assert_eq!(tpl.b.to_string(), "b0 + b1*t");
        assert_eq!(tpl.unknowns().len(), 12);
    }

    #[test]
    fn equation_counts() {
        for sig in Signature::base_cases() {
            let tpl = make_template(sig).unwrap();
            assert_eq!(tpl.unknowns().len() as u32, 3 * sig.x);
            assert_eq!(sig.unknown_count(), 3 * sig.x);
            let sys = equate_coefficients(&tpl).unwrap();
            assert_eq!(sys.len() as u32, 3 * sig.x, "{sig}");
            let ti = tpl.vars().len() - 1;
            assert!(tpl.residual().coeff_at(ti, 3 * sig.x).is_zero());
        }
        assert!(matches!(Signature::new(1, 1, 2, 4, 4), Err(BuilderError::InconsistentSignature(_))));
        assert_eq!("1,1,2,6,8".parse::<Signature>().unwrap().unknown_count(), 18);
        assert!("1,2,3".parse::<Signature>().is_err());
    }

    #[test]
    fn families() {
        let r1 = signature_families(1);
        assert_eq!(r1[0].sig, Signature { a: 2, b: 3, q: 2, x: 12, y: 17 });
        assert_eq!(r1[0].rho, Some(BigRational::from_integer(12.into())));
        assert_eq!(r1[1].rho, Some(BigRational::new(21.into(), 2.into())));
        for m in 0..6 {
            for r in signature_families(m) {
                let s = r.sig;
                assert_eq!(s.a + s.b + s.q + s.x + s.y, 3 * s.x);
            }
        }
        let r0 = signature_families(0);
        assert_eq!(r0[0].rho, None);
        assert_eq!(&r0[1..].iter().map(|r| r.sig).collect::<Vec<_>>()[..], &Signature::base_cases()[..3]);
    }

    fn letter() -> EpzFamily<Rationals> {
        EpzFamily::parse(
            "324t^4-360t^3+216t^2-84t+15",
            "33",
            "-18(8t-1)",
            "9t^2-10t+3",
            "36(54t^5-60t^4+45t^3-21t^2+6t-1)",
        )
        .unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn letter_rescale() {
        let fam = letter();
        assert!(fam.is_identity());
        let m = Multipliers { sx: q(2, 1), sy: q(2, 1), sq: q(2, 1), sa: q(4, 1), sb: q(8, 1) };
        let id = Moebius::Affine { alpha: q(1, 1), beta: q(0, 1) };
        let out = apply_moebius(&fam, &id, &m).unwrap();
        assert_eq!(out.a.to_string(), "132");
        assert_eq!(out.x.to_string(), "648*t^4 - 720*t^3 + 432*t^2 - 168*t + 30");
        assert!(out.is_identity());
        let same = apply_moebius(&fam, &id, &Multipliers::identity(&Rationals)).unwrap();
        assert_eq!(same, fam);
        let bad = Multipliers { sx: q(2, 1), sy: q(2, 1), sq: q(2, 1), sa: q(4, 1), sb: q(9, 1) };
        assert!(matches!(apply_moebius(&fam, &id, &bad), Err(BuilderError::InconsistentMultipliers)));
    }

    #[test]
    fn inversion_preserves_identity() {
        let fam = letter();
        let inv = apply_moebius(&fam, &Moebius::Inversion, &Multipliers::identity(&Rationals)).unwrap();
        assert!(inv.is_identity());
        assert_eq!(inv.x.to_string(), "15*t^4 - 84*t^3 + 216*t^2 - 360*t + 324");
        let twice = apply_moebius(&inv, &Moebius::Inversion, &Multipliers::identity(&Rationals)).unwrap();
        assert_eq!(twice, fam);
    }

    #[test]
    fn normalization_satisfies_template() {
        let fam = letter();
        let (norm, values) = normalize_to_template(&fam).unwrap();
        assert!(norm.is_identity());
        let tpl = make_template(norm.sig).unwrap();
        let sys = equate_coefficients(&tpl).unwrap();
        let point: Vec<BigRational> = tpl
            .unknowns()
            .names()
            .iter()
            .map(|n| values.iter().find(|(m, _)| m == n).unwrap().1.clone())
            .collect();
        for e in sys.eqs() {
            assert!(e.eval_hom(&Rationals, &point, |c| BigRational::from_integer(c.clone())).is_zero());
        }
        let rebuilt = tpl.instantiate(&Rationals, &values).unwrap();
        assert_eq!(rebuilt, norm);
    }

    #[test]
    fn sqrt_tail_exact_square() {
        // X = Q (t + b)^2 with Q = t^2 - c at b = 2, c = 3: Y = Q (t + 2)^3
        let v = Vars::new(&["t"]);
        let qp = parse_int_poly("t^2 - 3", &v).unwrap().to_rational();
        let xp = parse_int_poly("(t^2 - 3)*(t + 2)^2", &v).unwrap().to_rational();
        let tail = series_sqrt_tail(&Rationals, &xp.to_dense(0).unwrap(), &qp.to_dense(0).unwrap(), 0).unwrap();
        let want = parse_int_poly("(t^2 - 3)*(t + 2)^3", &v).unwrap().to_rational().to_dense(0).unwrap();
        assert_eq!(tail.y, want);
        assert!(tail.conditions.iter().all(|(_, c)| c.is_zero()));
        assert!(tail.residual.is_empty());
        let odd = parse_int_poly("t^3", &v).unwrap().to_rational().to_dense(0).unwrap();
        assert!(matches!(
            series_sqrt_tail(&Rationals, &xp.to_dense(0).unwrap(), &odd, 0),
            Err(BuilderError::OddDegree(_))
        ));
    }
}
