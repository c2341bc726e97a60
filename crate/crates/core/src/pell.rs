//! From a verified family to infinitely many integral points: the Pell conic
//! behind `κQ(t) = s²`, its unit orbit, the resulting points and their ρ.
//! Also the unit-power construction over the Case II quartic field.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::builder::EpzFamily;
use crate::exactpoly::dense;
use crate::known::Case2Data;
use crate::numfield::{NFElem, NumberField, RelQuadElem};
use crate::ring::Rationals;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PellError {
    #[error("degenerate form: {0}")]
    DegenerateForm(String),
    #[error("{0} is a perfect square")]
    SquareD(BigInt),
    #[error("Q must be quadratic with integer coefficients")]
    NotQuadratic,
    #[error("family does not have integer coefficients at t = {0}")]
    NonIntegral(BigInt),
    #[error("no solution of u^2 - {d} s^2 = {n}")]
    NoSeed { d: BigInt, n: BigInt },
    #[error("rho undefined: max(|A|^(1/2), |B|^(1/3)) <= 1 or x <= 1")]
    RhoUndefined,
    #[error("expected deg X = 6 and deg A = 1, found {0} and {1}")]
    Degree(usize, usize),
    #[error("unit power has relative norm {0}")]
    RelativeNorm(String),
}

/// `u² − D·s² = N` with `u = M·t + c`, obtained from `κQ(t) = s²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicForm {
    #[serde(with = "crate::padic::decimal")]
    pub d: BigInt,
    #[serde(with = "crate::padic::decimal")]
    pub n: BigInt,
    /// `M`: admissible `u` are `≡ residue (mod M)`.
    #[serde(with = "crate::padic::decimal")]
    pub modulus: BigInt,
    #[serde(with = "crate::padic::decimal")]
    pub residue: BigInt,
    /// `c` in `u = M·t + c`.
    #[serde(with = "crate::padic::decimal")]
    pub offset: BigInt,
    #[serde(with = "crate::padic::decimal")]
    pub kappa: BigInt,
}

impl ConicForm {
    /// `t` for an admissible `u`.
    pub fn t_of(&self, u: &BigInt) -> Option<BigInt> {
        let (q, r) = (u - &self.offset).div_rem(&self.modulus);
        r.is_zero().then_some(q)
    }

    pub fn u_of(&self, t: &BigInt) -> BigInt {
        &self.modulus * t + &self.offset
    }
}

/// Completes the square in `κ(c₂t² + c₁t + c₀) = s²` and divides out the
/// largest square `g²` compatible with `g | u` for every `t`.
pub fn conic_reduce(c2: &BigInt, c1: &BigInt, c0: &BigInt, kappa: &BigInt) -> Result<ConicForm, PellError> {
    if !(kappa * c2).is_positive() {
        return Err(PellError::DegenerateForm("kappa * c2 must be positive".into()));
    }
    let a = BigInt::from(2) * c2 * kappa;
    let c = kappa * c1;
    let d = BigInt::from(4) * c2 * kappa;
    let n = kappa * kappa * (c1 * c1 - BigInt::from(4) * c2 * c0);
    if n.is_zero() {
        return Err(PellError::DegenerateForm("kappa Q is a square polynomial".into()));
    }
    let lin = a.gcd(&c);
    let fits = |h: &BigInt| (&d % (h * h)).is_zero() && (&n % (h * h)).is_zero();
    let mut g = BigInt::one();
    let mut f = BigInt::one();
    while &f * &f <= lin {
        if (&lin % &f).is_zero() {
            for h in [f.clone(), &lin / &f] {
                if h > g && fits(&h) {
                    g = h;
                }
            }
        }
        f += 1;
    }
    let (d, n, m, c) = (d / (&g * &g), n / (&g * &g), a / &g, c / &g);
    if arith::is_square(&d) {
        return Err(PellError::DegenerateForm(format!("D = {d} is a square")));
    }
    let residue = arith::modulo(&c, &m);
    Ok(ConicForm { d, n, modulus: m, residue, offset: c, kappa: kappa.clone() })
}

/// Least `(U, V)` with `U² − D·V² = 1`, from the continued fraction of √D.
pub fn pell_fundamental(d: &BigInt) -> Result<(BigInt, BigInt), PellError> {
    if !d.is_positive() || arith::is_square(d) {
        return Err(PellError::SquareD(d.clone()));
    }
    let a0 = d.sqrt();
    let (mut m, mut den, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    loop {
        if &p * &p - d * &q * &q == BigInt::one() {
            return Ok((p, q));
        }
        m = &den * &a - &m;
        den = (d - &m * &m) / &den;
        a = (&a0 + &m) / &den;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
}

/// Solutions of `u² − D·s² = N` up to the unit action, with every sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellOrbit {
    pub form: ConicForm,
    #[serde(with = "pair_vec")]
    pub seeds: Vec<(BigInt, BigInt)>,
    #[serde(with = "pair")]
    pub unit: (BigInt, BigInt),
}

mod pair {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &(BigInt, BigInt), s: S) -> Result<S::Ok, S::Error> {
        (v.0.to_string(), v.1.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(BigInt, BigInt), D::Error> {
        let (a, b) = <(String, String)>::deserialize(d)?;
        Ok((a.parse().map_err(serde::de::Error::custom)?, b.parse().map_err(serde::de::Error::custom)?))
    }
}

mod pair_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[(BigInt, BigInt)], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigInt, BigInt)>, D::Error> {
        let v = Vec::<(String, String)>::deserialize(d)?;
        v.into_iter()
            .map(|(a, b)| Ok((a.parse().map_err(serde::de::Error::custom)?, b.parse().map_err(serde::de::Error::custom)?)))
            .collect()
    }
}

impl PellOrbit {
    /// Class representatives from Nagell's bounds
    /// (`s² ≤ V²|N| / 2(U ± 1)`), which meet every class.
    pub fn new(form: ConicForm) -> Result<Self, PellError> {
        let unit = pell_fundamental(&form.d)?;
        let (u1, v1) = &unit;
        let shift = if form.n.is_positive() { u1 + 1 } else { u1 - 1 };
        let bound = (v1 * v1 * form.n.abs()) / (BigInt::from(2) * shift);
        let mut seeds = Vec::new();
        let mut s = BigInt::zero();
        while &s * &s <= bound {
            let u2 = &form.d * &s * &s + &form.n;
            if let Some(u) = arith::exact_isqrt(&u2) {
                for (a, b) in [(u.clone(), s.clone()), (-&u, s.clone()), (u.clone(), -&s), (-&u, -&s)] {
                    if !seeds.contains(&(a.clone(), b.clone())) {
                        seeds.push((a, b));
                    }
                }
            }
            s += 1;
        }
        if seeds.is_empty() {
            return Err(PellError::NoSeed { d: form.d.clone(), n: form.n.clone() });
        }
        seeds.sort();
        Ok(PellOrbit { form, seeds, unit })
    }

    fn step(&self, u: &BigInt, s: &BigInt, forward: bool) -> (BigInt, BigInt) {
        let (a, b) = &self.unit;
        let d = &self.form.d;
        if forward {
            (a * u + d * b * s, b * u + a * s)
        } else {
            (a * u - d * b * s, a * s - b * u)
        }
    }

    /// Every `u` with `|u| ≤ L` on the orbit.
    pub fn solutions_up_to(&self, l: &BigInt) -> BTreeSet<(BigInt, BigInt)> {
        let mut out = BTreeSet::new();
        for (u0, s0) in &self.seeds {
            for forward in [true, false] {
                let (mut u, mut s) = if forward { (u0.clone(), s0.clone()) } else { self.step(u0, s0, false) };
                loop {
                    if &u.abs() <= l {
                        out.insert((u.clone(), s.clone()));
                    }
                    // past this point |u| only grows in this direction
                    let monotone = if forward { (&u * &s).sign() != num_bigint::Sign::Minus } else { (&u * &s).sign() != num_bigint::Sign::Plus };
                    if monotone && &u.abs() > l {
                        break;
                    }
                    (u, s) = self.step(&u, &s, forward);
                }
            }
        }
        out
    }
}

/// The first `count` admissible `t`, ordered by `|t|` and then negative
/// before positive.
pub fn orbit_stream(orbit: &PellOrbit, count: usize) -> Vec<BigInt> {
    let f = &orbit.form;
    let mut l = &f.modulus * BigInt::from(1000) + f.offset.abs();
    loop {
        let tmax = (&l - f.offset.abs()) / &f.modulus;
        let ts: BTreeSet<(BigInt, bool, BigInt)> = orbit
            .solutions_up_to(&l)
            .into_iter()
            .filter_map(|(u, _)| f.t_of(&u))
            .filter(|t| t.abs() <= tmax)
            .map(|t| (t.abs(), !t.is_negative(), t))
            .collect();
        if ts.len() >= count {
            return ts.into_iter().take(count).map(|(_, _, t)| t).collect();
        }
        l = &l * &orbit.unit.0 * BigInt::from(2);
    }
}

/// Admissible `t` with `|t| ≤ bound`, by testing `κQ(t)` directly.
pub fn brute_force_admissible(c2: &BigInt, c1: &BigInt, c0: &BigInt, kappa: &BigInt, bound: i64) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = (-bound..=bound)
        .map(BigInt::from)
        .filter(|t| {
            let v = kappa * (c2 * t * t + c1 * t + c0);
            !v.is_negative() && arith::is_square(&v)
        })
        .collect();
    out.sort_by(|a, b| a.abs().cmp(&b.abs()).then(a.cmp(b)));
    out
}

/// An integral point `(x, y)` on `y² = x³ + A·x + B` from a family at `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralPointRecord {
    #[serde(with = "crate::padic::decimal")]
    pub t: BigInt,
    #[serde(with = "crate::padic::decimal")]
    pub x: BigInt,
    #[serde(with = "crate::padic::decimal")]
    pub y: BigInt,
    #[serde(rename = "A", with = "crate::padic::decimal")]
    pub a: BigInt,
    #[serde(rename = "B", with = "crate::padic::decimal")]
    pub b: BigInt,
    pub rho: Option<f64>,
    pub digits_x: usize,
}

fn eval_int(p: &dense::Dense<Rationals>, t: &BigInt) -> Result<BigInt, PellError> {
    let v = dense::eval(&Rationals, p, &BigRational::from_integer(t.clone()));
    v.is_integer().then(|| v.to_integer()).ok_or_else(|| PellError::NonIntegral(t.clone()))
}

/// Integer coefficients `(c₂, c₁, c₀)` of a quadratic `Q`.
pub fn quadratic_coeffs(fam: &EpzFamily<Rationals>) -> Result<(BigInt, BigInt, BigInt), PellError> {
    let [_, _, _, q, _] = fam.dense();
    if q.len() != 3 || q.iter().any(|c| !c.is_integer()) {
        return Err(PellError::NotQuadratic);
    }
    Ok((q[2].to_integer(), q[1].to_integer(), q[0].to_integer()))
}

/// Pell orbit of `κQ(t) = s²` for a family.
pub fn family_orbit(fam: &EpzFamily<Rationals>, kappa: &BigInt) -> Result<PellOrbit, PellError> {
    let (c2, c1, c0) = quadratic_coeffs(fam)?;
    PellOrbit::new(conic_reduce(&c2, &c1, &c0, kappa)?)
}

/// The point at one admissible `t`: `x = κX(t)`, `y = κY(t)s`,
/// `A = κ²A(t)`, `B = κ³B(t)` with `s² = κQ(t)`.
pub fn point_at(fam: &EpzFamily<Rationals>, kappa: &BigInt, t: &BigInt) -> Result<IntegralPointRecord, PellError> {
    let [x, a, b, q, y] = fam.dense();
    let qv = kappa * eval_int(&q, t)?;
    let s = arith::exact_isqrt(&qv).ok_or_else(|| PellError::NonIntegral(t.clone()))?;
    let x = kappa * eval_int(&x, t)?;
    let y = kappa * eval_int(&y, t)? * s;
    let a = kappa * kappa * eval_int(&a, t)?;
    let b = kappa * kappa * kappa * eval_int(&b, t)?;
    assert!(crate::verify::curve_point_check(&x, &y, &a, &b), "family identity fails at t = {t}");
    let rho = rho(&x, &a, &b).ok();
    let digits_x = arith::decimal_digits(&x);
    Ok(IntegralPointRecord { t: t.clone(), x, y, a, b, rho, digits_x })
}

/// Integral points at the first `count` admissible `t`.
pub fn integral_points(
    fam: &EpzFamily<Rationals>,
    kappa: &BigInt,
    count: usize,
) -> Result<Vec<IntegralPointRecord>, PellError> {
    let orbit = family_orbit(fam, kappa)?;
    orbit_stream(&orbit, count).iter().map(|t| point_at(fam, kappa, t)).collect()
}

/// `ρ = log x / log max(|A|^(1/2), |B|^(1/3))`.
pub fn rho(x: &BigInt, a: &BigInt, b: &BigInt) -> Result<f64, PellError> {
    if x <= &BigInt::one() {
        return Err(PellError::RhoUndefined);
    }
    let la = (!a.is_zero()).then(|| arith::ln_big(&a.abs()) / 2.0);
    let lb = (!b.is_zero()).then(|| arith::ln_big(&b.abs()) / 3.0);
    let den = match (la, lb) {
        (Some(p), Some(q)) => p.max(q),
        (Some(p), None) => p,
        (None, Some(q)) => q,
        (None, None) => return Err(PellError::RhoUndefined),
    };
    if den <= 0.0 {
        return Err(PellError::RhoUndefined);
    }
    Ok(arith::ln_big(x) / den)
}

/// `x / B⁴` as a float, for the asymptotic `X ~ B⁴/(2²⁵3⁴)`.
pub fn x_over_b4(rec: &IntegralPointRecord) -> f64 {
    (arith::ln_big(&rec.x.abs()) - 4.0 * arith::ln_big(&rec.b.abs())).exp()
}

/// `t` and `w = √Q(t)` from a power product of the Case II units.
#[derive(Clone, Debug)]
pub struct NfUnitPoint {
    pub exponents: (i64, i64, i64),
    pub u: NFElem,
    pub v: NFElem,
    pub t: NFElem,
    pub w: NFElem,
    /// Least common denominator of the coordinates of `t`.
    pub denominator: BigInt,
    /// Valuations of `t` at `p₂ = (θ)` and `q₂ = (θ − 1)`.
    pub v_p2: Option<i64>,
    pub v_q2: Option<i64>,
}

impl NfUnitPoint {
    /// Denominator of `t` supported on 2 and 3 only.
    pub fn integral_away_from_6(&self) -> bool {
        let mut d = self.denominator.clone();
        for p in [2u32, 3] {
            while (&d % p).is_zero() {
                d /= p;
            }
        }
        d.is_one()
    }
}

/// `f₁ⁱf₂ʲf₃ᵏ = u + v√c₂`, `t = 2√c₀uv + v²c₁`, `w = √c₀(2c₂v² + 1) + c₁uv`,
/// with `w² = Q(t)` checked exactly.
pub fn nf_unit_point(data: &Case2Data, i: i64, j: i64, k: i64) -> Result<NfUnitPoint, PellError> {
    let c2 = &data.c2;
    let mut acc = RelQuadElem::one(&data.field);
    for (f, e) in data.f.iter().zip([i, j, k]) {
        let pw = f.pow(e, c2).map_err(|e| PellError::RelativeNorm(e.to_string()))?;
        acc = acc.mul(&pw, c2);
    }
    let nrm = acc.rel_norm(c2);
    if nrm != data.field.int(1) {
        return Err(PellError::RelativeNorm(nrm.to_string()));
    }
    let (u, v) = (acc.u, acc.v);
    let two = data.field.int(2);
    let t = two.mul(&data.sqrt_c0).mul(&u).mul(&v).add(&v.mul(&v).mul(&data.c1));
    let w = data.sqrt_c0.mul(&two.mul(c2).mul(&v).mul(&v).add(&data.field.int(1))).add(&data.c1.mul(&u).mul(&v));
    let qt = data.c2.mul(&t).mul(&t).add(&data.c1.mul(&t)).add(&data.c0);
    assert_eq!(w.mul(&w), qt, "w^2 = Q(t) fails");
    let denominator = arith::lcm_all(t.coords().iter().map(|c| c.denom()));
    let (v_p2, v_q2) = two_adic_valuations(&data.field, &t);
    Ok(NfUnitPoint { exponents: (i, j, k), u, v, t, w, denominator, v_p2, v_q2 })
}

/// Valuations at the degree-one primes above 2, which correspond to the
/// roots 0 (`θ`) and 1 (`θ − 1`) of the defining polynomial mod 2.
fn two_adic_valuations(k: &NumberField, a: &NFElem) -> (Option<i64>, Option<i64>) {
    let prec = 64;
    let roots = k.padic_roots(2, prec);
    let pick = |r0: u64| {
        roots
            .roots
            .iter()
            .find(|r| (*r % 2u32).to_u64() == Some(r0))
            .and_then(|r| a.valuation_at_root(r, 2, prec))
    };
    (pick(0), pick(1))
}

/// `N(lc X) / N(lc A)⁶` for a family over a number field with
/// `deg X = 6` and `deg A = 1`: the limit of `N(X(t)/A(t)⁶)`.
pub fn norm_ratio_limit(x: &dense::Dense<NumberField>, a: &dense::Dense<NumberField>) -> Result<BigRational, PellError> {
    let (dx, da) = (x.len().saturating_sub(1), a.len().saturating_sub(1));
    if dx != 6 || da != 1 {
        return Err(PellError::Degree(dx, da));
    }
    let na = a[1].norm();
    if na.is_zero() {
        return Err(PellError::Degree(dx, 0));
    }
    Ok(x[6].norm() / na.pow(6))
}

/// [`norm_ratio_limit`] for the published Case II family.
pub fn case2_norm_ratio(data: &Case2Data) -> Result<BigRational, PellError> {
    let x = data.x.to_dense(0).map_err(|_| PellError::Degree(0, 0))?;
    let a = data.a.to_dense(0).map_err(|_| PellError::Degree(0, 0))?;
    norm_ratio_limit(&x, &a)
}
