//! Local search: all solutions of a system over 𝔽p, Jacobian classification,
//! and Newton lifting to p-adic precision.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{modulo, valuation_capped};
use crate::elim::PolySystem;
use crate::exactpoly::MPoly;
use crate::linalg::{det_mod_p, solve_mod};
use crate::ring::{Integers, ModPrimePower, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("system is not square: {eqs} equations in {vars} variables")]
    NotSquare { eqs: usize, vars: usize },
    #[error("seed does not solve the system mod p")]
    NotASolution,
    #[error("Jacobian is not invertible mod p at the seed")]
    SingularJacobian,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("seed has {got} coordinates, expected {want}")]
    SeedLength { got: usize, want: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum JacobianStatus {
    Invertible,
    SingularNonzero,
    ZeroMatrix,
}

impl fmt::Display for JacobianStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JacobianStatus::Invertible => "invertible",
            JacobianStatus::SingularNonzero => "singular",
            JacobianStatus::ZeroMatrix => "zero",
        })
    }
}

/// A point mod p where every equation vanishes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalSolution {
    pub coords: Vec<u64>,
    pub status: JacobianStatus,
    /// Determinant of the Jacobian mod p (0 for non-square systems).
    pub det: u64,
}

/// Residues mod `p^k`, one per system variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicPoint {
    pub p: u64,
    pub k: u32,
    #[serde(with = "decimal_vec")]
    pub coords: Vec<BigInt>,
}

/// Big integers as decimal strings in JSON.
pub(crate) mod decimal_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|x| x.parse().map_err(serde::de::Error::custom)).collect()
    }
}

/// A big integer as a decimal string in JSON.
pub(crate) mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl PadicPoint {
    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.p).pow(self.k)
    }

    /// Reduction to a lower precision.
    pub fn truncate(&self, k: u32) -> PadicPoint {
        let m = BigInt::from(self.p).pow(k.min(self.k));
        PadicPoint { p: self.p, k: k.min(self.k), coords: self.coords.iter().map(|c| modulo(c, &m)).collect() }
    }
}

/// Formal partial derivatives: entry `(i, j)` is `∂eq_i/∂var_j`.
pub fn jacobian(sys: &PolySystem) -> Vec<Vec<MPoly<Integers>>> {
    let n = sys.vars().len();
    sys.eqs().iter().map(|e| (0..n).map(|j| e.derivative(j)).collect()).collect()
}

/// Integer polynomial reduced mod p with terms sorted so that the last
/// variable is most significant; specializing the first remaining variable
/// then merges adjacent terms only.
#[derive(Clone, Debug)]
struct ModPoly {
    terms: Vec<(Vec<u16>, u64)>,
}

impl ModPoly {
    fn new(p: &MPoly<Integers>, field: &PrimeField) -> ModPoly {
        let mut terms: Vec<(Vec<u16>, u64)> = p
            .terms()
            .iter()
            .map(|(m, c)| (m.0.to_vec(), field.reduce_int(c)))
            .filter(|(_, c)| *c != 0)
            .collect();
        terms.sort_by(|a, b| a.0.iter().rev().cmp(b.0.iter().rev()));
        ModPoly { terms }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Specializes the first exponent position at a value, given the powers
    /// of that value.
    fn specialize_first(&self, pows: &[u64], p: u64) -> ModPoly {
        let mut out: Vec<(Vec<u16>, u64)> = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let v = (*c as u128 * pows[e[0] as usize] as u128 % p as u128) as u64;
            if v == 0 {
                continue;
            }
            let rest = &e[1..];
            match out.last_mut() {
                Some((le, lc)) if le.as_slice() == rest => *lc = (*lc + v) % p,
                _ => out.push((rest.to_vec(), v)),
            }
        }
        out.retain(|(_, c)| *c != 0);
        ModPoly { terms: out }
    }

    /// Value when a single variable remains.
    fn eval_last(&self, pows: &[u64], p: u64) -> u64 {
        let mut acc: u64 = 0;
        for (e, c) in &self.terms {
            acc = (acc + (*c as u128 * pows[e[0] as usize] as u128 % p as u128) as u64) % p;
        }
        acc
    }
}

fn power_rows(p: u64, maxdeg: usize) -> Vec<Vec<u64>> {
    (0..p)
        .map(|a| {
            let mut row = Vec::with_capacity(maxdeg + 1);
            let mut x = 1u64;
            for _ in 0..=maxdeg {
                row.push(x);
                x = (x as u128 * a as u128 % p as u128) as u64;
            }
            row
        })
        .collect()
}

struct ScanCtx<'a> {
    p: u64,
    field: PrimeField,
    pows: Vec<Vec<u64>>,
    jac: &'a [Vec<ModPoly>],
    square: bool,
}

impl ScanCtx<'_> {
    fn recurse(&self, eqs: &[ModPoly], prefix: &mut Vec<u64>, remaining: usize, out: &mut Vec<Vec<u64>>) {
        if remaining == 1 {
            for a in 0..self.p {
                let row = &self.pows[a as usize];
                if eqs.iter().all(|e| e.eval_last(row, self.p) == 0) {
                    let mut pt = prefix.clone();
                    pt.push(a);
                    out.push(pt);
                }
            }
            return;
        }
        for a in 0..self.p {
            let row = &self.pows[a as usize];
            let mut next = Vec::with_capacity(eqs.len());
            let mut dead = false;
            for e in eqs {
                let s = e.specialize_first(row, self.p);
                if s.terms.len() == 1 && s.terms[0].0.iter().all(|&x| x == 0) {
                    dead = true;
                    break;
                }
                if !s.is_zero() {
                    next.push(s);
                }
            }
            if dead {
                continue;
            }
            prefix.push(a);
            self.recurse(&next, prefix, remaining - 1, out);
            prefix.pop();
        }
    }

    fn classify(&self, pt: &[u64]) -> (JacobianStatus, u64) {
        let vals: Vec<Vec<u64>> = self
            .jac
            .iter()
            .map(|row| row.iter().map(|e| eval_full(e, pt, &self.field)).collect())
            .collect();
        if vals.iter().all(|r| r.iter().all(|&v| v == 0)) {
            return (JacobianStatus::ZeroMatrix, 0);
        }
        if !self.square || vals.iter().any(|r| r.iter().all(|&v| v == 0)) {
            return (JacobianStatus::SingularNonzero, 0);
        }
        let d = det_mod_p(&self.field, vals);
        if d == 0 {
            (JacobianStatus::SingularNonzero, 0)
        } else {
            (JacobianStatus::Invertible, d)
        }
    }
}

fn eval_full(e: &ModPoly, pt: &[u64], field: &PrimeField) -> u64 {
    let p = field.p();
    let mut acc = 0u64;
    for (ex, c) in &e.terms {
        let mut t = *c as u128;
        for (i, &k) in ex.iter().enumerate() {
            if k > 0 {
                t = t * crate::arith::pow_mod_u64(pt[i], k as u64, p) as u128 % p as u128;
            }
        }
        acc = (acc + t as u64) % p;
    }
    acc
}

/// Options for [`scan_local`].
#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    /// Variables held at fixed residues.
    pub fixed: Vec<(String, u64)>,
    /// Split the first free variable's range across threads.
    pub parallel: bool,
}

/// Every point of 𝔽p^n (with the fixed coordinates) where all equations
/// vanish, in lexicographic order, each tagged with its Jacobian status.
pub fn scan_local(sys: &PolySystem, p: u64, opts: &ScanOptions) -> Result<Vec<LocalSolution>, PadicError> {
    if !crate::arith::is_prime_u64(p) {
        return Err(PadicError::NotPrime(p));
    }
    let field = PrimeField::new(p);
    let n = sys.vars().len();
    let mut fixed: Vec<Option<u64>> = vec![None; n];
    for (name, v) in &opts.fixed {
        let i = sys.vars().index_of(name).ok_or_else(|| PadicError::UnknownVariable(name.clone()))?;
        fixed[i] = Some(v % p);
    }
    // Fixed variables are specialized once, up front, over the integers.
    let mut eqs: Vec<MPoly<Integers>> = sys.eqs().to_vec();
    for (i, f) in fixed.iter().enumerate().rev() {
        if let Some(v) = f {
            eqs = eqs.iter().map(|e| e.specialize(i, &BigInt::from(*v))).collect();
        }
    }
    let free: Vec<usize> = (0..n).filter(|&i| fixed[i].is_none()).collect();
    let assemble = |free_vals: &[u64]| -> Vec<u64> {
        let mut it = free_vals.iter();
        fixed.iter().map(|f| f.unwrap_or_else(|| *it.next().expect("one value per free variable"))).collect()
    };
    let mod_eqs: Vec<ModPoly> = eqs.iter().map(|e| ModPoly::new(e, &field)).filter(|e| !e.is_zero()).collect();
    if mod_eqs.iter().any(|e| e.terms.len() == 1 && e.terms[0].0.iter().all(|&x| x == 0)) {
        return Ok(Vec::new());
    }
    let jac: Vec<Vec<ModPoly>> =
        jacobian(sys).iter().map(|r| r.iter().map(|e| ModPoly::new(e, &field)).collect()).collect();
    let maxdeg = mod_eqs.iter().flat_map(|e| e.terms.iter().flat_map(|(x, _)| x.iter().copied())).max().unwrap_or(0);
    let ctx = ScanCtx {
        p,
        field,
        pows: power_rows(p, maxdeg as usize),
        jac: &jac,
        square: sys.len() == n,
    };
    let points: Vec<Vec<u64>> = if free.is_empty() {
        if mod_eqs.is_empty() { vec![Vec::new()] } else { Vec::new() }
    } else if free.len() == 1 || !opts.parallel {
        let mut out = Vec::new();
        ctx.recurse(&mod_eqs, &mut Vec::new(), free.len(), &mut out);
        out
    } else {
        let chunks: Vec<Vec<Vec<u64>>> = (0..p)
            .into_par_iter()
            .map(|a| {
                let row = &ctx.pows[a as usize];
                let mut next = Vec::new();
                for e in &mod_eqs {
                    let s = e.specialize_first(row, p);
                    if s.terms.len() == 1 && s.terms[0].0.iter().all(|&x| x == 0) {
                        return Vec::new();
                    }
                    if !s.is_zero() {
                        next.push(s);
                    }
                }
                let mut out = Vec::new();
                ctx.recurse(&next, &mut vec![a], free.len() - 1, &mut out);
                out
            })
            .collect();
        chunks.into_iter().flatten().collect()
    };
    Ok(points
        .into_iter()
        .map(|fv| {
            let coords = assemble(&fv);
            let (status, det) = ctx.classify(&coords);
            LocalSolution { coords, status, det }
        })
        .collect())
}

/// Brute-force reference scan: evaluates every equation at every point.
pub fn scan_local_naive(sys: &PolySystem, p: u64) -> Vec<Vec<u64>> {
    let field = PrimeField::new(p);
    let n = sys.vars().len();
    let eqs: Vec<ModPoly> = sys.eqs().iter().map(|e| ModPoly::new(e, &field)).collect();
    let total = p.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut pt = vec![0u64; n];
            for i in (0..n).rev() {
                pt[i] = idx % p;
                idx /= p;
            }
            pt
        })
        .filter(|pt| eqs.iter().all(|e| eval_full(e, pt, &field) == 0))
        .collect()
}

fn eval_mod(e: &MPoly<Integers>, ring: &ModPrimePower, pt: &[BigInt]) -> BigInt {
    e.eval_hom(ring, pt, |c| ring.reduce(c))
}

/// Minimum p-adic valuation of the equations at the point, capped at `k`.
pub fn residual_valuation(sys: &PolySystem, point: &PadicPoint) -> u32 {
    let ring = ModPrimePower::new(point.p, point.k);
    sys.eqs()
        .par_iter()
        .map(|e| valuation_capped(&eval_mod(e, &ring, &point.coords), point.p, point.k))
        .min()
        .unwrap_or(point.k)
}

/// Newton iteration `s ↦ s − J(s)⁻¹ f(s)` from a mod-p seed with invertible
/// Jacobian, doubling the precision each step up to `p^target`.
pub fn newton_lift(sys: &PolySystem, seed: &[u64], p: u64, target: u32) -> Result<PadicPoint, PadicError> {
    newton_lift_traced(sys, seed, p, target).map(|(pt, _)| pt)
}

/// As [`newton_lift`], also returning the residual valuation after each step.
pub fn newton_lift_traced(
    sys: &PolySystem,
    seed: &[u64],
    p: u64,
    target: u32,
) -> Result<(PadicPoint, Vec<(u32, u32)>), PadicError> {
    let n = sys.vars().len();
    if sys.len() != n {
        return Err(PadicError::NotSquare { eqs: sys.len(), vars: n });
    }
    if seed.len() != n {
        return Err(PadicError::SeedLength { got: seed.len(), want: n });
    }
    if target == 0 {
        return Err(PadicError::ZeroPrecision);
    }
    if !crate::arith::is_prime_u64(p) {
        return Err(PadicError::NotPrime(p));
    }
    let jac = jacobian(sys);
    let mut pt = PadicPoint { p, k: 1, coords: seed.iter().map(|&s| BigInt::from(s % p)).collect() };
    if residual_valuation(sys, &pt) < 1 {
        return Err(PadicError::NotASolution);
    }
    let field = PrimeField::new(p);
    let j1: Vec<Vec<u64>> = jac
        .iter()
        .map(|r| r.iter().map(|e| eval_mod(e, &ModPrimePower::new(p, 1), &pt.coords).to_u64().unwrap_or(0)).collect())
        .collect();
    if det_mod_p(&field, j1) == 0 {
        return Err(PadicError::SingularJacobian);
    }
    let mut log = vec![(1, 1)];
    while pt.k < target {
        let k = (2 * pt.k).min(target);
        let ring = ModPrimePower::new(p, k);
        let f: Vec<BigInt> = sys.eqs().par_iter().map(|e| eval_mod(e, &ring, &pt.coords)).collect();
        let jm: Vec<Vec<BigInt>> = jac
            .par_iter()
            .map(|r| r.iter().map(|e| eval_mod(e, &ring, &pt.coords)).collect())
            .collect();
        let delta = solve_mod(&ring, &jm, &f).expect("Jacobian invertible mod p stays invertible mod p^k");
        let coords = pt.coords.iter().zip(&delta).map(|(s, d)| ring.reduce(&(s - d))).collect();
        pt = PadicPoint { p, k, coords };
        log.push((k, residual_valuation(sys, &pt)));
    }
    Ok((pt, log))
}

/// Reduces a residue mod p to `u64`.
pub fn shadow(a: &BigInt, p: u64) -> u64 {
    modulo(a, &BigInt::from(p)).to_u64().expect("residue below p")
}

/// True if `x` is zero mod `p^k`.
pub fn vanishes_to(x: &BigInt, p: u64, k: u32) -> bool {
    (x % BigInt::from(p).pow(k)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(vars: &[&str], eqs: &[&str]) -> PolySystem {
        PolySystem::parse(vars, eqs).unwrap()
    }

    #[test]
    fn jacobian_entries() {
        let s = sys(&["x", "y"], &["x^2 + y^2 - 1", "x - y"]);
        let j = jacobian(&s);
        let txt: Vec<Vec<String>> = j.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect();
        assert_eq!(txt, vec![vec!["2*x", "2*y"], vec!["1", "-1"]]);
        let c = sys(&["x"], &["x - 3"]);
        assert!(jacobian(&c)[0][0].derivative(0).is_zero());
    }

    #[test]
    fn scan_circle_mod_7() {
        let s = sys(&["x", "y"], &["x^2 + y^2 - 1", "x - y"]);
        let sols = scan_local(&s, 7, &ScanOptions::default()).unwrap();
        assert_eq!(sols.len(), 2);
        assert_eq!(sols[0].coords, vec![2, 2]);
        assert_eq!(sols[1].coords, vec![5, 5]);
        assert!(sols.iter().all(|s| s.status == JacobianStatus::Invertible));
        assert_eq!(sols[0].det, 6);
        let par = scan_local(&s, 7, &ScanOptions { parallel: true, ..Default::default() }).unwrap();
        assert_eq!(par, sols);
    }

    #[test]
    fn zero_jacobian() {
        let s = sys(&["x"], &["x^2"]);
        let sols = scan_local(&s, 5, &ScanOptions::default()).unwrap();
        assert_eq!(sols, vec![LocalSolution { coords: vec![0], status: JacobianStatus::ZeroMatrix, det: 0 }]);
    }

    #[test]
    fn fixed_coordinates() {
        let s = sys(&["x", "y", "z"], &["x + y + z", "x*y - z"]);
        let opts = ScanOptions { fixed: vec![("y".into(), 2)], parallel: false };
        let sols = scan_local(&s, 5, &opts).unwrap();
        let all: Vec<Vec<u64>> = scan_local_naive(&s, 5).into_iter().filter(|p| p[1] == 2).collect();
        assert_eq!(sols.iter().map(|s| s.coords.clone()).collect::<Vec<_>>(), all);
    }

    #[test]
    fn sqrt2_lift() {
        let s = sys(&["x"], &["x^2 - 2"]);
        let (pt, log) = newton_lift_traced(&s, &[3], 7, 3).unwrap();
        assert_eq!(pt.truncate(2).coords[0], BigInt::from(10));
        assert_eq!(pt.coords[0], BigInt::from(108));
        assert_eq!(log.last().unwrap(), &(3, 3));
        assert!(matches!(newton_lift(&s, &[2], 7, 3), Err(PadicError::NotASolution)));
        let sq = sys(&["x"], &["x^2"]);
        assert!(matches!(newton_lift(&sq, &[0], 7, 3), Err(PadicError::SingularJacobian)));
    }

    #[test]
    fn circle_lift_and_perturbation() {
        let s = sys(&["x", "y"], &["x^2 + y^2 - 1", "x - y"]);
        let pt = newton_lift(&s, &[2, 2], 7, 8).unwrap();
        assert_eq!(residual_valuation(&s, &pt), 8);
        let m = pt.modulus();
        let x = &pt.coords[0];
        let two_x2: BigInt = BigInt::from(2) * x * x - 1;
        assert!((two_x2 % &m).is_zero());
        assert_eq!(shadow(x, 7), 2);
        let mut bad = pt.clone();
        bad.coords[0] = (&bad.coords[0] + BigInt::from(7).pow(7)) % &m;
        assert!(residual_valuation(&s, &bad) < 8);
        assert!(residual_valuation(&s, &pt.truncate(1)) >= 1);
    }
}
