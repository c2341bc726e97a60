//! Recognizing p-adic numbers: exact integer LLL, minimal-polynomial search
//! and rational reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecogError {
    #[error("lattice rows are linearly dependent")]
    DependentRows,
    #[error("rows have different lengths")]
    Ragged,
}

/// Rows of an integer matrix spanning a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    pub basis: Vec<Vec<BigInt>>,
}

/// Output of [`lll_reduce`]: the reduced basis and the unimodular `U` with
/// `reduced = U · input`.
#[derive(Clone, Debug)]
pub struct LllResult {
    pub lattice: IntLattice,
    pub transform: Vec<Vec<BigInt>>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= q * s;
    }
}

/// Nearest integer to `n/d` for `d > 0`, halves rounded up.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    (BigInt::from(2) * n + d).div_floor(&(BigInt::from(2) * d))
}

/// LLL with δ = 99/100 in all-integer arithmetic (Gram determinants `d_i`
/// and scaled coefficients `λ_ij = d_j μ_ij`).
pub fn lll_reduce(l: &IntLattice) -> Result<LllResult, RecogError> {
    let n = l.basis.len();
    let mut b = l.basis.clone();
    if let Some(first) = b.first() {
        if b.iter().any(|r| r.len() != first.len()) {
            return Err(RecogError::Ragged);
        }
    }
    let mut h: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    if n == 0 {
        return Ok(LllResult { lattice: l.clone(), transform: h });
    }
    // d[i + 1] is the Gram determinant of the first i + 1 rows; d[0] = 1.
    let mut d = vec![BigInt::zero(); n + 1];
    d[0] = BigInt::one();
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[1] = dot(&b[0], &b[0]);
    if d[1].is_zero() {
        return Err(RecogError::DependentRows);
    }
    let (mut k, mut kmax) = (1usize, 0usize);
    let red = |b: &mut Vec<Vec<BigInt>>, h: &mut Vec<Vec<BigInt>>, lam: &mut Vec<Vec<BigInt>>, d: &[BigInt], k: usize, l: usize| {
        if BigInt::from(2) * lam[k][l].abs() > d[l + 1] {
            let q = round_div(&lam[k][l], &d[l + 1]);
            let (bl, hl) = (b[l].clone(), h[l].clone());
            axpy(&mut b[k], &q, &bl);
            axpy(&mut h[k], &q, &hl);
            lam[k][l] -= &q * &d[l + 1];
            for i in 0..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    };
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(RecogError::DependentRows);
                    }
                    d[k + 1] = u;
                }
            }
        }
        red(&mut b, &mut h, &mut lam, &d, k, k - 1);
        let lhs = BigInt::from(100) * (&d[k + 1] * &d[k - 1] + &lam[k][k - 1] * &lam[k][k - 1]);
        let rhs = BigInt::from(99) * &d[k] * &d[k];
        if lhs < rhs {
            b.swap(k, k - 1);
            h.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = std::mem::take(&mut lam[k][j]);
                lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
            }
            let mu = lam[k][k - 1].clone();
            let bb = (&d[k - 1] * &d[k + 1] + &mu * &mu) / &d[k];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &mu * &t) / &d[k];
                lam[i][k - 1] = (&bb * &t + &mu * &lam[i][k]) / &d[k + 1];
            }
            d[k] = bb;
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                red(&mut b, &mut h, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    Ok(LllResult { lattice: IntLattice { basis: b }, transform: h })
}

/// Exact Gram–Schmidt data `(μ, |b*|²)` for checking reduction conditions.
pub fn gram_schmidt(l: &IntLattice) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = l.basis.len();
    let rows: Vec<Vec<BigRational>> =
        l.basis.iter().map(|r| r.iter().map(|c| BigRational::from_integer(c.clone())).collect()).collect();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let rdot = |a: &[BigRational], b: &[BigRational]| a.iter().zip(b).map(|(x, y)| x * y).sum::<BigRational>();
    for i in 0..n {
        let mut v = rows[i].clone();
        for j in 0..i {
            mu[i][j] = rdot(&rows[i], &star[j]) / &norms[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * s;
            }
        }
        norms.push(rdot(&v, &v));
        star.push(v);
    }
    (mu, norms)
}

/// Size reduction `|μ_ij| ≤ 1/2` and the Lovász condition with δ = 99/100.
pub fn is_lll_reduced(l: &IntLattice) -> bool {
    let (mu, norms) = gram_schmidt(l);
    let half = BigRational::new(1.into(), 2.into());
    let delta = BigRational::new(99.into(), 100.into());
    for i in 0..norms.len() {
        if (0..i).any(|j| mu[i][j].abs() > half) {
            return false;
        }
        if i > 0 && norms[i] < (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * &norms[i - 1] {
            return false;
        }
    }
    true
}

/// An integer polynomial (coefficients lowest first) proposed as the minimal
/// polynomial of a p-adic number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinPolyCandidate {
    #[serde(with = "crate::padic::decimal_vec")]
    pub poly: Vec<BigInt>,
    /// Valuation of `poly(a)` at the checking precision, capped there.
    pub quality: u32,
    /// Precision used for the lattice search.
    pub search_precision: u32,
    /// Precision the candidate was checked at.
    pub check_precision: u32,
    pub verified: bool,
}

impl MinPolyCandidate {
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn height(&self) -> BigInt {
        self.poly.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

/// Primitive with positive leading coefficient, trailing zeros trimmed;
/// `None` for the zero vector.
fn normalize_poly(mut c: Vec<BigInt>) -> Option<Vec<BigInt>> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let g = arith::gcd_all(c.iter());
    if g.is_zero() {
        return None;
    }
    let sign = if c.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    Some(c.into_iter().map(|x| x / &g * &sign).collect())
}

fn eval_mod(poly: &[BigInt], a: &BigInt, m: &BigInt) -> BigInt {
    poly.iter().rev().fold(BigInt::zero(), |acc, c| arith::modulo(&(acc * a + c), m))
}

/// Short vectors of `{c : Σ cᵢ aⁱ ≡ 0 (mod pᵏ)}` in degree `d`, as normalized
/// polynomials of exact degree `d`.
fn relations(a: &BigInt, m: &BigInt, d: usize) -> Vec<Vec<BigInt>> {
    let mut basis = Vec::with_capacity(d + 1);
    let mut row = vec![BigInt::zero(); d + 1];
    row[0] = m.clone();
    basis.push(row);
    let mut pw = BigInt::one();
    for i in 1..=d {
        pw = arith::modulo(&(&pw * a), m);
        let mut row = vec![BigInt::zero(); d + 1];
        row[0] = arith::modulo(&-&pw, m);
        row[i] = BigInt::one();
        basis.push(row);
    }
    let red = lll_reduce(&IntLattice { basis }).expect("triangular basis is independent");
    // small: shorter than sqrt(p^k / 2), the first row always kept
    let mut out = Vec::new();
    for v in red.lattice.basis {
        let n2 = dot(&v, &v);
        if &n2 * &n2 >= m * m / BigInt::from(4) && !out.is_empty() {
            continue;
        }
        if let Some(p) = normalize_poly(v) {
            if p.len() == d + 1 && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

fn sort_candidates(c: &mut [MinPolyCandidate]) {
    c.sort_by(|x, y| {
        y.verified
            .cmp(&x.verified)
            .then(x.degree().cmp(&y.degree()))
            .then(x.height().cmp(&y.height()))
            .then(x.poly.cmp(&y.poly))
    });
}

/// Minimal-polynomial candidates of degree ≤ `dmax` for a residue mod pᵏ.
///
/// The search uses the first `2k/3` digits; the rest are held back, and a
/// candidate is verified when it vanishes to at least 1.5 times the search
/// precision. Rule of thumb: a degree-d polynomial of height H needs
/// roughly `pᵏ > H^(d+1)`.
pub fn algdep(a: &BigInt, p: u64, k: u32, dmax: usize) -> Vec<MinPolyCandidate> {
    let ks = (2 * k / 3).max(1);
    let pk = BigInt::from(p).pow(k);
    let a = arith::modulo(a, &pk);
    sweep(&a, p, ks, &a, k, dmax)
}

fn sweep(a_search: &BigInt, p: u64, ks: u32, a_check: &BigInt, kc: u32, dmax: usize) -> Vec<MinPolyCandidate> {
    let ms = BigInt::from(p).pow(ks);
    let mc = BigInt::from(p).pow(kc);
    let a_s = arith::modulo(a_search, &ms);
    let need = ks + ks / 2;
    let mut out = Vec::new();
    for d in 1..=dmax {
        for poly in relations(&a_s, &ms, d) {
            let quality = arith::valuation_capped(&eval_mod(&poly, a_check, &mc), p, kc);
            let verified = quality >= need && kc >= need;
            out.push(MinPolyCandidate { poly, quality, search_precision: ks, check_precision: kc, verified });
        }
        if out.iter().any(|c| c.verified) {
            break;
        }
    }
    sort_candidates(&mut out);
    out
}

/// [`algdep`] with a re-lift source: searches at precision `k`, checks
/// against `relift(2k)`, and doubles `k` until something verifies; `relift`
/// is never asked for more than `k_max` digits (beyond the first round).
pub fn algdep_adaptive(
    relift: &dyn Fn(u32) -> BigInt,
    p: u64,
    k0: u32,
    k_max: u32,
    dmax: usize,
) -> Vec<MinPolyCandidate> {
    let mut k = k0.max(1);
    loop {
        let hi = relift(2 * k);
        let out = sweep(&hi, p, k, &hi, 2 * k, dmax);
        if out.first().is_some_and(|c| c.verified) || 4 * k > k_max {
            return out;
        }
        k *= 2;
    }
}

/// `n/d ≡ a (mod pᵏ)` with `|n|, d ≤ sqrt(pᵏ/2)` and `p ∤ d`.
pub fn rational_reconstruct(a: &BigInt, p: u64, k: u32) -> Option<BigRational> {
    arith::rational_reconstruct(a, &BigInt::from(p).pow(k))
}

/// Residue of `n/d` mod pᵏ; `None` when p divides `d`.
pub fn rational_residue(q: &BigRational, p: u64, k: u32) -> Option<BigInt> {
    let m = BigInt::from(p).pow(k);
    let inv = arith::mod_inverse(q.denom(), &m)?;
    Some(arith::modulo(&(q.numer() * inv), &m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(rows: &[&[i64]]) -> IntLattice {
        IntLattice { basis: rows.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect() }
    }

    #[test]
    fn identity_is_reduced() {
        let l = lat(&[&[1, 0], &[0, 1]]);
        assert_eq!(lll_reduce(&l).unwrap().lattice, l);
    }

    #[test]
    fn small_examples_satisfy_conditions() {
        for l in [lat(&[&[201, 37], &[1799, 331]]), lat(&[&[1, 1, 2], &[1, 0, -1], &[3, 5, 6]])] {
            let r = lll_reduce(&l).unwrap();
            assert!(is_lll_reduced(&r.lattice));
            // transform maps the input onto the output
            for (u, row) in r.transform.iter().zip(&r.lattice.basis) {
                let img: Vec<BigInt> =
                    (0..row.len()).map(|j| u.iter().zip(&l.basis).map(|(c, b)| c * &b[j]).sum()).collect();
                assert_eq!(&img, row);
            }
        }
        let r = lll_reduce(&lat(&[&[201, 37], &[1799, 331]])).unwrap();
        // |b1| <= 2^((n-1)/4) det^(1/n) with n = 2, det = |201*331 - 37*1799| = 32
        let n2 = dot(&r.lattice.basis[0], &r.lattice.basis[0]);
        assert!(&n2 * &n2 <= BigInt::from(2 * 32 * 32));
    }

    #[test]
    fn dependent_rows() {
        assert_eq!(lll_reduce(&lat(&[&[1, 2], &[2, 4]])).unwrap_err(), RecogError::DependentRows);
    }

    #[test]
    fn sqrt2_and_integer() {
        let r = crate::exactpoly::roots::lift_simple_root(&[(-2).into(), 0.into(), 1.into()], &3.into(), 7, 64).unwrap();
        let c = algdep(&r, 7, 64, 2);
        assert!(c[0].verified);
        assert_eq!(c[0].poly, vec![BigInt::from(-2), 0.into(), 1.into()]);
        let c = algdep(&BigInt::from(3), 17, 64, 3);
        assert_eq!(c[0].poly, vec![BigInt::from(-3), 1.into()]);
        assert!(c[0].verified);
    }

    #[test]
    fn reconstruct() {
        let q = BigRational::new(311.into(), 64.into());
        let a = rational_residue(&q, 17, 64).unwrap();
        assert_eq!(rational_reconstruct(&a, 17, 64), Some(q));
        assert_eq!(rational_reconstruct(&5.into(), 7, 4), Some(BigRational::from_integer(5.into())));
    }
}
