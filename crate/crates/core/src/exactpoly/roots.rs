//! Univariate root finding and square roots: square-free decomposition,
//! roots modulo a prime, Hensel lifting of simple roots, rational roots and
//! polynomial square roots by undetermined coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::dense::{self, Dense};
use crate::arith;
use crate::ring::{PrimeField, Rationals, Ring};

/// Yun's square-free decomposition over a field of characteristic zero (or
/// characteristic larger than the degree). Returns monic factors with their
/// multiplicities, skipping constants.
pub fn square_free_decomposition<R: Ring>(ring: &R, f: &Dense<R>) -> Vec<(Dense<R>, u32)> {
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let f = dense::monic(ring, f);
    let df = dense::derivative(ring, &f);
    let a0 = dense::gcd_field(ring, &f, &df);
    let mut b = dense::exact_quotient(ring, &f, &a0).expect("gcd divides");
    let c = dense::exact_quotient(ring, &df, &a0).expect("gcd divides");
    let mut d = dense::sub(ring, &c, &dense::derivative(ring, &b));
    let mut i = 1;
    while b.len() > 1 {
        let a = dense::gcd_field(ring, &b, &d);
        let nb = dense::exact_quotient(ring, &b, &a).expect("gcd divides");
        let nc = dense::exact_quotient(ring, &d, &a).expect("gcd divides");
        d = dense::sub(ring, &nc, &dense::derivative(ring, &nb));
        b = nb;
        if a.len() > 1 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Distinct roots in `GF(p)`, ascending.
pub fn roots_mod_p(field: &PrimeField, f: &Dense<PrimeField>) -> Vec<u64> {
    let p = field.p();
    let f = dense::trimmed(field, f.clone());
    if f.is_empty() {
        return (0..p).collect();
    }
    if f.len() == 1 {
        return Vec::new();
    }
    if p <= 1000 {
        return (0..p).filter(|x| dense::eval(field, &f, x) == 0).collect();
    }
    let f = dense::monic(field, &f);
    let x = vec![0, 1];
    let xp = dense::pow_mod(field, &x, p as u128, &f);
    let g = dense::gcd_field(field, &f, &dense::sub(field, &xp, &x));
    let mut roots = Vec::new();
    split_linear_factors(field, &g, &mut roots);
    roots.sort_unstable();
    roots
}

/// Splits a product of distinct linear factors (Cantor–Zassenhaus, odd p).
fn split_linear_factors(field: &PrimeField, g: &Dense<PrimeField>, out: &mut Vec<u64>) {
    let p = field.p();
    match g.len() {
        0 | 1 => {}
        2 => out.push(field.neg(&field.div(&g[0], &g[1]).unwrap())),
        _ => {
            for a in 0..p {
                let shifted = vec![a, 1];
                let pw = dense::pow_mod(field, &shifted, ((p - 1) / 2) as u128, g);
                let h = dense::gcd_field(field, g, &dense::sub(field, &pw, &vec![1]));
                if h.len() > 1 && h.len() < g.len() {
                    let other = dense::exact_quotient(field, g, &h).unwrap();
                    split_linear_factors(field, &h, out);
                    split_linear_factors(field, &other, out);
                    return;
                }
            }
            unreachable!("no splitting shift found");
        }
    }
}

fn eval_int(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = (acc * x + c) % m;
    }
    arith::modulo(&acc, m)
}

/// Lifts a simple root `r0` of `f` modulo `p` to a root modulo `p^k`.
/// Returns `None` when `f'(r0) ≡ 0 mod p`.
pub fn lift_simple_root(f: &[BigInt], r0: &BigInt, p: u64, k: u32) -> Option<BigInt> {
    let pb = BigInt::from(p);
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let d0 = eval_int(&df, r0, &pb);
    if d0.is_zero() {
        return None;
    }
    let mut r = arith::modulo(r0, &pb);
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = pb.pow(prec);
        let fv = eval_int(f, &r, &m);
        let dv = eval_int(&df, &r, &m);
        let inv = arith::mod_inverse(&dv, &m)?;
        r = arith::modulo(&(&r - fv * inv), &m);
    }
    Some(r)
}

fn integer_form(f: &Dense<Rationals>) -> Vec<BigInt> {
    let den = arith::lcm_all(f.iter().map(|c| c.denom()));
    let ints: Vec<BigInt> = f.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = arith::gcd_all(ints.iter());
    ints.into_iter().map(|c| c / &g).collect()
}

/// Rational roots of a nonzero polynomial, ascending, with multiplicities.
pub fn rational_roots(f: &Dense<Rationals>) -> Vec<(BigRational, u32)> {
    let q = Rationals;
    let mut out = Vec::new();
    for (h, mult) in square_free_decomposition(&q, f) {
        for r in rational_roots_squarefree(&h) {
            out.push((r, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn rational_roots_squarefree(h: &Dense<Rationals>) -> Vec<BigRational> {
    let mut roots = Vec::new();
    let mut hz = integer_form(h);
    if hz[0].is_zero() {
        roots.push(BigRational::zero());
        hz.remove(0);
    }
    if hz.len() <= 1 {
        return roots;
    }
    if hz.len() == 2 {
        roots.push(BigRational::new(-hz[0].clone(), hz[1].clone()));
        return roots;
    }
    let lc = hz.last().unwrap().clone();
    let bound = hz[0].abs().max(lc.abs());
    for p in arith::primes_from(10007) {
        let field = PrimeField::new(p);
        let hp: Vec<u64> = hz.iter().map(|c| field.reduce_int(c)).collect();
        if *hp.last().unwrap() == 0 {
            continue;
        }
        let g = dense::gcd_field(&field, &hp, &dense::derivative(&field, &hp));
        if g.len() > 1 {
            continue;
        }
        let two_b2 = BigInt::from(2) * &bound * &bound;
        let mut k = 1;
        let pb = BigInt::from(p);
        while pb.pow(k) <= two_b2 {
            k += 1;
        }
        let m = pb.pow(k);
        for r0 in roots_mod_p(&field, &hp) {
            let r = lift_simple_root(&hz, &BigInt::from(r0), p, k).expect("simple root");
            if let Some(cand) = arith::rational_reconstruct(&r, &m) {
                if dense::eval(&Rationals, h, &cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
        return roots;
    }
    unreachable!("primes are infinite")
}

/// Why a polynomial has no square root.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SqrtFailure {
    #[error("odd degree {0}")]
    OddDegree(usize),
    #[error("leading coefficient is not a square")]
    LeadingNotSquare,
    #[error("characteristic two is not supported")]
    CharacteristicTwo,
    #[error("coefficient of t^{degree} does not match")]
    Mismatch { degree: usize },
}

/// Square root by undetermined coefficients from the top degree down.
/// The leading coefficient of the result is the domain's chosen square root
/// of the leading coefficient (positive for ordered domains).
pub fn dense_sqrt<R: Ring>(ring: &R, p: &Dense<R>) -> Result<Dense<R>, SqrtFailure> {
    if p.is_empty() {
        return Ok(Vec::new());
    }
    let deg = p.len() - 1;
    if deg % 2 == 1 {
        return Err(SqrtFailure::OddDegree(deg));
    }
    let n = deg / 2;
    let mut r = ring.sqrt(&p[deg]).ok_or(SqrtFailure::LeadingNotSquare)?;
    if ring.is_negative(&r) == Some(true) {
        r = ring.neg(&r);
    }
    let two_r = ring.add(&r, &r);
    if ring.is_zero(&two_r) {
        return Err(SqrtFailure::CharacteristicTwo);
    }
    let mut y = vec![ring.zero(); n + 1];
    y[n] = r;
    for k in 1..=n {
        let mut acc = p[deg - k].clone();
        for i in 1..k {
            let prod = ring.mul(&y[n - i], &y[n - k + i]);
            acc = ring.sub(&acc, &prod);
        }
        y[n - k] = ring.div(&acc, &two_r).ok_or(SqrtFailure::CharacteristicTwo)?;
    }
    let sq = dense::mul(ring, &y, &y);
    for d in (0..=deg).rev() {
        let a = sq.get(d).cloned().unwrap_or_else(|| ring.zero());
        if a != p[d] {
            return Err(SqrtFailure::Mismatch { degree: d });
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(c: &[i64]) -> Dense<Rationals> {
        c.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn rational_roots_examples() {
        let r = rational_roots(&qv(&[25, -20, 4]));
        assert_eq!(r, vec![(BigRational::new(5.into(), 2.into()), 2)]);
        assert!(rational_roots(&qv(&[1, 0, 1])).is_empty());
        // (2t-3)(t+7)t^2(5t+1)
        let f = dense::mul(
            &Rationals,
            &dense::mul(&Rationals, &qv(&[-3, 2]), &qv(&[7, 1])),
            &dense::mul(&Rationals, &qv(&[0, 0, 1]), &qv(&[1, 5])),
        );
        let roots: Vec<_> = rational_roots(&f).into_iter().map(|(r, m)| (r.to_string(), m)).collect();
        assert_eq!(
            roots,
            vec![("-7".into(), 1), ("-1/5".into(), 1), ("0".into(), 2), ("3/2".into(), 1)]
        );
    }

    #[test]
    fn roots_mod_large_prime() {
        let f = PrimeField::new(1_000_003);
        // (t-5)(t-77)(t^2+1) over GF(1000003), where -1 is a non-residue
        let a = dense::mul(&f, &vec![f.from_i64(-5), 1], &vec![f.from_i64(-77), 1]);
        let g = dense::mul(&f, &a, &vec![1, 0, 1]);
        assert_eq!(roots_mod_p(&f, &g), vec![5, 77]);
    }

    #[test]
    fn hensel_sqrt_two() {
        let f = vec![BigInt::from(-2), BigInt::zero(), BigInt::from(1)];
        assert_eq!(lift_simple_root(&f, &BigInt::from(3), 7, 2), Some(BigInt::from(10)));
        assert_eq!(lift_simple_root(&f, &BigInt::from(3), 7, 3), Some(BigInt::from(108)));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(dense_sqrt(&Rationals, &qv(&[1, 0, 2, 0, 1])), Ok(qv(&[1, 0, 1])));
        assert_eq!(dense_sqrt(&Rationals, &qv(&[1, 1, 1])), Err(SqrtFailure::Mismatch { degree: 0 }));
        assert_eq!(dense_sqrt(&Rationals, &qv(&[1, 1])), Err(SqrtFailure::OddDegree(1)));
        assert_eq!(dense_sqrt(&Rationals, &qv(&[1, 0, 2])), Err(SqrtFailure::LeadingNotSquare));
    }
}
