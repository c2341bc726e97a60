//! Integer helpers shared by the polynomial, p-adic and Pell code.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

pub fn is_square(n: &BigInt) -> bool {
    exact_isqrt(n).is_some()
}

/// Exact square root of a rational, if both numerator and denominator are squares.
pub fn exact_rational_sqrt(q: &BigRational) -> Option<BigRational> {
    let n = exact_isqrt(q.numer())?;
    let d = exact_isqrt(q.denom())?;
    Some(BigRational::new(n, d))
}

/// Least nonnegative residue.
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a % m;
    if r.is_negative() {
        r + m
    } else {
        r
    }
}

/// Inverse of `a` modulo `m`, when `gcd(a, m) = 1`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = modulo(a, m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(modulo(&e.x, m))
}

pub fn mod_inverse_u64(a: u64, p: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(p as i128) as u64)
}

pub fn mul_mod_u64(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod_u64(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, a, p);
        }
        a = mul_mod_u64(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes in increasing order starting from `start` (inclusive).
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start.max(2)..).filter(|&n| is_prime_u64(n))
}

/// Square root modulo an odd prime (Tonelli-Shanks); returns the smaller root.
pub fn sqrt_mod_u64(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod_u64(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod_u64(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod_u64(z, q, p);
    let mut t = pow_mod_u64(a, q, p);
    let mut r = pow_mod_u64(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod_u64(tt, tt, p);
            i += 1;
        }
        let b = pow_mod_u64(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod_u64(b, b, p);
        t = mul_mod_u64(t, c, p);
        r = mul_mod_u64(r, b, p);
    }
    Some(r.min(p - r))
}

/// Square root of a p-adic unit modulo `p^k` (p odd) by Hensel lifting.
pub fn sqrt_mod_prime_power(a: &BigInt, p: u64, k: u32) -> Option<BigInt> {
    if p == 2 {
        return None;
    }
    let pb = BigInt::from(p);
    let a0 = modulo(a, &pb).to_u64().unwrap();
    if a0 == 0 {
        return None;
    }
    let mut r = BigInt::from(sqrt_mod_u64(a0, p)?);
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = pb.pow(prec);
        // r <- r - (r^2 - a) / (2r)
        let f = modulo(&(&r * &r - a), &m);
        let inv = mod_inverse(&(BigInt::from(2) * &r), &m)?;
        r = modulo(&(&r - f * inv), &m);
    }
    let m = pb.pow(k);
    let other = &m - &r;
    Some(if other < r { other } else { r })
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// Valuation of `n mod p^k`, capped at `k`.
pub fn valuation_capped(n: &BigInt, p: u64, k: u32) -> u32 {
    match valuation(n, p) {
        None => k,
        Some(v) => v.min(k),
    }
}

pub fn gcd_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for c in it {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn lcm_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    let mut l = BigInt::one();
    for c in it {
        l = l.lcm(c);
    }
    l
}

/// Rational `n/d` with `n ≡ a·d (mod m)`, `|n|, d ≤ sqrt(m/2)` and
/// `gcd(d, m) = 1`, found by the half extended Euclidean algorithm.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = ((m - BigInt::one()) / BigInt::from(2)).sqrt();
    rational_reconstruct_bounded(a, m, &bound, &bound)
}

pub fn rational_reconstruct_bounded(
    a: &BigInt,
    m: &BigInt,
    num_bound: &BigInt,
    den_bound: &BigInt,
) -> Option<BigRational> {
    let (mut r0, mut r1) = (m.clone(), modulo(a, m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while &r1 > num_bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || &s1.abs() > den_bound || !s1.gcd(m).is_one() || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Natural logarithm of a positive big integer, accurate to double precision
/// even far beyond the `f64` exponent range.
pub fn ln_big(n: &BigInt) -> f64 {
    assert!(n.sign() == Sign::Plus, "ln of nonpositive integer");
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap().ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Number of decimal digits of |n| (0 has one digit).
pub fn decimal_digits(n: &BigInt) -> usize {
    let s = n.magnitude().to_str_radix(10);
    s.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tonelli_and_hensel() {
        assert_eq!(sqrt_mod_u64(2, 7), Some(3));
        assert_eq!(sqrt_mod_u64(3, 7), None);
        let r = sqrt_mod_prime_power(&BigInt::from(2), 7, 2).unwrap();
        assert_eq!(r, BigInt::from(10));
        for p in [3u64, 5, 13, 17, 41] {
            for a in 1..p {
                if let Some(r) = sqrt_mod_u64(a, p) {
                    assert_eq!(mul_mod_u64(r, r, p), a);
                }
            }
        }
    }

    #[test]
    fn primes() {
        let v: Vec<u64> = primes_from(10).take(4).collect();
        assert_eq!(v, vec![11, 13, 17, 19]);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
    }

    #[test]
    fn logs_of_huge_numbers() {
        let n = BigInt::from(10).pow(400);
        assert!((ln_big(&n) - 400.0 * 10f64.ln()).abs() < 1e-9);
        assert_eq!(decimal_digits(&BigInt::from(-35334750)), 8);
    }

    #[test]
    fn reconstruction() {
        let m = BigInt::from(17).pow(64);
        let a = BigInt::from(311) * mod_inverse(&BigInt::from(64), &m).unwrap();
        let r = rational_reconstruct(&a, &m).unwrap();
        assert_eq!(r, BigRational::new(311.into(), 64.into()));
        let m = BigInt::from(7).pow(4);
        assert_eq!(rational_reconstruct(&BigInt::from(5), &m), Some(BigRational::from_integer(5.into())));
        let neg = modulo(&BigInt::from(-3), &m);
        assert_eq!(rational_reconstruct(&neg, &m), Some(BigRational::from_integer((-3).into())));
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(17 * 17 * 5), 17), Some(2));
        assert_eq!(valuation(&BigInt::zero(), 17), None);
        assert_eq!(valuation_capped(&BigInt::zero(), 17, 9), 9);
    }
}
