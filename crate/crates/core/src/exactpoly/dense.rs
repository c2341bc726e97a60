//! Dense univariate polynomials as coefficient vectors, lowest degree first.
//!
//! The zero polynomial is the empty vector; every other vector has a nonzero
//! last entry.

use super::polyring::GcdRing;
use crate::ring::Ring;

pub type Dense<R> = Vec<<R as Ring>::Elem>;

pub fn trim<R: Ring>(ring: &R, v: &mut Dense<R>) {
    while v.last().is_some_and(|c| ring.is_zero(c)) {
        v.pop();
    }
}

pub fn trimmed<R: Ring>(ring: &R, mut v: Dense<R>) -> Dense<R> {
    trim(ring, &mut v);
    v
}

pub fn degree<R: Ring>(v: &Dense<R>) -> Option<usize> {
    v.len().checked_sub(1)
}

pub fn lc<R: Ring>(ring: &R, v: &Dense<R>) -> R::Elem {
    v.last().cloned().unwrap_or_else(|| ring.zero())
}

pub fn add<R: Ring>(ring: &R, a: &Dense<R>, b: &Dense<R>) -> Dense<R> {
    let n = a.len().max(b.len());
    let z = ring.zero();
    let out = (0..n)
        .map(|i| ring.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trimmed(ring, out)
}

pub fn sub<R: Ring>(ring: &R, a: &Dense<R>, b: &Dense<R>) -> Dense<R> {
    let n = a.len().max(b.len());
    let z = ring.zero();
    let out = (0..n)
        .map(|i| ring.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trimmed(ring, out)
}

pub fn neg<R: Ring>(ring: &R, a: &Dense<R>) -> Dense<R> {
    a.iter().map(|c| ring.neg(c)).collect()
}

pub fn scale<R: Ring>(ring: &R, a: &Dense<R>, c: &R::Elem) -> Dense<R> {
    trimmed(ring, a.iter().map(|x| ring.mul(x, c)).collect())
}

pub fn mul<R: Ring>(ring: &R, a: &Dense<R>, b: &Dense<R>) -> Dense<R> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let p = ring.mul(x, y);
            ring.add_assign(&mut out[i + j], &p);
        }
    }
    trimmed(ring, out)
}

pub fn pow<R: Ring>(ring: &R, a: &Dense<R>, n: u32) -> Dense<R> {
    let mut acc = vec![ring.one()];
    for _ in 0..n {
        acc = mul(ring, &acc, a);
    }
    acc
}

pub fn eval<R: Ring>(ring: &R, a: &Dense<R>, x: &R::Elem) -> R::Elem {
    let mut acc = ring.zero();
    for c in a.iter().rev() {
        acc = ring.add(&ring.mul(&acc, x), c);
    }
    acc
}

pub fn derivative<R: Ring>(ring: &R, a: &Dense<R>) -> Dense<R> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| ring.mul(c, &ring.from_i64(i as i64)))
        .collect();
    trimmed(ring, out)
}

/// `a(g(t))`.
pub fn compose<R: Ring>(ring: &R, a: &Dense<R>, g: &Dense<R>) -> Dense<R> {
    let mut acc: Dense<R> = Vec::new();
    for c in a.iter().rev() {
        acc = add(ring, &mul(ring, &acc, g), &trimmed(ring, vec![c.clone()]));
    }
    acc
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
pub fn prem<R: Ring>(ring: &R, a: &Dense<R>, b: &Dense<R>) -> Dense<R> {
    let db = degree::<R>(b).expect("pseudo-division by zero");
    let mut r = a.clone();
    if r.len() < b.len() {
        return r;
    }
    let lb = lc(ring, b);
    let mut e = r.len() - b.len() + 1;
    while let Some(dr) = degree::<R>(&r) {
        if dr < db {
            break;
        }
        let lr = lc(ring, &r);
        let shift = dr - db;
        let mut next: Dense<R> = r.iter().map(|c| ring.mul(c, &lb)).collect();
        for (i, c) in b.iter().enumerate() {
            let p = ring.mul(&lr, c);
            next[i + shift] = ring.sub(&next[i + shift], &p);
        }
        trim(ring, &mut next);
        r = next;
        e -= 1;
    }
    if e > 0 {
        let f = ring.pow(&lb, e as u64);
        r = scale(ring, &r, &f);
    }
    r
}

/// Division with remainder when the leading coefficient of `b` is invertible.
pub fn divrem<R: Ring>(ring: &R, a: &Dense<R>, b: &Dense<R>) -> Option<(Dense<R>, Dense<R>)> {
    let db = degree::<R>(b)?;
    let inv = ring.div(&ring.one(), &lc(ring, b))?;
    let mut r = a.clone();
    if r.len() < b.len() {
        return Some((Vec::new(), r));
    }
    let mut q = vec![ring.zero(); r.len() - b.len() + 1];
    while let Some(dr) = degree::<R>(&r) {
        if dr < db {
            break;
        }
        let c = ring.mul(&lc(ring, &r), &inv);
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            let p = ring.mul(&c, bc);
            r[i + shift] = ring.sub(&r[i + shift], &p);
        }
        // the leading entry cancels exactly
        r.pop();
        trim(ring, &mut r);
        q[shift] = c;
    }
    Some((trimmed(ring, q), r))
}

/// Exact quotient `a / b` if `b` divides `a` (leading coefficient invertible).
pub fn exact_quotient<R: Ring>(ring: &R, a: &Dense<R>, b: &Dense<R>) -> Option<Dense<R>> {
    let (q, r) = divrem(ring, a, b)?;
    r.is_empty().then_some(q)
}

pub fn monic<R: Ring>(ring: &R, a: &Dense<R>) -> Dense<R> {
    if a.is_empty() {
        return Vec::new();
    }
    let inv = ring.div(&ring.one(), &lc(ring, a)).expect("leading coefficient not invertible");
    scale(ring, a, &inv)
}

/// Monic gcd over a field.
pub fn gcd_field<R: Ring>(ring: &R, a: &Dense<R>, b: &Dense<R>) -> Dense<R> {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let (_, r) = divrem(ring, &x, &y).expect("field division");
        x = y;
        y = r;
    }
    monic(ring, &x)
}

/// `base^e mod m` over a field.
pub fn pow_mod<R: Ring>(ring: &R, base: &Dense<R>, mut e: u128, m: &Dense<R>) -> Dense<R> {
    let mut acc = divrem(ring, &vec![ring.one()], m).expect("field").1;
    let mut b = divrem(ring, base, m).expect("field").1;
    while e > 0 {
        if e & 1 == 1 {
            acc = divrem(ring, &mul(ring, &acc, &b), m).expect("field").1;
        }
        e >>= 1;
        if e > 0 {
            b = divrem(ring, &mul(ring, &b, &b), m).expect("field").1;
        }
    }
    acc
}

pub fn content<R: GcdRing>(ring: &R, a: &Dense<R>) -> R::Elem {
    let mut g = ring.zero();
    for c in a {
        g = ring.gcd(&g, c);
        if ring.is_one(&g) {
            break;
        }
    }
    g
}

/// Divides out the content; zero stays zero.
pub fn primitive_part<R: GcdRing>(ring: &R, a: &Dense<R>) -> Dense<R> {
    if a.is_empty() {
        return Vec::new();
    }
    let g = content(ring, a);
    if ring.is_one(&g) {
        return a.clone();
    }
    a.iter().map(|c| ring.div(c, &g).expect("content divides")).collect()
}

/// Gcd in `R[x]` by the primitive remainder sequence, normalized so the
/// content part is `ring.normalize`d and the leading coefficient sign is
/// fixed by the caller if needed.
pub fn gcd_primitive<R: GcdRing>(ring: &R, a: &Dense<R>, b: &Dense<R>) -> Dense<R> {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let ca = content(ring, a);
    let cb = content(ring, b);
    let c = ring.normalize(&ring.gcd(&ca, &cb));
    let (mut x, mut y) = (primitive_part(ring, a), primitive_part(ring, b));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            return vec![c];
        }
        let r = prem(ring, &x, &y);
        x = y;
        y = primitive_part(ring, &r);
    }
    scale(ring, &x, &c)
}

/// Gcd in `R[x]` by the subresultant remainder sequence: exact divisions
/// keep coefficients small without a content computation per step.
pub fn gcd_subresultant<R: GcdRing>(ring: &R, a: &Dense<R>, b: &Dense<R>) -> Dense<R> {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let c = ring.normalize(&ring.gcd(&content(ring, a), &content(ring, b)));
    let (mut x, mut y) = (primitive_part(ring, a), primitive_part(ring, b));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    let mut g = ring.one();
    let mut h = ring.one();
    loop {
        if y.len() == 1 {
            return vec![c];
        }
        let delta = (x.len() - y.len()) as u64;
        let r = prem(ring, &x, &y);
        if r.is_empty() {
            return scale(ring, &primitive_part(ring, &y), &c);
        }
        let divisor = ring.mul(&g, &ring.pow(&h, delta));
        x = std::mem::replace(
            &mut y,
            r.iter().map(|c| ring.div(c, &divisor).expect("subresultant division is exact")).collect(),
        );
        g = lc(ring, &x);
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => ring.div(&ring.pow(&g, delta), &ring.pow(&h, delta - 1)).expect("subresultant division is exact"),
        };
    }
}

/// Resultant by the subresultant algorithm (no content extraction, exact
/// divisions only).
pub fn subresultant<R: Ring>(ring: &R, a: &Dense<R>, b: &Dense<R>) -> R::Elem {
    if a.is_empty() || b.is_empty() {
        return ring.zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut negate = false;
    if a.len() < b.len() {
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            negate = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.len() == 1 {
        let r = ring.pow(&b[0], (a.len() - 1) as u64);
        return if negate { ring.neg(&r) } else { r };
    }
    let mut g = ring.one();
    let mut h = ring.one();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = prem(ring, &a, &b);
        a = b;
        let divisor = ring.mul(&g, &ring.pow(&h, delta as u64));
        b = r
            .iter()
            .map(|c| ring.div(c, &divisor).expect("subresultant division is exact"))
            .collect();
        g = lc(ring, &a);
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => {
                let num = ring.pow(&g, delta as u64);
                let den = ring.pow(&h, (delta - 1) as u64);
                ring.div(&num, &den).expect("subresultant division is exact")
            }
        };
        if b.is_empty() {
            return ring.zero();
        }
        if b.len() == 1 {
            let da = a.len() - 1;
            let lb = b[0].clone();
            let res = if da == 0 {
                h
            } else if da == 1 {
                lb
            } else {
                let num = ring.pow(&lb, da as u64);
                let den = ring.pow(&h, (da - 1) as u64);
                ring.div(&num, &den).expect("subresultant division is exact")
            };
            return if negate { ring.neg(&res) } else { res };
        }
    }
}

/// Determinant by Bareiss fraction-free elimination.
pub fn bareiss_det<R: Ring>(ring: &R, mut m: Vec<Vec<R::Elem>>) -> R::Elem {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    let mut sign = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        if ring.is_zero(&m[k][k]) {
            match (k + 1..n).find(|&i| !ring.is_zero(&m[i][k])) {
                Some(i) => {
                    m.swap(i, k);
                    sign = !sign;
                }
                None => return ring.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = ring.sub(&ring.mul(&m[i][j], &m[k][k]), &ring.mul(&m[i][k], &m[k][j]));
                m[i][j] = ring.div(&v, &prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        ring.neg(&d)
    } else {
        d
    }
}

/// Sylvester matrix of `a` and `b` (rows of `a` first).
pub fn sylvester_matrix<R: Ring>(ring: &R, a: &Dense<R>, b: &Dense<R>) -> Vec<Vec<R::Elem>> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![ring.zero(); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![ring.zero(); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant as the Sylvester determinant; the independent check on
/// [`subresultant`].
pub fn sylvester_resultant<R: Ring>(ring: &R, a: &Dense<R>, b: &Dense<R>) -> R::Elem {
    if a.is_empty() || b.is_empty() {
        return ring.zero();
    }
    if a.len() == 1 && b.len() == 1 {
        return ring.one();
    }
    bareiss_det(ring, sylvester_matrix(ring, a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Integers, Rationals};
    use num_bigint::BigInt;

    fn zv(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn resultants_agree_on_small_cases() {
        let r = Integers;
        // t^2+1, t^2-1 -> 4
        assert_eq!(subresultant(&r, &zv(&[1, 0, 1]), &zv(&[-1, 0, 1])), BigInt::from(4));
        assert_eq!(sylvester_resultant(&r, &zv(&[1, 0, 1]), &zv(&[-1, 0, 1])), BigInt::from(4));
        // t-2, t-5 -> -3
        assert_eq!(subresultant(&r, &zv(&[-2, 1]), &zv(&[-5, 1])), BigInt::from(-3));
        let a = zv(&[3, -1, 4, 1, -5, 9]);
        let b = zv(&[2, 6, -5, 3]);
        assert_eq!(subresultant(&r, &a, &b), sylvester_resultant(&r, &a, &b));
        assert_eq!(subresultant(&r, &b, &a), sylvester_resultant(&r, &b, &a));
    }

    #[test]
    fn prem_and_divrem() {
        let q = Rationals;
        let a: Vec<_> = zv(&[-1, 0, 1]).into_iter().map(|c| q.from_int(&c)).collect();
        let b: Vec<_> = zv(&[-1, 1]).into_iter().map(|c| q.from_int(&c)).collect();
        let (quot, rem) = divrem(&q, &a, &b).unwrap();
        assert!(rem.is_empty());
        assert_eq!(quot, zv(&[1, 1]).into_iter().map(|c| q.from_int(&c)).collect::<Vec<_>>());
        assert_eq!(prem(&Integers, &zv(&[1, 0, 1]), &zv(&[1, 2])), zv(&[5]));
    }

    #[test]
    fn primitive_gcd_over_integers() {
        let r = Integers;
        let f = mul(&r, &zv(&[1, 2]), &zv(&[3, 0, 1]));
        let g = mul(&r, &zv(&[1, 2]), &zv(&[-7, 5]));
        assert_eq!(gcd_primitive(&r, &f, &g), zv(&[1, 2]));
    }
}
