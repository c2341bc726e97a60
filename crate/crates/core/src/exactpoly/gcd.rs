//! Multivariate gcd over the integers and resultants of sparse polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::dense;
use super::mpoly::MPoly;
use super::polyring::PolyRing;
use super::PolyError;
use crate::ring::{Integers, PrimeField, Ring};

fn positive(p: MPoly<Integers>) -> MPoly<Integers> {
    if !p.is_zero() && p.leading_coeff().is_negative() {
        p.neg_poly()
    } else {
        p
    }
}

/// Content with respect to variable `i`: gcd of the coefficients of the
/// powers of that variable, returned over the full variable list.
pub fn content_in(p: &MPoly<Integers>, i: usize) -> MPoly<Integers> {
    let coeffs = p.to_univariate(i);
    let mut g = MPoly::zero(Integers, p.vars().without(i));
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = mpoly_gcd(&g, c);
        if g.is_constant() && g.constant_term().is_one() {
            break;
        }
    }
    MPoly::from_univariate(std::slice::from_ref(&g), i, &p.vars().names()[i])
}

/// Greatest common divisor in `Z[vars]` with positive leading coefficient.
pub fn mpoly_gcd(a: &MPoly<Integers>, b: &MPoly<Integers>) -> MPoly<Integers> {
    if a.is_zero() {
        return positive(b.clone());
    }
    if b.is_zero() {
        return positive(a.clone());
    }
    if a.is_constant() || b.is_constant() {
        let ca = crate::arith::gcd_all(a.terms().iter().map(|(_, c)| c));
        let cb = crate::arith::gcd_all(b.terms().iter().map(|(_, c)| c));
        let g: BigInt = ca.gcd(&cb);
        return MPoly::constant(Integers, a.vars().clone(), g);
    }
    let n = a.nvars();
    let i = (0..n)
        .find(|&i| a.contains_var(i) || b.contains_var(i))
        .expect("nonconstant polynomial has a variable");
    match (a.contains_var(i), b.contains_var(i)) {
        (true, false) => return mpoly_gcd(&content_in(a, i), b),
        (false, true) => return mpoly_gcd(a, &content_in(b, i)),
        _ => {}
    }
    let ua = a.to_univariate(i);
    let ub = b.to_univariate(i);
    if coprime_images(&ua, &ub) {
        return mpoly_gcd(&content_in(a, i), &content_in(b, i));
    }
    let ring = PolyRing::new(Integers, a.vars().without(i));
    let g = dense::gcd_subresultant(&ring, &ua, &ub);
    positive(MPoly::from_univariate(&g, i, &a.vars().names()[i]))
}

/// True when the images of `a` and `b` mod a large prime, at some point of
/// the remaining variables where neither leading coefficient vanishes, have
/// a constant gcd. Then `a` and `b` share no factor of positive degree in
/// the main variable. `false` is inconclusive.
fn coprime_images(a: &[MPoly<Integers>], b: &[MPoly<Integers>]) -> bool {
    const P: u64 = 2_147_483_647;
    let f = PrimeField::new(P);
    let n = a[0].nvars();
    (1..=3u64).any(|round| {
        let point: Vec<u64> = (0..n as u64).map(|j| (round * 7919 + j * 104_729 + 3) * (j + round * 31 + 1) % P).collect();
        let image = |u: &[MPoly<Integers>]| -> Vec<u64> { u.iter().map(|c| c.eval_hom(&f, &point, |x| f.reduce_int(x))).collect() };
        let (ia, ib) = (image(a), image(b));
        ia.last() != Some(&0) && ib.last() != Some(&0) && dense::gcd_field(&f, &ia, &ib).len() == 1
    })
}

fn univariate_pair<R: Ring>(
    p: &MPoly<R>,
    q: &MPoly<R>,
    var: &str,
) -> Result<(usize, PolyRing<R>, Vec<MPoly<R>>, Vec<MPoly<R>>), PolyError> {
    if p.vars() != q.vars() {
        return Err(PolyError::VariableMismatch(
            p.vars().names().join(","),
            q.vars().names().join(","),
        ));
    }
    let i = p.vars().require(var)?;
    if !p.contains_var(i) || !q.contains_var(i) {
        return Err(PolyError::ZeroDegree(var.to_string()));
    }
    let ring = PolyRing::new(p.ring().clone(), p.vars().without(i));
    Ok((i, ring, p.to_univariate(i), q.to_univariate(i)))
}

/// Resultant with respect to `var`, computed by the subresultant algorithm.
/// The result lives over the same variable list, with `var` absent.
pub fn resultant<R: Ring>(p: &MPoly<R>, q: &MPoly<R>, var: &str) -> Result<MPoly<R>, PolyError> {
    let (i, ring, up, uq) = univariate_pair(p, q, var)?;
    let r = dense::subresultant(&ring, &up, &uq);
    Ok(MPoly::from_univariate(std::slice::from_ref(&r), i, var))
}

/// Resultant as a fraction-free Sylvester determinant.
pub fn resultant_sylvester<R: Ring>(
    p: &MPoly<R>,
    q: &MPoly<R>,
    var: &str,
) -> Result<MPoly<R>, PolyError> {
    let (i, ring, up, uq) = univariate_pair(p, q, var)?;
    let r = dense::sylvester_resultant(&ring, &up, &uq);
    Ok(MPoly::from_univariate(std::slice::from_ref(&r), i, var))
}
