#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use pellforge::elim::{is_solution, reduce, PolySystem, ReduceOptions};
use pellforge::exactpoly::dense;
use pellforge::exactpoly::roots::{lift_simple_root, roots_mod_p};
use pellforge::exactpoly::{poly_sqrt, MPoly, Monomial, Vars};
use pellforge::padic::{newton_lift_traced, residual_valuation, PadicError};
use pellforge::pell::{brute_force_admissible, conic_reduce, PellError, PellOrbit};
use pellforge::recog::{algdep, rational_reconstruct, rational_residue};
use pellforge::ring::{Integers, PrimeField, Rationals};

pub type Checked = Result<(), TestCaseError>;

/// Coefficients for `Σ lin_j x_j + Σ c·x^e` in `n` variables.
#[derive(Clone, Debug)]
pub struct RandPoly {
    pub lin: Vec<i64>,
    pub terms: Vec<(i64, Vec<u32>)>,
}

pub fn rand_poly(n: usize) -> impl Strategy<Value = RandPoly> {
    (
        prop::collection::vec(-9i64..=9, n),
        prop::collection::vec((-9i64..=9, prop::collection::vec(0u32..=2, n)), 0..4),
    )
        .prop_map(|(lin, terms)| RandPoly { lin, terms })
}

pub fn monomial(n: usize, exps: &[u32]) -> Monomial {
    exps.iter().enumerate().fold(Monomial::one(n), |m, (i, &e)| m.mul(&Monomial::var(n, i, e as _)))
}

pub fn to_mpoly(vars: &Vars, r: &RandPoly) -> MPoly<Integers> {
    let n = vars.len();
    let mut terms: Vec<(Monomial, BigInt)> = r.lin.iter().enumerate().map(|(i, &c)| (Monomial::var(n, i, 1), BigInt::from(c))).collect();
    terms.extend(r.terms.iter().map(|(c, e)| (monomial(n, e), BigInt::from(*c))));
    MPoly::from_terms(Integers, vars.clone(), terms)
}

/// The system `gᵢ(x) − gᵢ(r)`, which vanishes at the integer point `r`.
pub fn planted(polys: &[RandPoly], point: &[i64]) -> PolySystem {
    let names: Vec<String> = (0..point.len()).map(|i| format!("x{i}")).collect();
    let vars = Vars::new(&names);
    let pt: Vec<BigInt> = point.iter().map(|&v| BigInt::from(v)).collect();
    let eqs = polys
        .iter()
        .map(|g| {
            let g = to_mpoly(&vars, g);
            let c = g.eval(&pt);
            g.sub_poly(&MPoly::constant(Integers, vars.clone(), c))
        })
        .collect();
    PolySystem::new(vars, eqs).unwrap()
}

pub fn square_system(max_n: usize) -> impl Strategy<Value = (Vec<RandPoly>, Vec<i64>, u64)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(rand_poly(n), n).prop_map(|mut ps| {
                for (i, g) in ps.iter_mut().enumerate() {
                    if g.lin[i] == 0 {
                        g.lin[i] = 1;
                    }
                }
                ps
            }),
            prop::collection::vec(-50i64..=50, n),
            prop::sample::select(vec![5u64, 7, 11, 13, 17]),
        )
    })
}

/// Each Newton step doubles the residual valuation (capped at the target),
/// and the lift converges to the planted integer point.
pub fn lifting_contract((polys, point, p): (Vec<RandPoly>, Vec<i64>, u64)) -> Checked {
    let sys = planted(&polys, &point);
    prop_assume!(sys.len() == point.len());
    let seed: Vec<u64> = point.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect();
    let target = 24;
    let lifted = newton_lift_traced(&sys, &seed, p, target);
    if let Err(e) = &lifted {
        prop_assert!(matches!(e, PadicError::SingularJacobian), "{}", e);
    }
    prop_assume!(lifted.is_ok());
    let (pt, log) = lifted.unwrap();
    prop_assert_eq!(log[0], (1, 1));
    for w in log.windows(2) {
        prop_assert_eq!(w[1].0, (2 * w[0].0).min(target));
        prop_assert!(w[1].1 >= w[1].0);
    }
    prop_assert_eq!(residual_valuation(&sys, &pt), target);
    let m = BigInt::from(p).pow(target);
    for (c, &v) in pt.coords.iter().zip(&point) {
        prop_assert_eq!(c.clone(), ((BigInt::from(v) % &m) + &m) % &m);
    }
    Ok(())
}

pub fn sqrt_coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..=20, 1i64..=6), 1..8)
}

pub fn poly_sqrt_round_trip(coeffs: Vec<(i64, i64)>) -> Checked {
    let vars = Vars::new(&["t"]);
    let dense: Vec<BigRational> = coeffs.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect();
    let f = MPoly::from_dense(Rationals, vars.clone(), 0, &dense);
    let f2 = f.mul_poly(&f);
    let r = poly_sqrt(&f2).unwrap();
    prop_assert!(r == f || r == f.neg_poly());
    if !f.is_zero() {
        let two = MPoly::from_int(Rationals, vars, 2);
        prop_assert!(poly_sqrt(&f2.mul_poly(&two)).is_err());
    }
    Ok(())
}

pub fn small_fraction() -> impl Strategy<Value = (i64, i64)> {
    (-1_000_000i64..=1_000_000, 1i64..=1_000_000)
}

pub fn rational_reconstruct_round_trip((n, d): (i64, i64)) -> Checked {
    prop_assume!(d % 17 != 0);
    let q = BigRational::new(n.into(), d.into());
    let a = rational_residue(&q, 17, 20).unwrap();
    prop_assert_eq!(rational_reconstruct(&a, 17, 20), Some(q));
    Ok(())
}

pub fn planted_minpoly() -> impl Strategy<Value = (Vec<i64>, i64)> {
    (prop::collection::vec(-20i64..=20, 2..=3), 1i64..=5)
}

/// A simple root of a planted integer polynomial is recognized by a
/// verified factor of that polynomial.
pub fn algdep_round_trip((c, lead): (Vec<i64>, i64)) -> Checked {
    let p = 101u64;
    let mut f: Vec<BigInt> = c.iter().map(|&v| BigInt::from(v)).collect();
    f.push(BigInt::from(lead));
    let field = PrimeField::new(p);
    let fp: Vec<u64> = f.iter().map(|v| field.reduce_int(v)).collect();
    let root = roots_mod_p(&field, &fp).into_iter().find_map(|r| lift_simple_root(&f, &BigInt::from(r), p, 40));
    prop_assume!(root.is_some());
    let cands = algdep(&root.unwrap(), p, 40, f.len() - 1);
    prop_assert!(cands[0].verified);
    let q = |v: &[BigInt]| v.iter().map(|c| BigRational::from_integer(c.clone())).collect::<Vec<_>>();
    let (_, rem) = dense::divrem(&Rationals, &q(&f), &q(&cands[0].poly)).unwrap();
    prop_assert!(dense::trimmed(&Rationals, rem).is_empty());
    Ok(())
}

pub fn quadratic() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (1i64..=30, -30i64..=30, -30i64..=30, 1i64..=3)
}

/// The orbit enumeration finds exactly the admissible `t` a direct search
/// finds.
pub fn orbit_matches_brute_force((c2, c1, c0, kappa): (i64, i64, i64, i64)) -> Checked {
    let (c2, c1, c0, kappa) = (BigInt::from(c2), BigInt::from(c1), BigInt::from(c0), BigInt::from(kappa));
    let bound = 3000i64;
    let brute = brute_force_admissible(&c2, &c1, &c0, &kappa, bound);
    let form = match conic_reduce(&c2, &c1, &c0, &kappa) {
        Ok(f) => f,
        Err(_) => return Ok(()),
    };
    match PellOrbit::new(form.clone()) {
        Ok(orbit) => {
            let l = &form.modulus * BigInt::from(bound) + form.offset.abs();
            let mut ts: Vec<BigInt> = orbit
                .solutions_up_to(&l)
                .into_iter()
                .filter_map(|(u, _)| form.t_of(&u))
                .filter(|t| t.abs() <= BigInt::from(bound))
                .collect();
            ts.sort_by(|a, b| a.abs().cmp(&b.abs()).then(a.cmp(b)));
            ts.dedup();
            prop_assert_eq!(ts, brute);
        }
        Err(PellError::SquareD(_)) => {}
        Err(PellError::NoSeed { .. }) => prop_assert!(brute.is_empty()),
        Err(e) => prop_assert!(false, "{}", e),
    }
    Ok(())
}

pub fn planted_triple() -> impl Strategy<Value = (Vec<RandPoly>, Vec<i64>)> {
    (prop::collection::vec(rand_poly(3), 3), prop::collection::vec(-6i64..=6, 3))
}

/// True when some step of the trail divides by, or strips, a polynomial
/// that vanishes at `point` (given in the variables of `orig`).
pub fn pivot_vanishes(orig: &Vars, red: &PolySystem, point: &[i64]) -> bool {
    red.trail.iter().any(|step| {
        let at: Vec<BigInt> = step.vars.names().iter().map(|n| BigInt::from(point[orig.index_of(n).unwrap()])).collect();
        let vanishes = |p: &MPoly<Integers>| p.eval(&at).is_zero();
        match (&step.expr, &step.pivot) {
            (Some(e), _) => vanishes(e.den()),
            (None, Some(piv)) => {
                let i = step.vars.index_of(&step.var).unwrap();
                let lc = piv.to_univariate(i).pop().unwrap().embed(&step.vars).unwrap();
                vanishes(&lc)
            }
            (None, None) => false,
        }
    })
}

/// Whatever the reduction returns still vanishes at the projection of a
/// planted solution, unless a pivot vanishes there.
pub fn elimination_is_sound((polys, point): (Vec<RandPoly>, Vec<i64>)) -> Checked {
    let sys = planted(&polys, &point);
    let opts = ReduceOptions { protected: vec![], target_vars: Some(1), permissive_steps: 1 };
    let r = reduce(&sys, &opts);
    prop_assert!(r.is_ok(), "{:?}", r.err());
    let red = r.unwrap();
    prop_assume!(!pivot_vanishes(sys.vars(), &red, &point));
    let proj: Vec<BigRational> = red
        .vars()
        .names()
        .iter()
        .map(|n| BigRational::from_integer(point[sys.vars().index_of(n).unwrap()].into()))
        .collect();
    prop_assert!(is_solution(&red, &proj));
    Ok(())
}
