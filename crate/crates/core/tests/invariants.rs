use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use pellforge::builder::{apply_moebius, make_template, EpzFamily, Moebius, Multipliers, Signature};
use pellforge::elim::PolySystem;
use pellforge::exactpoly::dense::{self, Dense};
use pellforge::exactpoly::roots::{lift_simple_root, roots_mod_p};
use pellforge::exactpoly::{mpoly_gcd, poly_sqrt, resultant, MPoly, Monomial, Vars};
use pellforge::known::{self, Case2Data};
use pellforge::numfield::{NFElem, NumberField};
use pellforge::padic::{newton_lift, scan_local, scan_local_naive, PadicPoint, ScanOptions};
use pellforge::pell::{self, conic_reduce, PellOrbit};
use pellforge::recog::{algdep, is_lll_reduced, lll_reduce, rational_reconstruct, IntLattice, MinPolyCandidate};
use pellforge::ring::{Integers, PrimeField, Rationals};
use pellforge::verify::{classify_degenerate, recover_y, verify_corpus, verify_identity, Certificate};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn vars(n: usize) -> Vars {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    Vars::new(&names)
}

/// Random integer polynomial in `n` variables of total degree at most `deg`.
fn int_poly(n: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = MPoly<Integers>> {
    prop::collection::vec((-9i64..=9, prop::collection::vec(0u32..=deg, n)), 0..=max_terms).prop_map(move |ts| {
        let terms = ts
            .into_iter()
            .map(|(c, mut e)| {
                while e.iter().sum::<u32>() > deg {
                    let i = e.iter().position(|&x| x > 0).unwrap();
                    e[i] -= 1;
                }
                let m = e.iter().enumerate().fold(Monomial::one(n), |m, (i, &x)| m.mul(&Monomial::var(n, i, x as _)));
                (m, BigInt::from(c))
            })
            .collect();
        MPoly::from_terms(Integers, vars(n), terms)
    })
}

fn poly_triple(max_n: usize) -> impl Strategy<Value = (MPoly<Integers>, MPoly<Integers>, MPoly<Integers>)> {
    (1..=max_n).prop_flat_map(|n| (int_poly(n, 5, 5), int_poly(n, 5, 5), int_poly(n, 5, 5)))
}

fn case2_field() -> NumberField {
    NumberField::parse(known::CASE2_FIELD).unwrap()
}

fn nf_elem(k: &NumberField, c: &[i64]) -> NFElem {
    k.elem_i64(c)
}

/// `m(a)` for a rational polynomial `m`, by Horner over `K`.
fn eval_in_field(k: &NumberField, m: &Dense<Rationals>, a: &NFElem) -> NFElem {
    m.iter().rev().fold(k.int(0), |acc, c| acc.mul(a).add(&k.rational(c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms((a, b, c) in poly_triple(4)) {
        prop_assert_eq!(a.add_poly(&b), b.add_poly(&a));
        prop_assert_eq!(a.mul_poly(&b), b.mul_poly(&a));
        prop_assert_eq!(a.add_poly(&b).add_poly(&c), a.add_poly(&b.add_poly(&c)));
        prop_assert_eq!(a.mul_poly(&b).mul_poly(&c), a.mul_poly(&b.mul_poly(&c)));
        prop_assert_eq!(a.mul_poly(&b.add_poly(&c)), a.mul_poly(&b).add_poly(&a.mul_poly(&c)));
        prop_assert!(a.sub_poly(&a).is_zero());
    }

    #[test]
    fn substitute_commutes_with_evaluation((p, r, _) in poly_triple(3), point in prop::collection::vec(-5i64..=5, 3)) {
        let n = p.nvars();
        let pt: Vec<BigInt> = point[..n].iter().map(|&v| v.into()).collect();
        let sub = p.substitute("v0", &r).unwrap();
        let mut moved = pt.clone();
        moved[0] = r.eval(&pt);
        prop_assert_eq!(sub.eval(&pt), p.eval(&moved));
    }

    #[test]
    fn content_primitive_reassembles((p, _, _) in poly_triple(4)) {
        let (c, prim) = p.content_primitive();
        prop_assert_eq!(prim.scale(&c), p.clone());
        if !p.is_zero() {
            prop_assert!(prim.content_primitive().0.is_one());
        }
    }

    /// A planted common factor of positive degree forces a zero resultant;
    /// for random pairs the resultant vanishes exactly when the gcd has
    /// positive degree.
    #[test]
    fn resultant_detects_common_factors((f, g, h) in poly_triple(3)) {
        prop_assume!(f.degree_in(0) > 0 && g.degree_in(0) > 0 && h.degree_in(0) > 0);
        let fg = f.mul_poly(&g);
        let fh = f.mul_poly(&h);
        prop_assert!(resultant(&fg, &fh, "v0").unwrap().is_zero());
        let res = resultant(&g, &h, "v0").unwrap();
        let gcd = mpoly_gcd(&g, &h);
        prop_assert_eq!(res.is_zero(), gcd.degree_in(0) > 0);
    }

    #[test]
    fn gcd_divides_and_keeps_planted_factor((f, g, h) in poly_triple(3)) {
        prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
        let (a, b) = (f.mul_poly(&g), f.mul_poly(&h));
        let d = mpoly_gcd(&a, &b);
        prop_assert!(a.exact_div(&d).is_ok() && b.exact_div(&d).is_ok());
        prop_assert!(d.exact_div(&f.content_primitive().1).is_ok());
    }

    #[test]
    fn resultant_is_multiplicative((p, p2, r) in poly_triple(2)) {
        prop_assume!(p.degree_in(0) > 0 && p2.degree_in(0) > 0 && r.degree_in(0) > 0);
        let lhs = resultant(&p.mul_poly(&p2), &r, "v0").unwrap();
        let rhs = resultant(&p, &r, "v0").unwrap().mul_poly(&resultant(&p2, &r, "v0").unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poly_sqrt_over_prime_field(coeffs in prop::collection::vec(0u64..101, 1..=9)) {
        let f = PrimeField::new(101);
        let v = Vars::new(&["t"]);
        let y = MPoly::from_dense(f.clone(), v, 0, &coeffs);
        let r = poly_sqrt(&y.mul_poly(&y)).unwrap();
        prop_assert!(r == y || r == y.neg_poly());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_is_multiplicative(a in prop::collection::vec(-30i64..=30, 4), b in prop::collection::vec(-30i64..=30, 4)) {
        let k = case2_field();
        let (x, y) = (nf_elem(&k, &a), nf_elem(&k, &b));
        prop_assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn minpoly_annihilates(a in prop::collection::vec(-30i64..=30, 4)) {
        let k = case2_field();
        let x = nf_elem(&k, &a);
        let m = x.minpoly();
        prop_assert!(eval_in_field(&k, &m, &x).is_zero());
        prop_assert!(m.len() == 2 || m.len() == 3 || m.len() == 5);
    }

    #[test]
    fn embeddings_are_ring_maps(a in prop::collection::vec(-30i64..=30, 4), b in prop::collection::vec(-30i64..=30, 4), pi in 0usize..4) {
        let k = case2_field();
        let p = [17u64, 19, 23, 29][pi];
        let kk = 20;
        let m = BigInt::from(p).pow(kk);
        let (x, y) = (nf_elem(&k, &a), nf_elem(&k, &b));
        for r in k.padic_roots(p, kk).roots {
            let ex = x.embed(&r, p, kk).unwrap();
            let ey = y.embed(&r, p, kk).unwrap();
            prop_assert_eq!(x.mul(&y).embed(&r, p, kk).unwrap(), (&ex * &ey).mod_floor(&m));
            prop_assert_eq!(x.add(&y).embed(&r, p, kk).unwrap(), (&ex + &ey).mod_floor(&m));
        }
    }
}

#[test]
fn padic_roots_are_simple_and_exact() {
    let k = case2_field();
    let mz = k.integral_minpoly().unwrap();
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        let kk = 30;
        let m = BigInt::from(p).pow(kk);
        let f = PrimeField::new(p);
        let mp: Vec<u64> = mz.iter().map(|c| f.reduce_int(c)).collect();
        let dmp = dense::derivative(&f, &mp);
        for r in k.padic_roots(p, kk).roots {
            let v = mz.iter().rev().fold(BigInt::zero(), |acc, c| (acc * &r + c).mod_floor(&m));
            assert!(v.is_zero(), "p = {p}");
            assert_ne!(dense::eval(&f, &dmp, &(&r % p).try_into().unwrap()), 0);
        }
    }
}

#[test]
fn base_signatures_are_square() {
    for sig in Signature::base_cases() {
        let tpl = make_template(sig).unwrap();
        let sys = pellforge::builder::equate_coefficients(&tpl).unwrap();
        assert_eq!(tpl.unknowns().len() as u32, 3 * sig.x);
        assert_eq!(sys.len() as u32, 3 * sig.x);
    }
}

fn perturbed_final(which: usize, delta: i64) -> EpzFamily<Rationals> {
    let mut f = known::case1_final_model();
    let one = MPoly::from_int(Rationals, f.x.vars().clone(), delta);
    match which {
        0 => f.x = f.x.add_poly(&one),
        1 => f.a = f.a.add_poly(&one),
        2 => f.b = f.b.add_poly(&one),
        _ => f.q = f.q.add_poly(&one),
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn moebius_preserves_identity_and_degeneracy(
        (an, ad) in (-9i64..=9, 1i64..=5), (bn, bd) in (-9i64..=9, 1i64..=5),
        (sn, sd) in (1i64..=9, 1i64..=9), (yn, yd) in (-9i64..=9, 1i64..=9),
        which in 0usize..4, delta in prop_oneof![Just(0i64), 1i64..=3],
    ) {
        prop_assume!(an != 0 && yn != 0);
        let fam = perturbed_final(which, delta);
        let map = Moebius::Affine { alpha: q(an, ad), beta: q(bn, bd) };
        let mult = Multipliers::from_x_y(&Rationals, q(sn, sd), q(yn, yd)).unwrap();
        let out = apply_moebius(&fam, &map, &mult).unwrap();
        prop_assert_eq!(fam.is_identity(), out.is_identity());
        prop_assert_eq!(fam.is_identity(), delta == 0);
        let [_, a, b, _, _] = fam.dense();
        let [_, a2, b2, _, _] = out.dense();
        prop_assert_eq!(classify_degenerate(&Rationals, &a, &b), classify_degenerate(&Rationals, &a2, &b2));

        // A = −3u², B = 2u³ is degenerate in every coordinate.
        let u: Dense<Rationals> = vec![q(bn, bd), q(an, ad)];
        let da = dense::scale(&Rationals, &dense::mul(&Rationals, &u, &u), &q(-3, 1));
        let db = dense::scale(&Rationals, &dense::pow(&Rationals, &u, 3), &q(2, 1));
        let g = vec![q(bn, bd), q(an, ad)];
        let (sa, sb) = (q(sn, sd) * q(sn, sd), q(sn, sd) * q(sn, sd) * q(sn, sd));
        let da2 = dense::scale(&Rationals, &dense::compose(&Rationals, &da, &g), &sa);
        let db2 = dense::scale(&Rationals, &dense::compose(&Rationals, &db, &g), &sb);
        prop_assert!(classify_degenerate(&Rationals, &da, &db).is_degenerate());
        prop_assert!(classify_degenerate(&Rationals, &da2, &db2).is_degenerate());
    }

    /// `verify_identity` passes exactly when Y can be recovered as ±Y.
    #[test]
    fn identity_iff_recoverable(which in 0usize..4, delta in prop_oneof![Just(0i64), -3i64..=3]) {
        let fam = perturbed_final(which, delta);
        let rec = recover_y(&fam.x, &fam.a, &fam.b, &fam.q);
        let recovered = rec.is_some_and(|y| y == fam.y || y == fam.y.neg_poly());
        prop_assert_eq!(verify_identity(&fam).pass, recovered);
    }
}

fn planted_system(n: usize, polys: &[MPoly<Integers>], point: &[i64]) -> Option<PolySystem> {
    let pt: Vec<BigInt> = point[..n].iter().map(|&v| v.into()).collect();
    let eqs: Vec<MPoly<Integers>> = polys
        .iter()
        .map(|g| g.sub_poly(&MPoly::constant(Integers, g.vars().clone(), g.eval(&pt))))
        .collect();
    let sys = PolySystem::new(vars(n), eqs).ok()?;
    (sys.len() == n).then_some(sys)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// The incremental scan finds exactly the points a plain re-scan finds,
    /// and the parallel scan matches the serial one.
    #[test]
    fn scan_is_exhaustive((n, polys) in (1usize..=3).prop_flat_map(|n| (Just(n), prop::collection::vec(int_poly(n, 3, 4), n))),
                          point in prop::collection::vec(-9i64..=9, 3), pi in 0usize..3) {
        let p = [3u64, 5, 7][pi];
        let Some(sys) = planted_system(n, &polys, &point) else { return Ok(()); };
        let serial = scan_local(&sys, p, &ScanOptions { fixed: vec![], parallel: false }).unwrap();
        let parallel = scan_local(&sys, p, &ScanOptions { fixed: vec![], parallel: true }).unwrap();
        prop_assert_eq!(&serial, &parallel);
        let coords: Vec<Vec<u64>> = serial.iter().map(|s| s.coords.clone()).collect();
        prop_assert_eq!(coords.clone(), scan_local_naive(&sys, p));
        let seed: Vec<u64> = point[..n].iter().map(|&v| v.rem_euclid(p as i64) as u64).collect();
        prop_assert!(coords.contains(&seed));
        if let Ok(pt) = newton_lift(&sys, &seed, p, 8) {
            let back: Vec<u64> = pt.coords.iter().map(|c| pellforge::padic::shadow(c, p)).collect();
            prop_assert_eq!(back, seed);
        }
    }

    #[test]
    fn lll_output_is_reduced(rows in (2usize..=5).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-1000i64..=1000, n), n))) {
        let basis: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| v.into()).collect()).collect();
        let Ok(res) = lll_reduce(&IntLattice { basis: basis.clone() }) else { return Ok(()); };
        prop_assert!(is_lll_reduced(&res.lattice));
        let n = basis.len();
        for i in 0..n {
            for j in 0..n {
                let v: BigInt = (0..n).map(|k| &res.transform[i][k] * &basis[k][j]).sum();
                prop_assert_eq!(&v, &res.lattice.basis[i][j]);
            }
        }
    }

    /// Round trip at 101^128 for primitive polynomials of degree ≤ 6 with
    /// coefficients up to 10⁴, and stability of the verdict at double
    /// precision.
    #[test]
    fn algdep_recovers_planted_minpoly(c in prop::collection::vec(-10_000i64..=10_000, 1..=6), lead in 1i64..=10_000) {
        let p = 101u64;
        let mut f: Vec<BigInt> = c.iter().map(|&v| v.into()).collect();
        f.push(lead.into());
        let g = pellforge::arith::gcd_all(f.iter());
        let f: Vec<BigInt> = f.iter().map(|x| x / &g).collect();
        let field = PrimeField::new(p);
        let fp: Vec<u64> = f.iter().map(|v| field.reduce_int(v)).collect();
        let Some(r0) = roots_mod_p(&field, &fp).into_iter().find(|&r| lift_simple_root(&f, &BigInt::from(r), p, 2).is_some()) else {
            return Ok(());
        };
        let a = lift_simple_root(&f, &BigInt::from(r0), p, 128).unwrap();
        let top = &algdep(&a, p, 128, f.len() - 1)[0];
        prop_assert!(top.verified);
        let qf: Vec<BigRational> = f.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let qt: Vec<BigRational> = top.poly.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let (_, rem) = dense::divrem(&Rationals, &qf, &qt).unwrap();
        prop_assert!(dense::trimmed(&Rationals, rem).is_empty());
        let a2 = lift_simple_root(&f, &BigInt::from(r0), p, 256).unwrap();
        let top2 = &algdep(&a2, p, 256, f.len() - 1)[0];
        prop_assert!(top2.verified);
        prop_assert_eq!(&top2.poly, &top.poly);
    }

    #[test]
    fn unit_action_preserves_the_form(c2 in 1i64..=40, c1 in -40i64..=40, c0 in -40i64..=40, kappa in 1i64..=3) {
        let (c2, c1, c0, kappa) = (BigInt::from(c2), BigInt::from(c1), BigInt::from(c0), BigInt::from(kappa));
        let Ok(form) = conic_reduce(&c2, &c1, &c0, &kappa) else { return Ok(()); };
        let Ok(orbit) = PellOrbit::new(form) else { return Ok(()); };
        let (uu, vv) = &orbit.unit;
        let d = &orbit.form.d;
        prop_assert!((uu * uu - d * vv * vv).is_one());
        for (u, s) in &orbit.seeds {
            let (u2, s2) = (uu * u + d * vv * s, vv * u + uu * s);
            prop_assert_eq!(&u2 * &u2 - d * &s2 * &s2, orbit.form.n.clone());
        }
    }

    #[test]
    fn unit_points_solve_q(i in -2i64..=2, j in -2i64..=2, k in -2i64..=2) {
        let d = Case2Data::load();
        let pt = pell::nf_unit_point(&d, i, j, k).unwrap();
        let qt = d.c2.mul(&pt.t).mul(&pt.t).add(&d.c1.mul(&pt.t)).add(&d.c0);
        prop_assert_eq!(pt.w.mul(&pt.w), qt);
        prop_assert_eq!(pt.u.mul(&pt.u).sub(&d.c2.mul(&pt.v).mul(&pt.v)), d.field.int(1));
    }
}

#[test]
fn rational_reconstruct_exhaustive_small_moduli() {
    for p in [2u64, 3, 5, 7] {
        for k in 1..=4u32 {
            let m = BigInt::from(p).pow(k);
            let bound = ((&m - 1u32) / 2u32).sqrt();
            let mu = m.to_string().parse::<i64>().unwrap();
            let bi = bound.to_string().parse::<i64>().unwrap();
            for a in 0..mu {
                let brute: Vec<(i64, i64)> = (1..=bi)
                    .filter(|d| d % p as i64 != 0)
                    .flat_map(|d| (-bi..=bi).map(move |n| (n, d)))
                    .filter(|&(n, d)| (n - a * d).rem_euclid(mu) == 0)
                    .collect();
                let got = rational_reconstruct(&a.into(), p, k);
                match got {
                    Some(r) => {
                        let (n, d) = (r.numer().to_string().parse::<i64>().unwrap(), r.denom().to_string().parse::<i64>().unwrap());
                        assert!(brute.contains(&(n, d)), "p={p} k={k} a={a} got {r}");
                    }
                    None => assert!(brute.is_empty(), "p={p} k={k} a={a} missed {brute:?}"),
                }
            }
        }
    }
}

#[test]
fn records_are_points_and_rho_climbs_toward_12() {
    let pts = pell::integral_points(&known::case1_final_model(), &BigInt::one(), 30).unwrap();
    for r in &pts {
        let qv = known::case1_final_model().q.to_dense(0).unwrap();
        let qt = dense::eval(&Rationals, &qv, &BigRational::from_integer(r.t.clone()));
        assert!(qt.is_integer() && pellforge::arith::is_square(&qt.to_integer()));
        assert_eq!(&r.y * &r.y, &r.x * &r.x * &r.x + &r.a * &r.x + &r.b);
    }
    let rhos: Vec<f64> = pts.iter().map(|r| r.rho.unwrap()).collect();
    assert!(rhos.iter().all(|&r| r < 12.0));
    assert!(rhos.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn corpus_is_deterministic() {
    let a = verify_corpus().to_json();
    let b = verify_corpus().to_json();
    assert_eq!(a, b);
    let back: Certificate = serde_json::from_str(&a).unwrap();
    assert_eq!(back.to_json(), a);
}

#[test]
fn serialization_round_trips() {
    let fam = known::case1_final_model();
    assert_eq!(EpzFamily::from_json(&fam.to_json()).unwrap(), fam);
    let letter = known::letter_model();
    assert_eq!(EpzFamily::from_json(&letter.to_json()).unwrap(), letter);

    let sys = pellforge::elim::reduce_case1().unwrap().2;
    let back = PolySystem::from_json_str(&sys.to_json_string()).unwrap();
    assert_eq!(back.to_json_string(), sys.to_json_string());
    assert_eq!(back.eqs(), sys.eqs());

    let pt = PadicPoint { p: 17, k: 64, coords: vec![BigInt::from(17).pow(64) - 1u32, BigInt::from(5)] };
    let s = serde_json::to_string(&pt).unwrap();
    assert!(s.contains(&(BigInt::from(17).pow(64) - 1u32).to_string()));
    assert_eq!(serde_json::from_str::<PadicPoint>(&s).unwrap(), pt);

    let recs = pell::integral_points(&known::letter_model(), &BigInt::from(2), 18).unwrap();
    let s = serde_json::to_string(&recs).unwrap();
    assert!(s.contains("\"-48926085100653611109021839\""));
    let back: Vec<pell::IntegralPointRecord> = serde_json::from_str(&s).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), s);

    let orbit = pell::family_orbit(&letter, &BigInt::from(2)).unwrap();
    let s = serde_json::to_string(&orbit).unwrap();
    assert_eq!(serde_json::from_str::<PellOrbit>(&s).unwrap(), orbit);

    let cands = algdep(&BigInt::from(10), 7, 6, 2);
    let s = serde_json::to_string(&cands).unwrap();
    assert_eq!(serde_json::from_str::<Vec<MinPolyCandidate>>(&s).unwrap(), cands);
    assert!(cands[0].poly.iter().all(|c| c.abs() < BigInt::from(1000)));
}
