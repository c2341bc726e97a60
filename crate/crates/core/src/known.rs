//! Published families and number-field data, kept as exact values so the
//! pipeline can be checked against them.

use num_bigint::BigInt;

use crate::builder::EpzFamily;
use crate::exactpoly::{parse_poly, MPoly, Vars};
use crate::numfield::{NFElem, NumberField, RelQuadElem};
use crate::ring::{PrimeField, Rationals};

fn fam(x: &str, a: &str, b: &str, q: &str, y: &str) -> EpzFamily<Rationals> {
    EpzFamily::parse(x, a, b, q, y).expect("well-formed literal")
}

/// The (0,1,2,4,5) model normalized so that `Q(1) = 2²`.
pub fn case1_final_model() -> EpzFamily<Rationals> {
    fam(
        "6*(108*t^4 - 120*t^3 + 72*t^2 - 28*t + 5)",
        "132",
        "-144*(8*t - 1)",
        "2*(9*t^2 - 10*t + 3)",
        "72*(54*t^5 - 60*t^4 + 45*t^3 - 21*t^2 + 6*t - 1)",
    )
}

/// The same family with `A = 33`, as it appears in the 1988 letter.
pub fn letter_model() -> EpzFamily<Rationals> {
    fam(
        "324*t^4 - 360*t^3 + 216*t^2 - 84*t + 15",
        "33",
        "-18*(8*t - 1)",
        "9*t^2 - 10*t + 3",
        "36*(54*t^5 - 60*t^4 + 45*t^3 - 21*t^2 + 6*t - 1)",
    )
}

/// Multipliers `(4, 8, 2)` on `(A, B, X)` that turn the letter model into
/// integral points whenever `2Q(t)` is a square.
pub const LETTER_KAPPA: i64 = 2;

/// Danilov's identity `(t²+10t+5)³ − (t²+22t+125)(t²+4t−1)² = 1728t`, as
/// `(lhs, rhs)` over ℚ[t].
pub fn danilov_identity() -> (MPoly<Rationals>, MPoly<Rationals>) {
    let v = Vars::new(&["t"]);
    let lhs = parse_poly("(t^2+10*t+5)^3 - (t^2+22*t+125)*(t^2+4*t-1)^2", &v).unwrap();
    let rhs = parse_poly("1728*t", &v).unwrap();
    (lhs, rhs)
}

/// Case II number-field data: the quartic field, its named primes and
/// units, the Pell quadratic `Q` and the published `X, A, B`.
#[derive(Clone, Debug)]
pub struct Case2Data {
    pub field: NumberField,
    pub p2: NFElem,
    pub q2: NFElem,
    pub r2: NFElem,
    pub p3: NFElem,
    pub eta1: NFElem,
    pub eta2: NFElem,
    pub beta: NFElem,
    pub c2: NFElem,
    pub c1: NFElem,
    pub c0: NFElem,
    /// `q₂βη₂`, printed as `49θ³+41θ²−77θ+33`.
    pub sqrt_c0: NFElem,
    pub x: MPoly<NumberField>,
    pub a: MPoly<NumberField>,
    pub b: MPoly<NumberField>,
    pub q: MPoly<NumberField>,
    /// Units of relative norm 1 in `K(√c₂)`.
    pub f: [RelQuadElem; 3],
    /// Raw coordinates `(x2, x3, x4, q0)` in the template normalization.
    /// The printed polynomials are in `−θ`, a root of `z⁴+2z³−4z²−5z−2`.
    pub raw: [(String, NFElem); 4],
}

pub const CASE2_FIELD: &str = "z^4 - 2*z^3 - 4*z^2 + 5*z - 2";
pub const CASE2_SQRT_C0: &str = "49*z^3 + 41*z^2 - 77*z + 33";
pub const CASE2_RAW: [(&str, &str); 4] = [
    ("x2", "(9069984*z^3 + 66428384*z^2 + 19934816*z - 283298787)/2430000"),
    ("x3", "(20240*z^3 + 70576*z^2 - 121616*z - 441839)/6750"),
    ("x4", "(-5808*z^3 - 7568*z^2 + 33968*z + 23959)/900"),
    ("q0", "(2576*z^3 + 3760*z^2 - 8720*z + 10971)/2700"),
];

/// Norm of `X(t)/A(t)⁶` as `t → ∞`, published as `1/(2⁵⁶·3²⁰·17⁶·3271¹¹)`.
pub fn case2_norm_ratio_printed() -> num_rational::BigRational {
    let d = BigInt::from(2).pow(56) * BigInt::from(3).pow(20) * BigInt::from(17).pow(6) * BigInt::from(3271).pow(11);
    num_rational::BigRational::new(1.into(), d)
}

/// `f(−θ)` for `f(θ)` in the power basis.
fn at_neg_theta(a: &NFElem) -> NFElem {
    let coords: Vec<_> = a.coords().iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
    a.field().elem(&coords)
}

/// Product `k · Π fᵢ^eᵢ`.
fn prod(k: &NumberField, scalar: i64, factors: &[(&NFElem, i64)]) -> NFElem {
    factors
        .iter()
        .fold(k.int(scalar), |acc, (f, e)| acc.mul(&f.pow(*e).expect("nonzero factor")))
}

impl Case2Data {
    pub fn load() -> Self {
        Self::load_with(|_, c| c)
    }

    /// Loads with a hook that may alter any `t`-coefficient before it is
    /// stored; the hook sees names like `X5` or `A0`.
    pub fn load_with(edit: impl Fn(&str, NFElem) -> NFElem) -> Self {
        let k = NumberField::parse(CASE2_FIELD).expect("irreducible quartic");
        let e = |s: &str| k.parse_elem(s).expect("element literal");
        let th = k.theta();
        let p2 = th.clone();
        let q2 = e("z - 1");
        let r2 = e("z^2 - z - 5");
        let p3 = e("2*z^2 - 2*z + 1");
        let eta1 = e("z^3 + z^2 - 2*z + 1");
        let eta2 = e("z^3 - 3*z + 1");
        let beta = e("2*z^3 + 2*z^2 - 6*z - 3");

        let c2 = prod(&k, 3, &[(&p2, 7), (&q2, 1), (&beta, 1), (&eta1, 2), (&eta2, -1)]);
        let c1 = prod(&k, 2, &[(&q2, 3), (&eta1, 2), (&beta, 1), (&e("z^3 - z^2 + 11"), 1)]);
        let c0 = prod(&k, 1, &[(&q2, 2), (&beta, 2), (&eta2, 2)]);
        let sqrt_c0 = prod(&k, 1, &[(&q2, 1), (&beta, 1), (&eta2, 1)]);

        let xc = [
            prod(&k, 1, &[(&q2, 1), (&beta, 1), (&eta1, 1), (&eta2, 2), (&e("190035*z^3 + 199008*z^2 - 174189*z + 50449"), 1)]),
            prod(
                &k,
                2,
                &[(&q2, 2), (&r2, 2), (&p3, 1), (&beta, 1), (&eta1, 3), (&eta2, 1), (&e("7081*z^3 - 854*z^2 + 90791*z - 23035"), 1)],
            ),
            prod(&k, 12, &[(&q2, 2), (&p3, 1), (&beta, 1), (&eta1, 3), (&e("40374*z^3 + 47422*z^2 - 61976*z + 37707"), 1)]),
            prod(&k, 24, &[(&q2, 1), (&beta, 1), (&eta1, 6), (&eta2, -2), (&e("25901*z^3 + 32060*z^2 - 52457*z + 15455"), 1)]),
            prod(&k, 4 * 27, &[(&q2, 1), (&beta, 1), (&eta1, 8), (&eta2, -3), (&e("1463*z^3 - 2436*z^2 - 2667*z + 1903"), 1)]),
            prod(&k, 8 * 81, &[(&q2, 5), (&r2, 1), (&beta, 1), (&eta1, 9), (&eta2, -4), (&e("17*z^3 + 2*z^2 - 71*z + 33"), 1)]),
            prod(&k, 16 * 81, &[(&p2, 5), (&q2, 7), (&beta, 1), (&eta1, 8), (&eta2, -4)]),
        ];
        let s = e("z^3 - z + 1");
        let ac = [
            prod(&k, -1, &[(&q2, 2), (&p3, 1), (&beta, 2), (&eta1, -1), (&eta2, -2), (&s, 1), (&e("9*z^3 - 2*z^2 + 5*z + 9"), 1)]),
            prod(&k, -12, &[(&q2, 4), (&r2, 1), (&p3, 1), (&beta, 2), (&eta1, 1), (&eta2, -3), (&s, 1)]),
        ];
        let tw = e("2*z - 1");
        let bc = [
            prod(&k, -1, &[(&q2, 4), (&r2, 1), (&beta, 3), (&eta1, -1), (&eta2, -3), (&tw, 4), (&e("4*z^3 + 18*z^2 - 16*z + 1"), 1)]),
            prod(&k, -6, &[(&q2, 7), (&r2, 2), (&beta, 3), (&eta1, 1), (&eta2, -4), (&tw, 4)]),
        ];
        let tv = Vars::new(&["t"]);
        let poly = |name: &str, cs: &[NFElem]| {
            let cs: Vec<NFElem> = cs.iter().enumerate().map(|(i, c)| edit(&format!("{name}{i}"), c.clone())).collect();
            MPoly::from_dense(k.clone(), tv.clone(), 0, &cs)
        };
        let x = poly("X", &xc);
        let a = poly("A", &ac);
        let b = poly("B", &bc);
        let q = poly("Q", &[c0.clone(), c1.clone(), c2.clone()]);

        let f = [
            RelQuadElem::new(
                prod(&k, 1, &[(&r2, 1), (&eta1, -1), (&eta2, 1), (&e("3*z^3 - 19*z^2 + 20*z - 5"), 1)]),
                prod(&k, 1, &[(&p2, -1), (&q2, 1), (&p3, -1), (&eta1, -3), (&eta2, 1), (&e("z^3 + 2*z^2 - z + 1"), 1)]),
            ),
            RelQuadElem::new(
                prod(&k, 1, &[(&eta1, 1), (&eta2, -1), (&e("19*z^3 - 51*z^2 + 38*z - 5"), 1)]),
                prod(&k, 4, &[(&p2, 4), (&p3, -1), (&eta1, -1), (&eta2, -1)]),
            ),
            RelQuadElem::new(
                prod(&k, 1, &[(&r2, 1), (&eta1, 1), (&eta2, 1), (&e("19*z^3 - 14*z^2 - 71*z - 41"), 1)]),
                prod(&k, 1, &[(&p2, 1), (&q2, 2), (&eta1, -4), (&eta2, 3), (&e("6*z^2 - 2*z + 1"), 1)]),
            ),
        ];
        let raw = CASE2_RAW.map(|(n, s)| (n.to_string(), at_neg_theta(&e(s))));
        Case2Data { field: k, p2, q2, r2, p3, eta1, eta2, beta, c2, c1, c0, sqrt_c0, x, a, b, q, f, raw }
    }
}

/// The (1,2,2,8,11) model over 𝔽₁₉ as `(X, A, B, Q)`.
pub fn case3_mod19() -> (PrimeField, [MPoly<PrimeField>; 4]) {
    let f = PrimeField::new(19);
    let v = Vars::new(&["t"]);
    let red = |s: &str| {
        let p = parse_poly(s, &v).unwrap();
        p.map_coeffs(f.clone(), |c| f.reduce_int(c.numer()))
    };
    let polys = [
        red("t^8 + t^7 + 6*t^6 + 16*t^5 + 8*t^3 + 4*t^2 + 12"),
        red("16*t + 15"),
        red("17*t^2 + 6*t + 14"),
        red("t^2 + 3*t + 13"),
    ];
    (f, polys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn final_models_satisfy_identity() {
        assert!(case1_final_model().is_identity());
        assert!(letter_model().is_identity());
    }

    #[test]
    fn danilov() {
        let (l, r) = danilov_identity();
        assert_eq!(l, r);
    }

    #[test]
    fn case2_degrees_and_sqrt_c0() {
        let d = Case2Data::load();
        assert_eq!(d.x.degree_in(0), 6);
        assert_eq!(d.a.degree_in(0), 1);
        assert_eq!(d.sqrt_c0, d.field.parse_elem(CASE2_SQRT_C0).unwrap());
        assert_eq!(d.sqrt_c0.mul(&d.sqrt_c0), d.c0);
    }
}
