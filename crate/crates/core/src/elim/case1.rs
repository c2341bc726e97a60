//! Signature (0,1,2,4,5) solved exactly over the rationals.

use num_rational::BigRational;

use super::{back_substitute, reduce, solve_system, ElimError, PolySystem, ReduceOptions, SolutionSet};
use crate::builder::{equate_coefficients, make_template, EpzFamily, EpzTemplate, Signature};
use crate::ring::Rationals;

/// Variables kept through the linear phase.
pub const CASE1_PROTECTED: [&str; 4] = ["x0", "x1", "x2", "q0"];

#[derive(Clone, Debug)]
pub struct Case1Solution {
    pub template: EpzTemplate,
    /// The 12 coefficient equations.
    pub system: PolySystem,
    /// The 4 equations in `x0, x1, x2, q0` with their trail.
    pub reduced: PolySystem,
    pub solutions: SolutionSet,
    /// Every unknown at each isolated point, in template order.
    pub full: Vec<Vec<(String, BigRational)>>,
    /// The family realized by each isolated point.
    pub families: Vec<EpzFamily<Rationals>>,
}

pub fn case1_signature() -> Signature {
    Signature { a: 0, b: 1, q: 2, x: 4, y: 5 }
}

/// The Case I system reduced by constant-coefficient substitutions.
pub fn reduce_case1() -> Result<(EpzTemplate, PolySystem, PolySystem), ElimError> {
    let tpl = make_template(case1_signature()).expect("consistent signature");
    let sys = equate_coefficients(&tpl)?;
    let opts = ReduceOptions {
        protected: CASE1_PROTECTED.iter().map(|s| s.to_string()).collect(),
        target_vars: None,
        permissive_steps: 0,
    };
    let red = reduce(&sys, &opts)?;
    Ok((tpl, sys, red))
}

/// Reduces, solves the reduced system, and back-substitutes every isolated
/// point, checking the original 12 equations and the assembled identity.
pub fn solve_case1() -> Result<Case1Solution, ElimError> {
    let (template, system, reduced) = reduce_case1()?;
    let solutions = solve_system(&reduced)?;
    let mut full = Vec::new();
    let mut families = Vec::new();
    for p in &solutions.isolated {
        let point: Vec<(String, BigRational)> =
            reduced.vars().names().iter().cloned().zip(p.iter().cloned()).collect();
        let all = back_substitute(&reduced, &Rationals, &point)?;
        let values: Vec<BigRational> = all.iter().map(|(_, v)| v.clone()).collect();
        if !super::is_solution(&system, &values) {
            return Err(ElimError::Format("back-substituted point fails the original system".into()));
        }
        let fam = template.instantiate(&Rationals, &all).map_err(|e| ElimError::Format(e.to_string()))?;
        if !fam.is_identity() {
            return Err(ElimError::Format("assembled family fails the identity".into()));
        }
        full.push(all);
        families.push(fam);
    }
    Ok(Case1Solution { template, system, reduced, solutions, full, families })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{parse_ratfunc, Vars};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn reduces_to_four_equations() {
        let (_, sys, red) = reduce_case1().unwrap();
        assert_eq!(sys.len(), 12);
        assert_eq!(red.len(), 4);
        assert_eq!(red.vars().names(), &["x0", "x1", "x2", "q0"]);
    }

    #[test]
    fn isolated_point_and_back_substitution() {
        let s = solve_case1().unwrap();
        assert_eq!(s.solutions.isolated, vec![vec![q(311, 64), q(61, 8), q(9, 2), q(11, 4)]]);
        let get = |n: &str| s.full[0].iter().find(|(m, _)| m == n).unwrap().1.clone();
        let want = [
            ("y0", q(715, 64)),
            ("y1", q(165, 16)),
            ("y2", q(77, 16)),
            ("y3", q(55, 8)),
            ("q1", q(3, 1)),
            ("a0", q(216513, 4096)),
            ("b0", q(-3720087, 131072)),
            ("b1", q(531441, 8192)),
        ];
        for (n, v) in want {
            assert_eq!(get(n), v, "{n}");
        }
    }

    #[test]
    fn parametric_families_match_printed() {
        let s = solve_case1().unwrap();
        let vars = s.reduced.vars().clone();
        // parameters named after the coordinates they equal: u = x2, then u = x0, v = q0
        let printed = |params: &[&str], cs: [&str; 4]| {
            let pv = Vars::new(params);
            crate::elim::Family { coords: cs.iter().map(|c| parse_ratfunc(c, &pv).unwrap()).collect(), params: pv }
        };
        let f1 = printed(&["x2"], ["(16*x2^2 - 200*x2 - 239)/192", "(4*x2 - 1)/8", "x2", "9/4"]);
        let f2 = printed(&["x0", "q0"], ["x0", "-2*q0 + 3", "q0 - 5", "q0"]);
        assert_eq!(s.solutions.parametric.len(), 2);
        for want in [&f1, &f2] {
            let hit = s
                .solutions
                .parametric
                .iter()
                .filter(|got| want.subset_of(got, &vars, 5) && got.subset_of(want, &vars, 5))
                .count();
            assert_eq!(hit, 1);
        }
        let at0 = f1.at(&[q(0, 1)]).unwrap();
        assert!(crate::elim::is_solution(&s.reduced, &at0));
    }

    #[test]
    fn raw_solution_maps_to_final_model() {
        use crate::builder::{apply_moebius, Moebius, Multipliers};
        let s = solve_case1().unwrap();
        let raw = &s.families[0];
        let sc = q(128, 81);
        let m = Multipliers {
            sx: sc.clone(),
            sy: q(-4, 3) * &sc,
            sq: q(9, 16) * &sc,
            sa: &sc * &sc,
            sb: &sc * &sc * &sc,
        };
        let out = apply_moebius(raw, &Moebius::Affine { alpha: q(-9, 2), beta: q(1, 1) }, &m).unwrap();
        let want = EpzFamily::parse(
            "6*(108*t^4 - 120*t^3 + 72*t^2 - 28*t + 5)",
            "132",
            "-144*(8*t - 1)",
            "2*(9*t^2 - 10*t + 3)",
            "72*(54*t^5 - 60*t^4 + 45*t^3 - 21*t^2 + 6*t - 1)",
        )
        .unwrap();
        assert_eq!(out.x, want.x);
        assert_eq!(out.a, want.a);
        assert_eq!(out.b, want.b);
        assert_eq!(out.q, want.q);
        assert!(out.y == want.y || out.y == want.y.neg_poly());
        assert!(out.is_identity());
    }
}
