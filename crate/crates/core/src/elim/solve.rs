//! Rational solution sets of small systems by case splitting.
//!
//! Linear occurrences are substituted (splitting on whether the coefficient
//! vanishes), univariate equations are solved over the rationals, common
//! factors split the variety, and otherwise one variable is removed by
//! resultants and recovered afterwards as a common root. Only rational
//! components are reported.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::system::{normalize_eq, PolySystem};
use super::ElimError;
use crate::exactpoly::{mpoly_gcd, resultant, substitute_ratfunc, MPoly, RatFunc, RatFuncField, Vars};
use crate::ring::{Integers, Rationals, Ring};

/// A parametrized family: `coords[i]` is the value of the `i`-th system
/// variable as a rational function of the parameters. Parameters are named
/// after the system variables they replace.
#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    pub params: Vars,
    pub coords: Vec<RatFunc>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSet {
    pub vars: Vars,
    pub isolated: Vec<Vec<BigRational>>,
    pub parametric: Vec<Family>,
}

impl Family {
    pub fn dimension(&self) -> usize {
        self.params.len()
    }

    /// Point at rational parameter values, `None` where a denominator vanishes.
    pub fn at(&self, params: &[BigRational]) -> Option<Vec<BigRational>> {
        self.coords.iter().map(|c| c.eval(params)).collect()
    }

    /// Whether `point` (one value per system variable) lies on the family.
    pub fn contains(&self, vars: &Vars, point: &[BigRational]) -> bool {
        let mut ps = Vec::with_capacity(self.params.len());
        for n in self.params.names() {
            match vars.index_of(n) {
                Some(i) => ps.push(point[i].clone()),
                None => return false,
            }
        }
        self.at(&ps).is_some_and(|p| p == point)
    }

    /// Deterministic sample points at small parameter values avoiding poles.
    pub fn samples(&self, count: usize) -> Vec<Vec<BigRational>> {
        let mut out = Vec::new();
        let mut k: i64 = 0;
        while out.len() < count && k < 1000 {
            let ps: Vec<BigRational> = (0..self.params.len())
                .map(|j| BigRational::new(BigInt::from(3 * k + 2 * j as i64 + 1), BigInt::from(j as i64 + 2)))
                .collect();
            if let Some(p) = self.at(&ps) {
                out.push(p);
            }
            k += 1;
        }
        out
    }

    /// Extensional inclusion `self ⊆ other`, tested at sample points.
    pub fn subset_of(&self, other: &Family, vars: &Vars, samples: usize) -> bool {
        self.samples(samples).iter().all(|p| other.contains(vars, p))
    }

    /// Human-readable coordinates with parameters renamed `u, v, w, ...`.
    pub fn display(&self) -> Vec<String> {
        let letters = ["u", "v", "w", "r", "s"];
        let names: Vec<String> =
            (0..self.params.len()).map(|i| letters.get(i).map_or(format!("p{i}"), |s| s.to_string())).collect();
        let renamed = Vars::new(&names);
        self.coords
            .iter()
            .map(|c| {
                RatFunc::new(c.num().with_renamed_vars(renamed.clone()), c.den().with_renamed_vars(renamed.clone()))
                    .expect("renaming keeps a nonzero denominator")
                    .to_string()
            })
            .collect()
    }
}

#[derive(Clone)]
enum Sub {
    Linear(usize, RatFunc),
    Value(usize, BigRational),
    /// Recovered as a common root of the pivot and partners.
    Root(usize, MPoly<Integers>, Vec<MPoly<Integers>>),
}

#[derive(Clone)]
struct Branch {
    eqs: Vec<MPoly<Integers>>,
    subs: Vec<Sub>,
    nonzero: Vec<MPoly<Integers>>,
    depth: usize,
}

const MAX_DEPTH: usize = 64;

struct Solver {
    vars: Vars,
    /// Components as (parameters, coordinates over the full variable list).
    found: Vec<(Vec<usize>, Vec<RatFunc>)>,
}

fn clear_substitute(e: &MPoly<Integers>, i: usize, r_neg: &MPoly<Integers>, c: &MPoly<Integers>) -> MPoly<Integers> {
    let expr = RatFunc::new(r_neg.clone(), c.clone()).expect("nonzero coefficient");
    let s = substitute_ratfunc(e, &e.vars().names()[i].clone(), &expr).expect("same variables");
    s.num().clone()
}

/// Divides out the nonvanishing factor `f`; `None` when `p` is a constant
/// multiple of a power of `f`, i.e. cannot vanish.
fn strip(mut p: MPoly<Integers>, f: &MPoly<Integers>) -> Option<MPoly<Integers>> {
    if f.is_constant() {
        return Some(p);
    }
    while let Some(q) = p.try_div(f) {
        if q.is_constant() {
            return None;
        }
        p = q;
    }
    Some(p)
}

impl Solver {
    fn run(&mut self, mut b: Branch) -> Result<(), ElimError> {
        if b.depth > MAX_DEPTH {
            return Err(ElimError::DepthExceeded);
        }
        b.depth += 1;
        let mut eqs: Vec<MPoly<Integers>> = Vec::new();
        for e in b.eqs.drain(..) {
            let Some(e) = normalize_eq(e) else { continue };
            if e.is_constant() {
                return Ok(());
            }
            let mut e = e;
            for f in &b.nonzero {
                match strip(e, f) {
                    Some(s) => e = s,
                    None => return Ok(()),
                }
            }
            if !eqs.contains(&e) {
                eqs.push(e);
            }
        }
        b.eqs = eqs;
        if b.eqs.is_empty() {
            return self.finish(&b);
        }
        let n = self.vars.len();

        // linear occurrence, constant coefficients first
        let mut best: Option<((bool, usize, u32, usize, usize), usize, usize)> = None;
        for (j, e) in b.eqs.iter().enumerate() {
            for i in 0..n {
                if e.degree_in(i) == 1 {
                    let c = e.coeff_at(i, 1);
                    let key = (!c.is_constant(), c.len(), c.total_degree(), e.len(), i);
                    if best.as_ref().map_or(true, |(k, _, _)| key < *k) {
                        best = Some((key, j, i));
                    }
                }
            }
        }
        if let Some(((nonconst, ..), j, i)) = best {
            let e = &b.eqs[j];
            let c = e.coeff_at(i, 1).embed(&self.vars)?;
            let r_neg = e.coeff_at(i, 0).neg_poly().embed(&self.vars)?;
            let c_prim = c.primitive();
            let mut a = Branch {
                eqs: Vec::new(),
                subs: b.subs.clone(),
                nonzero: b.nonzero.clone(),
                depth: b.depth,
            };
            for (k, o) in b.eqs.iter().enumerate() {
                if k == j {
                    continue;
                }
                let s = if o.contains_var(i) { clear_substitute(o, i, &r_neg, &c) } else { o.clone() };
                a.eqs.push(s);
            }
            a.subs.push(Sub::Linear(i, RatFunc::new(r_neg.clone(), c.clone())?));
            if nonconst {
                a.nonzero.push(c_prim.clone());
                let mut z = b.clone();
                z.eqs[j] = r_neg;
                z.eqs.push(c);
                self.run(a)?;
                return self.run(z);
            }
            return self.run(a);
        }

        // a univariate equation: rational roots
        if let Some((j, i)) = b.eqs.iter().enumerate().find_map(|(j, e)| {
            let s = e.support();
            (s.len() == 1).then(|| (j, s[0]))
        }) {
            let dense = b.eqs[j].to_rational().to_dense(i)?;
            for (root, _) in crate::exactpoly::roots::rational_roots(&dense) {
                let mut z = b.clone();
                z.eqs = b
                    .eqs
                    .iter()
                    .map(|e| specialize_keep(e, i, &root))
                    .collect();
                z.subs.push(Sub::Value(i, root));
                self.run(z)?;
            }
            return Ok(());
        }

        // split along a common factor
        for x in 0..b.eqs.len() {
            for y in x + 1..b.eqs.len() {
                let g = mpoly_gcd(&b.eqs[x], &b.eqs[y]);
                if !g.is_constant() {
                    let mut with_g = b.clone();
                    with_g.eqs[x] = g.clone();
                    with_g.eqs.remove(y);
                    let mut without = b.clone();
                    without.eqs[x] = b.eqs[x].exact_div(&g)?;
                    without.eqs[y] = b.eqs[y].exact_div(&g)?;
                    self.run(with_g)?;
                    return self.run(without);
                }
            }
        }

        // resultant in the variable of smallest degree
        let i = (0..n)
            .filter(|&i| b.eqs.iter().any(|e| e.contains_var(i)))
            .min_by_key(|&i| {
                let d = b.eqs.iter().map(|e| e.degree_in(i)).max().unwrap_or(0);
                let t: usize = b.eqs.iter().filter(|e| e.contains_var(i)).map(|e| e.len()).sum();
                (d, t, i)
            })
            .expect("nonconstant equations");
        let name = self.vars.names()[i].clone();
        let (pj, pivot) = b
            .eqs
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains_var(i))
            .min_by_key(|(j, e)| (e.degree_in(i), e.len(), *j))
            .map(|(j, e)| (j, e.clone()))
            .expect("variable occurs");
        let mut next = Branch { eqs: Vec::new(), subs: b.subs.clone(), nonzero: b.nonzero.clone(), depth: b.depth };
        let mut partners = Vec::new();
        for (k, e) in b.eqs.iter().enumerate() {
            if k == pj {
                continue;
            }
            if e.contains_var(i) {
                partners.push(e.clone());
                next.eqs.push(resultant(&pivot, e, &name)?);
            } else {
                next.eqs.push(e.clone());
            }
        }
        next.subs.push(Sub::Root(i, pivot, partners));
        self.run(next)
    }

    fn finish(&mut self, b: &Branch) -> Result<(), ElimError> {
        let n = self.vars.len();
        let mut bound = vec![false; n];
        for s in &b.subs {
            let i = match s {
                Sub::Linear(i, _) | Sub::Value(i, _) | Sub::Root(i, _, _) => *i,
            };
            bound[i] = true;
        }
        let params: Vec<usize> = (0..n).filter(|&i| !bound[i]).collect();
        let field = RatFuncField::new(self.vars.clone());
        let mut values: Vec<Option<RatFunc>> = vec![None; n];
        for &p in &params {
            values[p] = Some(field.var(&self.vars.names()[p])?);
        }
        self.resolve(&field, b, b.subs.len(), values, params)
    }

    /// Assigns the substitutions from the last to the first; a root step
    /// with several rational roots forks.
    fn resolve(
        &mut self,
        field: &RatFuncField,
        b: &Branch,
        upto: usize,
        mut values: Vec<Option<RatFunc>>,
        mut params: Vec<usize>,
    ) -> Result<(), ElimError> {
        let point = |values: &Vec<Option<RatFunc>>| -> Vec<RatFunc> {
            values.iter().map(|v| v.clone().unwrap_or_else(|| field.zero())).collect()
        };
        for k in (0..upto).rev() {
            match &b.subs[k] {
                Sub::Linear(i, expr) => {
                    let Some(v) = expr.compose(field, &point(&values)) else {
                        return Ok(());
                    };
                    values[*i] = Some(v);
                }
                Sub::Value(i, r) => values[*i] = field.from_rational(r),
                Sub::Root(i, pivot, partners) => {
                    match common_roots(field, *i, pivot, partners, &point(&values))? {
                        Roots::Free => {
                            values[*i] = Some(field.var(&self.vars.names()[*i])?);
                            params.push(*i);
                            params.sort_unstable();
                        }
                        Roots::List(roots) => {
                            for r in roots {
                                let mut vs = values.clone();
                                vs[*i] = Some(r);
                                self.resolve(field, b, k, vs, params.clone())?;
                            }
                            return Ok(());
                        }
                    }
                }
            }
        }
        let coords = point(&values);
        for f in &b.nonzero {
            if f.eval_hom(field, &coords, |c| field.from_int(c)).is_zero() {
                return Ok(());
            }
        }
        self.found.push((params, coords));
        Ok(())
    }
}

/// `e` with variable `i` set to a rational (variable kept, degree 0).
fn specialize_keep(e: &MPoly<Integers>, i: usize, r: &BigRational) -> MPoly<Integers> {
    let vars = e.vars().clone();
    let c = MPoly::constant(Integers, vars.clone(), r.numer().clone());
    let d = MPoly::constant(Integers, vars, r.denom().clone());
    let expr = RatFunc::new(c, d).expect("nonzero denominator");
    let s = substitute_ratfunc(e, &e.vars().names()[i].clone(), &expr).expect("same variables");
    s.num().clone()
}

enum Roots {
    /// Every value works.
    Free,
    List(Vec<RatFunc>),
}

/// Values of variable `i` making pivot and partners vanish, with the other
/// variables set to `point` (rational functions of the parameters). Only
/// roots rational over the parameter field are returned.
fn common_roots(
    field: &RatFuncField,
    i: usize,
    pivot: &MPoly<Integers>,
    partners: &[MPoly<Integers>],
    point: &[RatFunc],
) -> Result<Roots, ElimError> {
    let mut values = HashMap::new();
    for (k, name) in field.vars().names().iter().enumerate() {
        if k != i {
            values.insert(name.clone(), point[k].clone());
        }
    }
    let mut g = super::backsub::specialize_univariate(field, pivot, i, &values)?;
    for p in partners {
        let s = super::backsub::specialize_univariate(field, p, i, &values)?;
        if !s.is_empty() {
            g = crate::exactpoly::dense::gcd_field(field, &g, &s);
        }
    }
    match crate::exactpoly::dense::degree::<RatFuncField>(&g) {
        None => Ok(Roots::Free),
        Some(0) => Ok(Roots::List(Vec::new())),
        Some(1) => Ok(Roots::List(vec![field.neg(&field.div(&g[0], &g[1]).expect("nonzero"))])),
        Some(_) => {
            // rational roots when the coefficients are constants
            let consts: Option<Vec<BigRational>> = g.iter().map(|c| c.constant_value()).collect();
            let Some(consts) = consts else { return Ok(Roots::List(Vec::new())) };
            Ok(Roots::List(
                crate::exactpoly::roots::rational_roots(&consts)
                    .into_iter()
                    .filter_map(|(r, _)| field.from_rational(&r))
                    .collect(),
            ))
        }
    }
}

/// Rational solutions of a polynomial system: isolated points and
/// parametrized families, each verified by exact substitution and with
/// duplicates and contained components removed.
pub fn solve_system(sys: &PolySystem) -> Result<SolutionSet, ElimError> {
    let vars = sys.vars().clone();
    let mut solver = Solver { vars: vars.clone(), found: Vec::new() };
    solver.run(Branch { eqs: sys.eqs().to_vec(), subs: Vec::new(), nonzero: Vec::new(), depth: 0 })?;
    let field = RatFuncField::new(vars.clone());
    let mut isolated: Vec<Vec<BigRational>> = Vec::new();
    let mut fams: Vec<Family> = Vec::new();
    for (params, coords) in solver.found {
        // every component must satisfy the system identically
        let ok = sys
            .eqs()
            .iter()
            .all(|e| e.eval_hom(&field, &coords, |c| field.from_int(c)).is_zero());
        if !ok {
            continue;
        }
        if params.is_empty() {
            let pt: Option<Vec<BigRational>> = coords.iter().map(|c| c.constant_value()).collect();
            if let Some(pt) = pt {
                if !isolated.contains(&pt) {
                    isolated.push(pt);
                }
            }
        } else {
            let pnames: Vec<String> = params.iter().map(|&p| vars.names()[p].clone()).collect();
            let pv = Vars::new(&pnames);
            let coords = coords.iter().map(|c| c.embed(&pv)).collect::<Result<Vec<_>, _>>()?;
            fams.push(Family { params: pv, coords });
        }
    }
    // drop families contained in others (larger first)
    fams.sort_by_key(|f| std::cmp::Reverse(f.dimension()));
    let mut kept: Vec<Family> = Vec::new();
    for f in fams {
        if !kept.iter().any(|k| f.subset_of(k, &vars, 6)) {
            kept.push(f);
        }
    }
    isolated.retain(|p| !kept.iter().any(|f| f.contains(&vars, p)));
    isolated.sort();
    Ok(SolutionSet { vars, isolated, parametric: kept })
}

/// Whether a rational point satisfies every equation.
pub fn is_solution(sys: &PolySystem, point: &[BigRational]) -> bool {
    let q = Rationals;
    sys.eqs().iter().all(|e| e.eval_hom(&q, point, |c| BigRational::from_integer(c.clone())).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn line_and_point() {
        // (x - y)(x + 1) = 0, (x - y)(y - 2) = 0: the line x = y and the point (-1, 2)
        let s = PolySystem::parse(&["x", "y"], &["(x - y)*(x + 1)", "(x - y)*(y - 2)"]).unwrap();
        let sol = solve_system(&s).unwrap();
        assert_eq!(sol.isolated, vec![vec![q(-1, 1), q(2, 1)]]);
        assert_eq!(sol.parametric.len(), 1);
        assert!(sol.parametric[0].contains(s.vars(), &[q(7, 3), q(7, 3)]));
    }

    #[test]
    fn circle_line() {
        let s = PolySystem::parse(&["x", "y"], &["x^2 + y^2 - 25", "x*y - 12"]).unwrap();
        let sol = solve_system(&s).unwrap();
        let want: Vec<Vec<BigRational>> = vec![
            vec![q(-4, 1), q(-3, 1)],
            vec![q(-3, 1), q(-4, 1)],
            vec![q(3, 1), q(4, 1)],
            vec![q(4, 1), q(3, 1)],
        ];
        assert_eq!(sol.isolated, want);
        assert!(sol.parametric.is_empty());
    }
}
