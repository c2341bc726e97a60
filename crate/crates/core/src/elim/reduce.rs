//! Linear substitutions, resultant steps and the reduction driver.

use rayon::prelude::*;

use super::system::{normalize_eq, EliminationStep, ElimWarning, PolySystem, StepKind};
use super::ElimError;
use crate::exactpoly::{mpoly_gcd, resultant, MPoly, RatFunc};
use crate::ring::Integers;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearMode {
    /// Only pivots `c·var + r` with `c` a nonzero constant.
    Constant,
    /// Also polynomial `c`, introducing `c` as a denominator.
    Permissive,
}

/// Polynomials below this size get their repeated factors stripped after a
/// resultant step; larger ones only lose content and known pivot factors.
const SQUAREFREE_TERM_LIMIT: usize = 300;

struct LinearPivot {
    eq: usize,
    coeff: MPoly<Integers>,
}

fn linear_pivot(sys: &PolySystem, i: usize, mode: LinearMode) -> Result<LinearPivot, ElimError> {
    let name = &sys.vars().names()[i];
    let mut best_const: Option<(usize, usize)> = None;
    let mut best_poly: Option<((usize, u32, usize), LinearPivot)> = None;
    for (j, e) in sys.eqs().iter().enumerate() {
        if e.degree_in(i) != 1 {
            continue;
        }
        let c = e.coeff_at(i, 1);
        if c.is_constant() {
            if best_const.map_or(true, |(len, _)| e.len() < len) {
                best_const = Some((e.len(), j));
            }
        } else {
            let key = (c.len(), c.total_degree(), e.len());
            if best_poly.as_ref().map_or(true, |(k, _)| key < *k) {
                best_poly = Some((key, LinearPivot { eq: j, coeff: c }));
            }
        }
    }
    if let Some((_, j)) = best_const {
        return Ok(LinearPivot { eq: j, coeff: sys.eqs()[j].coeff_at(i, 1) });
    }
    match (best_poly, mode) {
        (Some((_, p)), LinearMode::Permissive) => Ok(p),
        (Some(_), LinearMode::Constant) => Err(ElimError::PermissiveRequired(name.clone())),
        (None, _) => Err(ElimError::NotLinear(name.clone())),
    }
}

/// Divides out `f` as often as it divides `p`.
fn strip_factor(mut p: MPoly<Integers>, f: &MPoly<Integers>) -> MPoly<Integers> {
    if f.is_constant() || p.is_zero() {
        return p;
    }
    while let Some(q) = p.try_div(f) {
        p = q;
    }
    p
}

/// `e(var = -r/c) · c^deg(e)`.
fn clear_substitute(e: &MPoly<Integers>, i: usize, r_neg: &MPoly<Integers>, c: &MPoly<Integers>) -> MPoly<Integers> {
    let coeffs = e.to_univariate(i);
    let d = coeffs.len() - 1;
    let vars = coeffs[0].vars().clone();
    let mut c_pows = vec![MPoly::one(Integers, vars.clone())];
    for k in 1..=d {
        c_pows.push(c_pows[k - 1].mul_poly(c));
    }
    let mut acc = MPoly::zero(Integers, vars.clone());
    let mut r_pow = MPoly::one(Integers, vars);
    for (k, ek) in coeffs.iter().enumerate() {
        if !ek.is_zero() {
            acc = acc.add_poly(&ek.mul_poly(&r_pow).mul_poly(&c_pows[d - k]));
        }
        if k < d {
            r_pow = r_pow.mul_poly(r_neg);
        }
    }
    acc
}

/// Eliminates `var` using an equation linear in it.
pub fn linear_substitute(sys: &PolySystem, var: &str, mode: LinearMode) -> Result<PolySystem, ElimError> {
    let i = sys.vars().require(var)?;
    let piv = linear_pivot(sys, i, mode)?;
    let pe = &sys.eqs()[piv.eq];
    let r_neg = pe.coeff_at(i, 0).neg_poly();
    let c = piv.coeff;
    let c_prim = c.primitive();
    let full = sys.vars();
    let expr = RatFunc::new(r_neg.embed(full)?, c.embed(full)?)?;
    let others: Vec<&MPoly<Integers>> =
        sys.eqs().iter().enumerate().filter(|(j, _)| *j != piv.eq).map(|(_, e)| e).collect();
    let new_eqs: Vec<Option<MPoly<Integers>>> = others
        .par_iter()
        .map(|e| {
            let out = if e.contains_var(i) {
                strip_factor(clear_substitute(e, i, &r_neg, &c), &c_prim)
            } else {
                e.drop_var(i)
            };
            normalize_eq(out)
        })
        .collect();
    let mut trail = sys.trail.clone();
    trail.push(EliminationStep {
        kind: StepKind::LinearSubst,
        var: var.to_string(),
        vars: full.clone(),
        expr: Some(expr),
        pivot: None,
        partners: Vec::new(),
    });
    Ok(PolySystem::from_parts(
        full.without(i),
        dedup(new_eqs.into_iter().flatten().collect()),
        trail,
        sys.warnings.clone(),
    ))
}

fn dedup(eqs: Vec<MPoly<Integers>>) -> Vec<MPoly<Integers>> {
    let mut out: Vec<MPoly<Integers>> = Vec::with_capacity(eqs.len());
    for e in eqs {
        if !out.contains(&e) {
            out.push(e);
        }
    }
    out
}

/// Removes repeated irreducible factors: `p / gcd(p, ∂p/∂v)` for a variable
/// occurring in `p`.
fn squarefree_part(p: &MPoly<Integers>) -> MPoly<Integers> {
    let Some(&v) = p.support().first() else {
        return p.clone();
    };
    let g = mpoly_gcd(p, &p.derivative(v));
    if g.is_constant() {
        p.clone()
    } else {
        p.exact_div(&g).expect("gcd divides")
    }
}

/// Replaces every other equation containing `var` by its resultant with the
/// pivot equation.
pub fn eliminate_by_resultant(sys: &PolySystem, var: &str, pivot: usize) -> Result<PolySystem, ElimError> {
    let i = sys.vars().require(var)?;
    let pe = sys.eqs().get(pivot).ok_or(ElimError::BadPivot(pivot))?;
    if !pe.contains_var(i) {
        return Err(ElimError::VarAbsentFromPivot(var.to_string()));
    }
    let lc = pe.to_univariate(i).pop().expect("positive degree").primitive();
    let lc_full = lc.embed(sys.vars())?;
    let others: Vec<(usize, &MPoly<Integers>)> =
        sys.eqs().iter().enumerate().filter(|(j, _)| *j != pivot).collect();
    let results: Vec<(usize, Result<Option<MPoly<Integers>>, ElimError>)> = others
        .par_iter()
        .map(|&(j, e)| {
            if !e.contains_var(i) {
                return (j, Ok(Some(e.drop_var(i))));
            }
            let r = resultant(pe, e, var).map(|r| {
                if r.is_zero() {
                    None
                } else {
                    let mut r = strip_factor(r.content_primitive().1, &lc_full);
                    if r.len() <= SQUAREFREE_TERM_LIMIT {
                        r = squarefree_part(&r);
                    }
                    Some(r.drop_var(i))
                }
            });
            (j, r.map_err(ElimError::from))
        })
        .collect();
    let mut eqs = Vec::new();
    let mut warnings = sys.warnings.clone();
    for (j, r) in results {
        match r? {
            Some(p) => eqs.extend(normalize_eq(p)),
            None => warnings.push(ElimWarning::PositiveDimensional {
                var: var.to_string(),
                equation: j,
                common_factor: mpoly_gcd(pe, &sys.eqs()[j]).to_string(),
            }),
        }
    }
    let mut trail = sys.trail.clone();
    trail.push(EliminationStep {
        kind: StepKind::Resultant,
        var: var.to_string(),
        vars: sys.vars().clone(),
        expr: None,
        pivot: Some(pe.clone()),
        partners: others.iter().filter(|(_, e)| e.contains_var(i)).map(|(_, e)| (*e).clone()).collect(),
    });
    Ok(PolySystem::from_parts(sys.vars().without(i), dedup(eqs), trail, warnings))
}

#[derive(Clone, Debug, Default)]
pub struct ReduceOptions {
    /// Variables kept through the constant-coefficient linear phase.
    pub protected: Vec<String>,
    /// Stop once at most this many variables remain; `None` stops after the
    /// linear phase.
    pub target_vars: Option<usize>,
    /// How many linear steps with polynomial pivots may be taken before
    /// resultants are used.
    pub permissive_steps: usize,
}

/// Heuristic key: (max degree of the variable, terms of equations containing
/// it, position).
fn var_key(sys: &PolySystem, i: usize) -> (u32, usize, usize) {
    let mut deg = 0;
    let mut terms = 0;
    for e in sys.eqs() {
        let d = e.degree_in(i);
        if d > 0 {
            deg = deg.max(d);
            terms += e.len();
        }
    }
    (deg, terms, i)
}

fn occurring_vars(sys: &PolySystem) -> Vec<usize> {
    (0..sys.vars().len()).filter(|&i| sys.eqs().iter().any(|e| e.contains_var(i))).collect()
}

/// Drops variables that no longer occur in any equation.
fn compact(sys: PolySystem) -> Result<PolySystem, ElimError> {
    let keep: Vec<String> = occurring_vars(&sys).into_iter().map(|i| sys.vars().names()[i].clone()).collect();
    if keep.len() == sys.vars().len() {
        return Ok(sys);
    }
    sys.with_vars(crate::exactpoly::Vars::new(&keep))
}

/// The reduction driver: constant-coefficient linear substitutions on
/// unprotected variables, then permissive linear steps, then resultants, each
/// time choosing the variable by the degree/size heuristic.
pub fn reduce(sys: &PolySystem, opts: &ReduceOptions) -> Result<PolySystem, ElimError> {
    let mut cur = sys.clone();
    loop {
        let mut best: Option<((u32, usize, usize), String)> = None;
        for i in occurring_vars(&cur) {
            let name = &cur.vars().names()[i];
            if opts.protected.contains(name) {
                continue;
            }
            if linear_pivot(&cur, i, LinearMode::Constant).is_ok() {
                let key = var_key(&cur, i);
                if best.as_ref().map_or(true, |(k, _)| key < *k) {
                    best = Some((key, name.clone()));
                }
            }
        }
        match best {
            Some((_, v)) => cur = linear_substitute(&cur, &v, LinearMode::Constant)?,
            None => break,
        }
    }
    let Some(target) = opts.target_vars else {
        return compact(cur);
    };
    cur = compact(cur)?;
    let mut permissive_left = opts.permissive_steps;
    while cur.vars().len() > target && permissive_left > 0 {
        let mut best: Option<((usize, u32, usize, usize), String)> = None;
        for i in occurring_vars(&cur) {
            if let Ok(p) = linear_pivot(&cur, i, LinearMode::Permissive) {
                let key = (p.coeff.len(), p.coeff.total_degree(), cur.eqs()[p.eq].len(), i);
                if best.as_ref().map_or(true, |(k, _)| key < *k) {
                    best = Some((key, cur.vars().names()[i].clone()));
                }
            }
        }
        let Some((_, v)) = best else { break };
        cur = compact(linear_substitute(&cur, &v, LinearMode::Permissive)?)?;
        permissive_left -= 1;
    }
    while cur.vars().len() > target {
        let i = occurring_vars(&cur)
            .into_iter()
            .min_by_key(|&i| var_key(&cur, i))
            .ok_or(ElimError::Exhausted)?;
        let pivot = cur
            .eqs()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains_var(i))
            .min_by_key(|(j, e)| (e.degree_in(i), e.len(), *j))
            .map(|(j, _)| j)
            .expect("variable occurs");
        let name = cur.vars().names()[i].clone();
        cur = compact(eliminate_by_resultant(&cur, &name, pivot)?)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_example() {
        let s = PolySystem::parse(&["x", "y"], &["x + y - 3", "x^2 + y"]).unwrap();
        let r = linear_substitute(&s, "x", LinearMode::Constant).unwrap();
        assert_eq!(r.eqs().len(), 1);
        assert_eq!(r.eqs()[0].to_string(), "y^2 - 5*y + 9");
        assert_eq!(r.trail[0].expr.as_ref().unwrap().to_string(), "-y + 3");
    }

    #[test]
    fn permissive_needed() {
        let s = PolySystem::parse(&["x", "y"], &["x*y - 1", "x^2 + y"]).unwrap();
        assert!(matches!(
            linear_substitute(&s, "x", LinearMode::Constant),
            Err(ElimError::PermissiveRequired(_))
        ));
        let r = linear_substitute(&s, "x", LinearMode::Permissive).unwrap();
        // 1/y^2 + y = 0  ->  y^3 + 1
        assert_eq!(r.eqs()[0].to_string(), "y^3 + 1");
        assert!(matches!(
            linear_substitute(&PolySystem::parse(&["x"], &["x^2 - 1"]).unwrap(), "x", LinearMode::Permissive),
            Err(ElimError::NotLinear(_))
        ));
    }

    #[test]
    fn resultant_step() {
        let s = PolySystem::parse(&["t", "u", "v"], &["t - v", "t^2 - u"]).unwrap();
        let r = eliminate_by_resultant(&s, "t", 0).unwrap();
        assert_eq!(r.eqs().len(), 1);
        assert_eq!(r.eqs()[0].to_string(), "u - v^2");
        assert!(r.warnings.is_empty());
        assert!(matches!(eliminate_by_resultant(&s, "u", 0), Err(ElimError::VarAbsentFromPivot(_))));
    }

    #[test]
    fn planted_common_factor_warns() {
        let s = PolySystem::parse(&["x", "y"], &["x - 1", "(x - 1)*(x*y + 2)"]).unwrap();
        let r = eliminate_by_resultant(&s, "x", 0).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.warnings.len(), 1);
        assert!(r.warnings[0].to_string().contains("x - 1"));
    }

    #[test]
    fn json_round_trip() {
        let s = PolySystem::parse(&["x", "y", "z"], &["x + 2*y - z", "x^2 + y*z - 1", "y - z^2"]).unwrap();
        let r = linear_substitute(&s, "x", LinearMode::Constant).unwrap();
        let r = eliminate_by_resultant(&r, "y", 1).unwrap();
        let back = PolySystem::from_json_str(&r.to_json_string()).unwrap();
        assert_eq!(back, r);
    }
}
