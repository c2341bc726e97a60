//! Replaying an elimination trail at a point of the reduced system.

use std::collections::HashMap;

use super::system::{PolySystem, StepKind};
use super::ElimError;
use crate::exactpoly::dense::{self, Dense};
use crate::exactpoly::{MPoly, Vars};
use crate::ring::{Integers, Ring};

/// `p` with every variable except `var` replaced by its value, as a dense
/// polynomial in `var`.
pub(crate) fn specialize_univariate<F: Ring>(
    ring: &F,
    p: &MPoly<Integers>,
    var: usize,
    values: &HashMap<String, F::Elem>,
) -> Result<Dense<F>, ElimError> {
    let names = p.vars().names();
    let degs = p.max_degrees();
    let mut point = Vec::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        match values.get(n) {
            Some(v) if i != var => point.push(v.clone()),
            _ if i == var || degs[i] == 0 => point.push(ring.zero()),
            _ => return Err(ElimError::MissingValue(n.clone())),
        }
    }
    let powers = crate::exactpoly::mpoly::power_table(ring, &point, &degs);
    let mut out = vec![ring.zero(); degs[var] as usize + 1];
    for (m, c) in p.terms() {
        let mut t = ring.from_int(c);
        for (v, &e) in m.0.iter().enumerate() {
            if v != var && e > 0 {
                t = ring.mul(&t, &powers[v][e as usize]);
            }
        }
        ring.add_assign(&mut out[m.0[var] as usize], &t);
    }
    Ok(dense::trimmed(ring, out))
}

/// The variable list of the original system a trail started from.
pub fn original_vars(sys: &PolySystem) -> Vars {
    sys.trail.first().map(|s| s.vars.clone()).unwrap_or_else(|| sys.vars().clone())
}

/// Values for every variable of the original system, given values for the
/// surviving variables of `sys`. The ring must be a field.
pub fn back_substitute<F: Ring>(
    sys: &PolySystem,
    ring: &F,
    point: &[(String, F::Elem)],
) -> Result<Vec<(String, F::Elem)>, ElimError> {
    let mut values: HashMap<String, F::Elem> = point.iter().cloned().collect();
    for step in sys.trail.iter().rev() {
        let i = step.vars.require(&step.var)?;
        let value = match step.kind {
            StepKind::LinearSubst => {
                let expr = step.expr.as_ref().ok_or_else(|| ElimError::Format("step without expression".into()))?;
                let num = specialize_univariate(ring, expr.num(), i, &values)?;
                let den = specialize_univariate(ring, expr.den(), i, &values)?;
                let n = num.first().cloned().unwrap_or_else(|| ring.zero());
                let d = den.first().cloned().unwrap_or_else(|| ring.zero());
                ring.div(&n, &d).ok_or_else(|| ElimError::VanishingDenominator(step.var.clone()))?
            }
            StepKind::Resultant => {
                let pivot = step.pivot.as_ref().ok_or_else(|| ElimError::Format("step without pivot".into()))?;
                let mut g = specialize_univariate(ring, pivot, i, &values)?;
                for p in &step.partners {
                    let s = specialize_univariate(ring, p, i, &values)?;
                    if !s.is_empty() {
                        g = dense::gcd_field(ring, &g, &s);
                    }
                }
                match dense::degree::<F>(&g) {
                    Some(1) => ring.neg(&ring.div(&g[0], &g[1]).expect("nonzero leading coefficient")),
                    Some(0) => return Err(ElimError::NoCommonRoot(step.var.clone())),
                    d => {
                        return Err(ElimError::AmbiguousRoot { var: step.var.clone(), degree: d.unwrap_or(0) })
                    }
                }
            }
        };
        values.insert(step.var.clone(), value);
    }
    let vars = original_vars(sys);
    vars.names()
        .iter()
        .map(|n| values.get(n).cloned().map(|v| (n.clone(), v)).ok_or_else(|| ElimError::MissingValue(n.clone())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elim::{eliminate_by_resultant, linear_substitute, LinearMode};
    use crate::ring::Rationals;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn empty_trail_is_identity() {
        let s = PolySystem::parse(&["x", "y"], &["x - y"]).unwrap();
        let pt = vec![("x".to_string(), q(2, 1)), ("y".to_string(), q(2, 1))];
        assert_eq!(back_substitute(&s, &Rationals, &pt).unwrap(), pt);
    }

    #[test]
    fn replays_linear_and_resultant_steps() {
        // planted solution (x, y, z) = (1/2, 3, -1)
        let s = PolySystem::parse(
            &["x", "y", "z"],
            &["2*x*y - 3", "y + z^2 - 4", "y*z + 3 + y - 3"],
        )
        .unwrap();
        let r = linear_substitute(&s, "y", LinearMode::Constant).unwrap();
        let r = eliminate_by_resultant(&r, "x", 0).unwrap();
        assert_eq!(r.vars().names(), &["z".to_string()]);
        let full = back_substitute(&r, &Rationals, &[("z".to_string(), q(-1, 1))]).unwrap();
        assert_eq!(full[0].1, q(1, 2));
        assert_eq!(full[1].1, q(3, 1));
        let bad = PolySystem::parse(&["x", "y"], &["x*y - 1"]).unwrap();
        let bad = linear_substitute(&bad, "x", LinearMode::Permissive).unwrap();
        assert!(matches!(
            back_substitute(&bad, &Rationals, &[("y".to_string(), q(0, 1))]),
            Err(ElimError::VanishingDenominator(_))
        ));
    }
}
