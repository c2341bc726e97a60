//! Signature (1,2,2,8,11): reduction to eight equations in `x0..x6, q0`.

use super::{reduce, ElimError, PolySystem, ReduceOptions};
use crate::builder::{equate_coefficients, make_template, EpzTemplate, Signature};

pub const CASE3_PROTECTED: [&str; 9] = ["x0", "x1", "x2", "x3", "x4", "x5", "x6", "q0", "q1"];

pub fn case3_signature() -> Signature {
    Signature { a: 1, b: 2, q: 2, x: 8, y: 11 }
}

/// Linear substitutions leave nine equations, the last of which is
/// `q1 − 3`; substituting it gives eight.
pub fn reduce_case3() -> Result<(EpzTemplate, PolySystem, PolySystem), ElimError> {
    let tpl = make_template(case3_signature()).expect("consistent signature");
    let sys = equate_coefficients(&tpl)?;
    let first = ReduceOptions {
        protected: CASE3_PROTECTED.iter().map(|s| s.to_string()).collect(),
        target_vars: None,
        permissive_steps: 0,
    };
    let nine = reduce(&sys, &first)?;
    let eight = reduce(&nine, &ReduceOptions { protected: Vec::new(), target_vars: Some(8), permissive_steps: 0 })?;
    Ok((tpl, sys, eight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{newton_lift, residual_valuation, scan_local, ScanOptions};

    #[test]
    fn reduces_to_eight_and_keeps_mod19_model() {
        let (tpl, sys, red) = reduce_case3().unwrap();
        assert_eq!(sys.len(), 24);
        assert_eq!(red.vars().names(), &["x0", "x1", "x2", "x3", "x4", "x5", "x6", "q0"]);
        let fam = crate::verify::case3_family().unwrap();
        let full = crate::verify::template_point(&tpl, &fam);
        let names = tpl.unknowns();
        let seed: Vec<u64> = red
            .vars()
            .names()
            .iter()
            .map(|n| full[names.index_of(n).unwrap()])
            .collect();
        let pt = newton_lift(&red, &seed, 19, 8).unwrap();
        assert_eq!(residual_valuation(&red, &pt), 8);
    }

    #[test]
    fn scans_at_five() {
        let (_, _, red) = reduce_case3().unwrap();
        let sols = scan_local(&red, 5, &ScanOptions { fixed: vec![], parallel: true }).unwrap();
        for s in &sols {
            let p = crate::padic::PadicPoint { p: 5, k: 1, coords: s.coords.iter().map(|&c| c.into()).collect() };
            assert!(residual_valuation(&red, &p) >= 1);
        }
    }
}
