//! Signature (1,1,2,6,8): reduction to four equations in `x2, x3, x4, q0`.

use super::{reduce, ElimError, PolySystem, ReduceOptions};
use crate::builder::{equate_coefficients, make_template, EpzTemplate, Signature};

/// Variables kept through the first, constant-coefficient phase.
pub const CASE2_PROTECTED: [&str; 6] = ["x0", "x1", "x2", "x3", "x4", "q0"];

pub fn case2_signature() -> Signature {
    Signature { a: 1, b: 1, q: 2, x: 6, y: 8 }
}

/// Linear substitutions down to six equations, then one permissive
/// substitution and a resultant to reach four.
pub fn reduce_case2() -> Result<(EpzTemplate, PolySystem, PolySystem), ElimError> {
    let tpl = make_template(case2_signature()).expect("consistent signature");
    let sys = equate_coefficients(&tpl)?;
    let first = ReduceOptions {
        protected: CASE2_PROTECTED.iter().map(|s| s.to_string()).collect(),
        target_vars: None,
        permissive_steps: 0,
    };
    let six = reduce(&sys, &first)?;
    let second = ReduceOptions { protected: Vec::new(), target_vars: Some(4), permissive_steps: 1 };
    let four = reduce(&six, &second)?;
    Ok((tpl, sys, four))
}
