//! Exact sparse multivariate polynomials over exchangeable coefficient
//! domains, with resultants, gcds, rational functions and root finding.

pub mod dense;
pub mod gcd;
pub mod mpoly;
pub mod polyring;
pub mod ratfunc;
pub mod roots;
pub mod text;

use num_rational::BigRational;

pub use gcd::{mpoly_gcd, resultant, resultant_sylvester};
pub use mpoly::{Exponent, MPoly, Monomial, RingOp, Vars};
pub use polyring::{GcdRing, PolyRing};
pub use ratfunc::{substitute_ratfunc, RatFunc, RatFuncField};
pub use roots::SqrtFailure;
pub use text::{format_poly, infer_vars, parse_int_poly, parse_poly, parse_ratfunc};

use crate::ring::{Rationals, Ring};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("coefficient domains differ: {0} vs {1}")]
    DomainMismatch(String, String),
    #[error("variable lists differ: [{0}] vs [{1}]")]
    VariableMismatch(String, String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("inexact division")]
    InexactDivision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("degree 0 in {0}")]
    ZeroDegree(String),
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("coefficient is not an integer")]
    NonIntegerCoefficient,
    #[error("not a square: {0}")]
    NotSquare(SqrtFailure),
}

impl<R: Ring> MPoly<R> {
    /// Index of the only variable that occurs, or `None` for constants.
    pub fn univariate_var(&self) -> Result<Option<usize>, PolyError> {
        let s = self.support();
        match s.len() {
            0 => Ok(None),
            1 => Ok(Some(s[0])),
            _ => Err(PolyError::NotUnivariate),
        }
    }

    /// Dense coefficients (lowest first) of a polynomial in variable `i` only.
    pub fn to_dense(&self, i: usize) -> Result<dense::Dense<R>, PolyError> {
        if self.support().iter().any(|&j| j != i) {
            return Err(PolyError::NotUnivariate);
        }
        let mut v = vec![self.ring().zero(); self.degree_in(i) as usize + usize::from(!self.is_zero())];
        for (m, c) in self.terms() {
            v[m.0[i] as usize] = c.clone();
        }
        Ok(v)
    }

    pub fn from_dense(ring: R, vars: Vars, i: usize, coeffs: &[R::Elem]) -> Self {
        let n = vars.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|(d, c)| (Monomial::var(n, i, d as Exponent), c.clone()))
            .collect();
        MPoly::from_sorted_terms(ring, vars, terms)
    }
}

/// Square root of a univariate polynomial over a field.
pub fn poly_sqrt<R: Ring>(p: &MPoly<R>) -> Result<MPoly<R>, PolyError> {
    let i = p.univariate_var()?.unwrap_or(0);
    if p.nvars() == 0 {
        let c = p.constant_value().unwrap();
        let r = p.ring().sqrt(&c).ok_or(PolyError::NotSquare(SqrtFailure::LeadingNotSquare))?;
        return Ok(MPoly::constant(p.ring().clone(), p.vars().clone(), r));
    }
    let d = p.to_dense(i)?;
    let y = roots::dense_sqrt(p.ring(), &d).map_err(PolyError::NotSquare)?;
    Ok(MPoly::from_dense(p.ring().clone(), p.vars().clone(), i, &y))
}

/// Rational roots with multiplicities, ascending.
pub fn rational_roots(p: &MPoly<Rationals>) -> Result<Vec<(BigRational, u32)>, PolyError> {
    match p.univariate_var()? {
        None => Ok(Vec::new()),
        Some(i) => Ok(roots::rational_roots(&p.to_dense(i)?)),
    }
}
