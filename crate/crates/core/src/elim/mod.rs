//! Reduction of coefficient systems by linear substitution and resultants,
//! rational solving by case splitting, and back-substitution.

pub mod backsub;
pub mod case1;
pub mod case2;
pub mod case3;
pub mod reduce;
pub mod solve;
pub mod system;

pub use backsub::{back_substitute, original_vars};
pub use case1::{case1_signature, reduce_case1, solve_case1, Case1Solution};
pub use case2::{case2_signature, reduce_case2, CASE2_PROTECTED};
pub use case3::{case3_signature, reduce_case3, CASE3_PROTECTED};
pub use reduce::{eliminate_by_resultant, linear_substitute, reduce, LinearMode, ReduceOptions};
pub use solve::{is_solution, solve_system, Family, SolutionSet};
pub use system::{EliminationStep, ElimWarning, PolySystem, StepKind};

use crate::exactpoly::PolyError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ElimError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("no equation is linear in {0}")]
    NotLinear(String),
    #[error("{0} only occurs linearly with polynomial coefficients; permissive mode required")]
    PermissiveRequired(String),
    #[error("pivot equation does not contain {0}")]
    VarAbsentFromPivot(String),
    #[error("no equation with index {0}")]
    BadPivot(usize),
    #[error("no variable left to eliminate")]
    Exhausted,
    #[error("malformed system: {0}")]
    Format(String),
    #[error("denominator of {0} vanishes at the point")]
    VanishingDenominator(String),
    #[error("pivot and partners have no common root in {0}")]
    NoCommonRoot(String),
    #[error("common root in {var} is not unique (degree {degree})")]
    AmbiguousRoot { var: String, degree: usize },
    #[error("no value for {0}")]
    MissingValue(String),
    #[error("case splitting went too deep")]
    DepthExceeded,
}
