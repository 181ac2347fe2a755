//! Exact arithmetic: linear forms, sparse multivariate polynomials over the
//! big rationals, factored rationals, rational functions and randomized
//! identity testing.

mod eval;
mod factored;
mod field;
mod json;
mod linear;
mod modp;
mod monomial;
mod poly;
mod ratfun;

pub use eval::{rf_eq, EqCertificate, EqMode, EvalPoint, PointSampler, SAMPLE_BOUND, MAX_REDRAWS};
pub use factored::FactoredRational;
pub use field::Field;
pub use json::{PolyJson, RationalFunctionJson};
pub use linear::{LinearForm, Substitution, VarIndex, VarTable};
pub use monomial::{Monomial, MAX_DEGREE, MAX_VARS};
pub use poly::MultiPoly;
pub use ratfun::RationalFunction;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("cannot canonicalize the zero linear form")]
    ZeroForm,
    #[error("division by a zero scalar")]
    DivideByZeroScalar,
    #[error("division by zero")]
    DivideByZero,
    #[error("denominator vanishes after substitution")]
    ZeroDenominatorAfterSubstitution,
    #[error("denominator vanishes at the evaluation point")]
    ZeroDenominatorAtPoint,
    #[error("no admissible evaluation point after {0} redraws")]
    SamplingExhausted(usize),
    #[error("variable {0} occurs in the denominator")]
    VariableInDenominator(VarIndex),
    #[error("malformed rational-function JSON: {0}")]
    Json(String),
}
