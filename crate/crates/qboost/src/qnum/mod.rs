//! Exact scalars in `s = q^(1/2)`, their specialization at a rational `q`,
//! and multiprecision evaluation.

pub mod expr;
mod field;
pub mod numeric;
mod param;
mod poly;
mod quad;
mod ratfunc;
mod scalar;
mod sqrt;

pub use expr::parse_expr;
pub use field::Field;
pub use numeric::{evaluate, evaluate_sqrt, Complex, Float, DEFAULT_PRECISION};
pub use param::{parse_rational, DeformationParameter};
pub use poly::Poly;
pub use quad::{specialize, specialize_real, CQuad, Quad};
pub use ratfunc::RatFunc;
pub use scalar::{qscalar_arith, ArithOp, QScalar};
pub use sqrt::{sqrt_mul, SqrtScalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QnumError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("pole at evaluation point")]
    Pole,
    #[error("negative radicand")]
    NegativeRadicand,
    #[error("radicand must be real")]
    ComplexRadicand,
    #[error("q must be positive")]
    NonPositiveQ,
    #[error("cannot parse number: {0}")]
    Parse(String),
}
