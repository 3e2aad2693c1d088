//! Exact arithmetic in the integral group ring `Z[Z^d]`.

mod inverse;
mod parse;
mod poly;

use thiserror::Error;

pub use inverse::{l1_inverse_approx, l1_residual, L1InverseApprox};
pub use parse::parse_poly;
pub use poly::{is_lopsided, mul, Exponent, LaurentPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupRingError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("polynomial is not lopsided")]
    NotLopsided,
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("polynomial parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}
