//! Exact sparse multivariate polynomials over the rationals.

mod division;
mod float;
mod harmonic;
pub mod linalg;
mod measure;
mod monomial;
mod parse;
mod polynomial;
pub mod univariate;

pub use division::{divide, liouville_ratio, ratio_space, LiouvilleFailure, LiouvilleOutcome};
pub use float::FloatPoly;
pub use harmonic::harmonic_basis;
pub use measure::{radial_moments, sphere_average, sphere_ball_integral, unit_sphere_area, ExactMeasure, Region};
pub use monomial::Monomial;
pub use parse::{parse_polynomial, variable_name};
pub use polynomial::Polynomial;

use thiserror::Error;

use num_traits::Signed;

use crate::exact::Rational;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable '{name}' at offset {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("negative exponent at offset {position}")]
    NegativeExponent { position: usize },
    #[error("fractional exponent at offset {position}")]
    FractionalExponent { position: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} outside 1..=8")]
    InvalidDimension(usize),
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial is not harmonic")]
    NotHarmonic,
    #[error("class parameters need Nbar0 >= N0 > 0")]
    InvalidClassParams,
    #[error("invalid degree or dimension for a harmonic basis: n={n}, k={k}")]
    InvalidBasis { n: usize, k: i64 },
}

/// Class parameters `(n, N0, Nbar0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassParams {
    pub n: usize,
    pub n0: Rational,
    pub nbar0: Rational,
}

impl ClassParams {
    pub fn new(n: usize, n0: Rational, nbar0: Rational) -> Result<Self, PolyError> {
        if !(1..=MAX_DIM).contains(&n) {
            return Err(PolyError::InvalidDimension(n));
        }
        if !n0.is_positive() || nbar0 < n0 {
            return Err(PolyError::InvalidClassParams);
        }
        Ok(ClassParams { n, n0, nbar0 })
    }
}
