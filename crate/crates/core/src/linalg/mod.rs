//! Exact dense linear algebra over any commutative ring scalar:
//! matrices, polynomials, division-free characteristic polynomials,
//! Newton power sums and a bounded irreducibility probe.

mod matrix;
mod poly;

pub use matrix::Matrix;
pub use poly::{is_irreducible_small, newton_power_sums, Polynomial};

use thiserror::Error;

/// Scalar ring the matrices and polynomials are generic over. Blanket
/// implemented; integers, rationals and floats all qualify.
pub trait Scalar:
    Clone
    + PartialEq
    + std::fmt::Debug
    + std::fmt::Display
    + num_traits::Zero
    + num_traits::One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + std::fmt::Debug
        + std::fmt::Display
        + num_traits::Zero
        + num_traits::One
        + std::ops::Neg<Output = Self>
        + std::ops::Sub<Output = Self>
{
}

/// Error cases for matrix and polynomial operations.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("matrix is not square ({rows} x {cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("row {row} has {got} entries, expected {expected}")]
    Ragged {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("the zero polynomial cannot be normalised to a monic polynomial")]
    NotMonicNormalizable,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("degree {degree} exceeds the probe cap {max}")]
    DegreeTooLarge { degree: usize, max: usize },
}
