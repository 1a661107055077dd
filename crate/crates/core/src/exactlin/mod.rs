//! Exact linear algebra over the rationals and prime fields.

mod field;
mod matrix;
mod sparse;
mod subspace;

pub use field::{Field, Scalar};
pub use matrix::Matrix;
pub use subspace::{subquotient, Subquotient, Subspace};

pub(crate) use matrix::offsets;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("cannot parse field element {0:?}")]
    BadScalar(String),
    #[error("ambient dimensions differ ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
}

/// `{v : Mv = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    m.kernel()
}
