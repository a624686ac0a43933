//! Exact finite-dimensional models: ideal lattices of direct sums of matrix
//! algebras, their Gelfand spaces, sheaves on finite spaces, Čech cohomology
//! of covers and noncommutative covering checks.

pub mod abelian;
pub mod algebra;
pub mod blowup;
pub mod cech;
pub mod covering;
pub mod gelfand;
pub mod linalg;
pub mod order;
pub mod scalar;
pub mod sheaf;
pub mod snf;
pub mod space;

pub use linalg::{Matrix, Subspace};
pub use scalar::{Field, GaussF64, GaussRational, Gaussian, Rational};

pub type QMatrix = Matrix<Rational>;
pub type GaussMatrix = Matrix<GaussRational>;
pub use abelian::{AbHom, FgAbGroup, ZMatrix};

/// Errors shared by every module.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Malformed input: wrong shapes, bad literals, violated preconditions.
    #[error("structural error: {0}")]
    Structural(String),
    /// A mathematically undefined request, such as a non-proper filter.
    #[error("domain error: {0}")]
    Domain(String),
    /// The operation is not available in the selected numeric mode.
    #[error("mode error: {0}")]
    Mode(String),
    /// A resource cap was hit; `partial` describes what was computed.
    #[error("resource limit: {msg}")]
    Resource { msg: String, partial: String },
}

pub type Result<T> = std::result::Result<T, Error>;
