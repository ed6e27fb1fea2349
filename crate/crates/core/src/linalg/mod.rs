//! Dense complex linear algebra: matrices, Kronecker products, partial traces,
//! Hermitian eigendecomposition and spectral propagators.

mod eigen;
mod matrix;
mod svd;

pub use eigen::{eig_hermitian, eig_hermitian_with, propagator, propagator_from, EigenDecomposition};
pub use matrix::{kron, kron_all, partial_trace, ComplexMatrix};
pub use svd::{singular_values, svd, RectMatrix, Svd};

/// Numerical tolerances shared by the linear-algebra layer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative Frobenius bound on `H − H†`.
    pub hermiticity: f64,
    pub unitarity: f64,
    pub reconstruction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { hermiticity: 1e-10, unitarity: 1e-10, reconstruction: 1e-10 }
    }
}
