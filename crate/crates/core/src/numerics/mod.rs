//! Root isolation, scalar solvers and dense symmetric linear algebra.

mod eigen;
mod matrix;
mod monotone;
pub(crate) mod ratpoly;
mod sturm;

use thiserror::Error;

pub use eigen::sym_eigenvalues;
pub use matrix::{Dd, Matrix, Scalar, SymMatrix};
pub use monotone::{solve_monotone, solve_monotone_with, MIN_BRACKET_START, MONOTONE_TOL};
pub use sturm::{
    real_roots, refine_root, repeated_roots, sturm_isolate, RefinedRoot, RootInterval,
    ROOT_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("cannot isolate roots of the zero polynomial")]
    ZeroPolynomial,
    #[error("empty interval ({lo}, {hi})")]
    EmptyInterval { lo: String, hi: String },
    #[error("QL iteration did not converge for eigenvalue {index}")]
    NoConvergence { index: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}
