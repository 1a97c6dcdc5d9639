//! Exact computational toolkit for graded nilpotent Lie groups.
//!
//! The crate computes, over exact rational arithmetic:
//!
//! * weight-graded Lie algebra cohomology `E0 = H*(g)` realized as
//!   `ker d0 ∩ ker δ0` inside the exterior algebra of the dual,
//! * the retracted complex `(E0, d_c)` as explicit matrices of
//!   normal-ordered symbols in the universal enveloping algebra,
//! * the algebraic pinching intervals for the renormalized
//!   Novikov–Shubin exponents `β_k = N(G)/α_k`,
//! * presentation depth of filtered groups through free nilpotent Lie
//!   algebras on Hall bases,
//! * and a small floating-point module reproducing the `x⁴ + y²`
//!   spectral toy model on the plane.
//!
//! Low-level linear algebra and the exterior/enveloping algebras are
//! generic over the scalar type through `num-traits` bounds; the crate
//! root fixes the concrete instantiations used by the domain layer.

pub mod algebra;
pub mod catalog;
pub mod cohomology;
pub mod forms;
pub mod freelie;
pub mod linalg;
pub mod pbw;
pub mod retract;
pub mod scalar;
pub mod spectral;

pub use scalar::{Field, Rat};

/// Exact rational matrix, the workhorse of every algebraic module.
pub type RatMatrix = linalg::Matrix<Rat>;

/// Invariant form with exact rational coefficients.
pub type RatForm = forms::InvariantForm<Rat>;

/// Normal-ordered enveloping-algebra element with rational coefficients.
pub type Symbol = pbw::PbwElement<Rat>;

/// Errors reported by fallible operations across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("incompatible grading: bracket [{i}, {j}] -> {k} violates w({k}) = w({i}) + w({j})")]
    IncompatibleGrading { i: usize, j: usize, k: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("invalid Clifford data: J_{i} J_{j} + J_{j} J_{i} != -2 δ_ij id")]
    InvalidClifford { i: usize, j: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
