//! Degree-one Fekete points and their Lebesgue constants.
//!
//! For a compact body `K ⊂ ℝ^d` (or the torus `𝕋^d ⊂ ℂ^d`) the degree-one
//! Fekete points are the `d + 1` vertices of a maximum-volume simplex in `K`,
//! and their Lagrange basis is the barycentric coordinate map. This crate
//! builds those point sets for four bodies and measures how the Lebesgue
//! constant `Λ₁ = max_K Σ|ℓᵢ|` grows with `d`:
//!
//! | body      | points                               | `Λ₁`                         |
//! |-----------|--------------------------------------|------------------------------|
//! | simplex   | its own vertices                     | `1`                          |
//! | unit ball | recursively built regular simplex    | in `[√d, √(d+1)]`, exact     |
//! | cube      | rows of a normalized Hadamard matrix | `√(d+1)` when `d + 1 = m²`   |
//! | torus     | rows of the Fourier matrix           | `√(d+1)` when `d + 1 = m²`   |
//!
//! Values are obtained by closed form ([`ball::lebesgue_ball_exact`]), exact
//! enumeration over sign vectors ([`ball::lebesgue_ball_enumerate`],
//! [`cube::lebesgue_cube_enumerate`]), seeded sampling
//! ([`simplex::lebesgue_simplex`], [`torus::lebesgue_torus_sample`]) and
//! explicit extremal witnesses ([`cube::cube_witness`],
//! [`torus::torus_witness`]). The [`verification`] module cross-checks all of
//! them.

#![forbid(unsafe_code)]

pub mod ball;
pub mod cube;
mod error;
pub mod linalg;
pub(crate) mod sampling;
pub mod simplex;
pub mod torus;
mod types;
pub mod verification;

pub use error::{Error, Result};
pub use linalg::{AnyMatrix, ComplexMatrix, Matrix, RealMatrix, Scalar};
pub use types::{
    BarycentricVector, Domain, DomainPoint, LebesgueResult, Method, PointSet, SignVector,
    WitnessCertificate,
};

/// Default cap on `d` for the `2^(d+1)` sign-vector enumerations.
pub const DEFAULT_MAX_ENUM_DIM: usize = 20;
