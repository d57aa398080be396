//! Dirac fields on the expanding (2+1)-dimensional de Sitter-like background
//!
//! ```text
//! ds² = ℓ² dτ² − ℓ² sinh²τ dθ² − ℓ² sinh²τ sin²θ dφ²
//! ```
//!
//! The crate follows the whole chain from geometry to the generated partner
//! Hamiltonian, and every closed form is paired with an independent numerical
//! check:
//!
//! - [`geometry`]: metric, dreibein, Christoffel symbols, gamma matrices and
//!   the spin connection (general formula and closed forms).
//! - [`separation`]: gauge choice, the separated angular and temporal
//!   potentials, first-order residuals and spinor assembly.
//! - [`susy_angular`]: superpotential factorization, the closed-form angular
//!   spectrum and the Jacobi eigenfunctions with their ladder relations.
//! - [`romanovski`]: Romanovski polynomials, their weight and finite
//!   orthogonality, the model constants and the time-part solutions.
//! - [`spectral_numeric`]: finite-difference operators plus a Sturm-bisection
//!   tridiagonal eigensolver, the oracle behind the spectral checks.
//! - [`pseudo_susy`]: discretized Dirac operators H₋, H₋†, H₊, metric
//!   operators η₁, η₂, intertwining residuals and the partner 4D metric.
//! - [`cli`]: the batch verification front end used by the `desitter-dirac`
//!   binary.
//!
//! Runnable walkthroughs for each capability live under `examples/`.

// `!(x > 0.0)` is used on purpose so that NaN fails domain guards
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod calculus;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod pseudo_susy;
pub mod quadrature;
pub mod romanovski;
pub mod separation;
pub mod sparse;
pub mod spectral_numeric;
pub mod susy_angular;

pub use error::{Error, Result};
pub use num_complex::Complex64;
