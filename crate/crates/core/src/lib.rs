//! Numerical Kähler geometry for Schwarz-type inequalities.
//!
//! The crate evaluates curvature of chart-local Kähler metrics, the
//! curvature functionals `H`, `Ric_ℓ`, `S_ℓ` and their orthogonal variants,
//! singular-value functionals of holomorphic maps (`σ_ℓ`, `‖Λ^ℓ∂f‖₀`),
//! checks the `∂∂̄`-Bochner identities for the barrier functions `U_ℓ`, `W_ℓ`,
//! and runs end-to-end verification of the generalized Schwarz bounds on
//! concrete model manifolds.

pub mod bochner;
pub mod curvfun;
pub mod error;
pub mod fd;
pub mod holomap;
pub mod metrics;
pub mod sampling;
pub mod schwarz;
pub mod xlinalg;

pub use error::{Error, Result};
