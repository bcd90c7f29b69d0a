//! Numerical hyperbolic potential theory on the unit ball `B^n` and the
//! upper half-space `H^n`.
//!
//! The crate evaluates Mobius transformations of the ball, the
//! Poisson-Szego kernel and the hyperbolic Green function, solves the
//! Dirichlet problem for the hyperbolic Laplacian via the representation
//! `u = P_h[phi] - G_h[psi]`, and provides quantitative boundary-regularity
//! scans (Holder/Lipschitz bounds, gradient plateaus, Riesz-potential
//! conditions) on both the ball and the half-space.
//!
//! Modules:
//! - [`geometry`]: Mobius algebra `T_a`, `phi_a`, the bracket `[x,a]`, the
//!   hyperbolic metric.
//! - [`kernels`]: `P_h`, `G_h`, their gradients, and the generalized
//!   `P_{alpha,beta}` kernel.
//! - [`quadrature`]: sphere/ball/half-space rules, zonal reduction,
//!   deterministic compensated summation.
//! - [`solver`]: Poisson integrals, Green potentials, the Dirichlet
//!   representation, finite-difference residual checks.
//! - [`regularity`]: bound scans for the integral lemmas and the Holder /
//!   gradient estimates, Riesz potential, growth-condition checkers.
//! - [`halfspace`]: the half-space kernel, boundary derivatives and the
//!   C^1-extension verification.
//! - [`verify`]: named verification suites shared by the CLI and the
//!   acceptance tests.

pub mod catalog;
pub mod geometry;
pub mod halfspace;
pub mod kernels;
pub mod numeric;
pub mod poly;
pub mod quadrature;
pub mod regularity;
pub mod solver;
pub mod verify;

/// Library version reported in run reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Errors shared by all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Evaluation exactly at a kernel singularity.
    #[error("singularity: {0}")]
    Singularity(String),
    /// A quadrature produced a non-finite value or failed to converge.
    #[error("integration error: {0}")]
    Integration(String),
    /// Requested rule or level exceeds the node budget.
    #[error("resource limit: {0}")]
    Resource(String),
    /// An integral flagged as divergent under refinement.
    #[error("divergence: {0}")]
    Divergence(String),
    /// I/O while reading or writing cached rules or reports.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    /// Malformed rule file or config.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
