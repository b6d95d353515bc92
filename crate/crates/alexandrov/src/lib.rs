//! Discrete Alexandrov solutions of the Monge-Ampère equation with point masses.
//!
//! The library builds piecewise-linear convex functions on finite node clouds,
//! measures them through subgradient-cell volumes, and solves Dirichlet and
//! obstacle problems for prescribed measures by monotone nodal raising. On top
//! of that sit the polytope-skeleton construction (flat pieces on low
//! dimensional faces, Dirac masses at vertices), Pogorelov-type barrier
//! calibration, Legendre/transport diagnostics, and perturbation experiments.

pub mod barriers;
pub mod cell;
pub mod config;
pub mod construction;
pub mod error;
pub mod geometry;
pub mod hull;
pub mod linalg;
pub mod ma;
pub mod report;
pub mod tol;
pub mod transport;

pub use error::Error;

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
