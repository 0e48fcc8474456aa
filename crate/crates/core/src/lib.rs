//! Spectral toolkit for the linear and nonlinear stability of near-Couette
//! channel flow with no-slip walls.
//!
//! The crate is organized around a Chebyshev collocation discretization of
//! `[-1, 1]`:
//!
//! - [`grid`]: Chebyshev-Gauss-Lobatto grids, differentiation, quadrature.
//! - [`field`]: complex nodal fields, wavenumber context, weighted norms.
//! - [`helmholtz`]: the Dirichlet Helmholtz inverse and its Green's kernel.
//! - [`shear`]: background shears and their heat-semigroup evolution.
//! - [`ghost`]: the singular integral operator used in damping pairings.
//! - [`airy`]: complex Airy evaluation for wall correctors.
//! - [`resolvent`]: frozen-shear resolvent solves, boundary correctors,
//!   Evans-function assembly, and estimate probes.
//! - [`evolution`]: time steppers, the frozen-time layer-cake scheme, and
//!   the energy ledger.
//! - [`nonlinear`]: the pseudo-spectral nonlinear solver and the stability
//!   threshold experiment.

pub mod airy;
pub mod error;
pub mod evolution;
pub mod field;
pub mod ghost;
pub mod grid;
pub mod helmholtz;
pub mod linalg;
pub mod nonlinear;
pub mod resolvent;
pub mod sample;
pub mod shear;

pub use error::CoreError;
pub use field::{ComplexField, WavenumberContext};
pub use grid::SpectralGrid;

/// Convenience alias used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, CoreError>;
