//! Split-form discontinuous Galerkin spectral element solver for the 1D Burgers
//! equation and the 2D shallow water equations, with numerical boundary fluxes
//! at open (inflow/outflow) boundaries whose entropy rate is bounded by data.
//!
//! Module map:
//! - [`basis`]: Legendre-Gauss-Lobatto collocation with the SBP property.
//! - [`mesh`]: interval meshes and straight-sided quadrilateral meshes with metrics.
//! - [`equations`]: fluxes, entropy pairs, two-point and Riemann fluxes, sources.
//! - [`open_boundary`]: congruence transformation, regime classification and the
//!   nonlinear open-boundary fluxes, plus executable checks of the bound.
//! - [`dgsem`]: semidiscretization and the entropy monitor.
//! - [`timeloop`]: low-storage RK time integration with abort detection.
//! - [`scenario`], [`output`], [`verify`]: configuration, result files and the
//!   property suite used by the command-line front end.

// Index loops mirror the nodal formulas; `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod dgsem;
pub mod equations;
pub mod error;
pub mod mesh;
pub mod open_boundary;
pub mod output;
pub mod scenario;
pub mod timeloop;
pub mod verify;

pub use error::{Error, Result};
