//! Open (inflow/outflow) boundary treatment whose entropy rate is bounded by
//! external data.
//!
//! The normal entropy flux of the shallow water equations is written as a
//! quadratic form `U^T A U` in scaled, rotated primitive variables. A
//! congruence `A = T Lambda T^T` with `Lambda = diag(v_n - c, v_n, v_n + c)`
//! exposes nonlinear characteristic variables `W = T^T U`; the negative
//! entries of `Lambda` mark the incoming set `W-` that must be penalized
//! against data `G`. Each flow regime yields a closed-form numerical boundary
//! flux. [`theory`] evaluates the defining relation and the entropy gap by
//! direct matrix arithmetic so the closed forms can be checked against it.

pub mod burgers;
pub mod congruence;
pub mod regime;
pub mod riemann_invariant;
pub mod swe_fluxes;
pub mod theory;

pub use burgers::{
    burgers_boundary_data, burgers_boundary_term, burgers_condition_residual, burgers_inflow_flux,
    burgers_open_flux_normal, BurgersBoundaryData,
};
pub use congruence::{
    boundary_matrix, boundary_matrix_quadratic_form, CharVars, CongruenceSet, ScaledRotatedVars, ALPHA, BETA,
};
pub use regime::{classify_regime, Regime};
pub use riemann_invariant::riemann_invariant_external_state;
pub use swe_fluxes::{
    swe_flux_subcritical_inflow, swe_flux_subcritical_outflow, swe_flux_supercritical_inflow,
    swe_flux_supercritical_outflow, swe_open_boundary_flux, GeoMeans,
};
pub use theory::{bound_gap, boundary_data_vector, condition_residual, data_budget};
