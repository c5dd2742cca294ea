//! Physics of the two model problems: fluxes, entropy pairs, two-point fluxes,
//! Riemann solvers and source terms.

pub mod burgers;
pub mod sources;
pub mod swe;

pub use burgers::{burgers_ec_flux, burgers_entropy_pair, burgers_flux, burgers_llf, BurgersEntropy};
pub use sources::{burgers_mms, burgers_mms_source, coriolis_source, ChannelMms, GeostrophicIc};
pub use swe::{
    swe_ec_flux, swe_entropy_pair, swe_flux_normal, swe_hll, swe_llf, EquationParams, SweConserved, SweEntropy, SwePrim,
};
