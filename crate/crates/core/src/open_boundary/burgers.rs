//! Nonlinear inflow boundary flux for the Burgers equation.

use crate::equations::{burgers_entropy_pair, burgers_flux};

/// Boundary data `G = sqrt(|u_ext| / 3) u_ext`; it carries the wave speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersBoundaryData {
    pub g: f64,
}

pub fn burgers_boundary_data(u_ext: f64) -> BurgersBoundaryData {
    BurgersBoundaryData {
        g: (u_ext.abs() / 3.0).sqrt() * u_ext,
    }
}

/// Inflow flux at a left boundary with `u > 0`, in the `+x` direction:
/// `(2 u_ext sqrt(|u_ext| |u|) - u^2 / 2) / 3`.
pub fn burgers_inflow_flux(u_ext: f64, u: f64) -> f64 {
    (2.0 * u_ext * (u_ext.abs() * u.abs()).sqrt() - 0.5 * u * u) / 3.0
}

/// Outward normal flux at a boundary with outward normal `n = ±1`.
///
/// Outflow (`n u >= 0`) uses the interior physical flux. Inflow uses
/// [`burgers_inflow_flux`] in the mirrored frame `u -> -n u`, so the left
/// boundary with `u > 0` reproduces it verbatim.
pub fn burgers_open_flux_normal(u: f64, u_ext: f64, n: f64) -> f64 {
    if n * u >= 0.0 {
        n * burgers_flux(u)
    } else {
        n * burgers_inflow_flux(-n * u_ext, -n * u)
    }
}

/// Entropy boundary term `f_ent + u (F* - f)` at a left inflow boundary, where
/// `f_star` is the numerical flux in the `+x` direction. Equals the boundary
/// contribution to the entropy rate.
pub fn burgers_boundary_term(f_star: f64, u: f64) -> f64 {
    burgers_entropy_pair(u).flux + u * (f_star - burgers_flux(u))
}

/// `-u (f* - f) - u 2 sqrt(|u|/3) (sqrt(|u|/3) u - G)` at a left inflow boundary.
pub fn burgers_condition_residual(u_ext: f64, u: f64) -> f64 {
    let scale = (u.abs() / 3.0).sqrt();
    let g = burgers_boundary_data(u_ext).g;
    let lhs = -u * (burgers_inflow_flux(u_ext, u) - burgers_flux(u));
    let rhs = u * 2.0 * scale * (scale * u - g);
    lhs - rhs
}
