//! Direct matrix evaluation of the boundary-flux condition and the entropy gap.
//!
//! These routines never call the closed-form fluxes' algebra; they assemble
//! `2 M^{-T} N^T S T I- sqrt|Lambda-| (sqrt|Lambda-| W- - G)` from its factors so
//! the closed forms can be checked against it.

use nalgebra::{Matrix3, Vector3};

use super::congruence::{CongruenceSet, ScaledRotatedVars};
use super::regime::Regime;
use super::swe_fluxes::{
    swe_flux_subcritical_inflow, swe_flux_subcritical_outflow, swe_flux_supercritical_inflow,
    swe_flux_supercritical_outflow,
};
use crate::equations::{swe_flux_normal, SweConserved, SwePrim};
use crate::error::Result;

fn masked_sqrt_abs(lambda: [f64; 3], regime: Regime) -> Vector3<f64> {
    let mask = regime.incoming();
    Vector3::from_fn(|k, _| if mask[k] { lambda[k].abs().sqrt() } else { 0.0 })
}

fn eigenvalues(u: &ScaledRotatedVars) -> [f64; 3] {
    [u.vn - u.c, u.vn, u.vn + u.c]
}

fn indicator(regime: Regime) -> Matrix3<f64> {
    let m = regime.incoming();
    Matrix3::from_diagonal(&Vector3::from_fn(|k, _| if m[k] { 1.0 } else { 0.0 }))
}

/// Boundary data `G = sqrt|Lambda-_ext| I- T^T U_ext`.
pub fn boundary_data_vector(set: &CongruenceSet, ext: &SwePrim, n: [f64; 2], g: f64, regime: Regime) -> Vector3<f64> {
    let u = ScaledRotatedVars::new(ext, n, g);
    let w = indicator(regime) * set.t().transpose() * u.vector();
    masked_sqrt_abs(eigenvalues(&u), regime).component_mul(&w)
}

/// `G^T G` for external data at a node of the given regime.
pub fn data_budget(ext: &SwePrim, n: [f64; 2], g: f64, regime: Regime) -> f64 {
    boundary_data_vector(&CongruenceSet::default(), ext, n, g, regime).norm_squared()
}

/// Penalty vector `2 T I- sqrt|Lambda-| (sqrt|Lambda-| W- - G)` in `U` space.
fn penalty(set: &CongruenceSet, u: &ScaledRotatedVars, gvec: &Vector3<f64>, regime: Regime) -> Vector3<f64> {
    let t = set.t();
    let sq = masked_sqrt_abs(eigenvalues(u), regime);
    let w_minus = indicator(regime) * t.transpose() * u.vector();
    let inner = sq.component_mul(&w_minus) - gvec;
    2.0 * t * indicator(regime) * sq.component_mul(&inner)
}

fn regime_flux(q: SweConserved, q_ext: SweConserved, n: [f64; 2], g: f64, regime: Regime) -> Result<[f64; 3]> {
    match regime {
        Regime::SupercriticalOutflow => swe_flux_supercritical_outflow(q, n, g),
        Regime::SubcriticalOutflow => swe_flux_subcritical_outflow(q, q_ext, n, g),
        Regime::SubcriticalInflow => swe_flux_subcritical_inflow(q, q_ext, n, g),
        Regime::SupercriticalInflow => swe_flux_supercritical_inflow(q, q_ext, n, g),
    }
}

/// `(F*_n - F_n) - 2 M^{-T} N^T S T I- sqrt|Lambda-| (sqrt|Lambda-| W- - G)`.
///
/// Vanishes to round-off when the closed-form regime flux satisfies the
/// relation that bounds the entropy rate by `G^T G`.
pub fn condition_residual(
    q: SweConserved,
    q_ext: SweConserved,
    n: [f64; 2],
    g: f64,
    regime: Regime,
) -> Result<[f64; 3]> {
    condition_residual_with(&CongruenceSet::default(), q, q_ext, n, g, regime)
}

pub fn condition_residual_with(
    set: &CongruenceSet,
    q: SweConserved,
    q_ext: SweConserved,
    n: [f64; 2],
    g: f64,
    regime: Regime,
) -> Result<[f64; 3]> {
    let p = q.to_prim()?;
    let e = q_ext.to_prim()?;
    let f_star = regime_flux(q, q_ext, n, g, regime)?;
    let f = swe_flux_normal(q, n, g)?;

    let u = ScaledRotatedVars::new(&p, n, g);
    let gvec = boundary_data_vector(set, &e, n, g, regime);
    let pen = penalty(set, &u, &gvec, regime);

    let s = Matrix3::from_diagonal(&Vector3::new(g, u.c, u.c)) / (2.0 * g).sqrt();
    let rot = Matrix3::new(1.0, 0.0, 0.0, 0.0, n[0], n[1], 0.0, -n[1], n[0]);
    let m = Matrix3::new(g, -0.5 * p.v1, -0.5 * p.v2, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
    let m_inv_t = m
        .transpose()
        .try_inverse()
        .expect("entropy-to-primitive map is invertible for g > 0");
    let rhs = m_inv_t * rot.transpose() * s * pen;
    Ok(std::array::from_fn(|k| (f_star[k] - f[k]) - rhs[k]))
}

/// `W^T Lambda W + U^T 2 T I- sqrt|Lambda-| (sqrt|Lambda-| W- - G) + G^T G`, which
/// equals `(W+)^T Lambda+ W+ + |sqrt|Lambda-| W- - G|^2 >= 0`.
pub fn bound_gap(q: SweConserved, q_ext: SweConserved, n: [f64; 2], g: f64, regime: Regime) -> Result<f64> {
    bound_gap_with(&CongruenceSet::default(), q, q_ext, n, g, regime)
}

pub fn bound_gap_with(
    set: &CongruenceSet,
    q: SweConserved,
    q_ext: SweConserved,
    n: [f64; 2],
    g: f64,
    regime: Regime,
) -> Result<f64> {
    let p = q.to_prim()?;
    let e = q_ext.to_prim()?;
    let u = ScaledRotatedVars::new(&p, n, g);
    let w = set.t().transpose() * u.vector();
    let lam = eigenvalues(&u);
    let wlw: f64 = (0..3).map(|k| lam[k] * w[k] * w[k]).sum();
    let gvec = boundary_data_vector(set, &e, n, g, regime);
    let pen = penalty(set, &u, &gvec, regime);
    Ok(wlw + u.vector().dot(&pen) + gvec.norm_squared())
}
