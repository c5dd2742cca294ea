//! Closed-form open-boundary fluxes for the shallow water equations, one per
//! flow regime. Each couples interior and external states through geometric
//! means of wave speeds.

use super::congruence::ALPHA;
use super::regime::{classify_regime, Regime};
use crate::equations::{swe_flux_normal, SweConserved, SwePrim};
use crate::error::{Error, Result};

/// Auxiliary variables shared by the regime fluxes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoMeans {
    pub c: f64,
    pub vn: f64,
    pub c_ext: f64,
    pub vn_ext: f64,
    pub vt_ext: f64,
    /// `sqrt(h h_ext)`
    pub h_bar: f64,
    pub lambda1: f64,
    /// `sqrt(|v_n| |v_n_ext|)`
    pub lambda2: f64,
    pub lambda3: f64,
}

fn checked_sqrt(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value.sqrt())
    } else {
        Err(Error::NegativeRadicand { name, value })
    }
}

impl GeoMeans {
    fn base(p: &SwePrim, e: &SwePrim, n: [f64; 2], g: f64) -> Self {
        Self {
            c: p.wave_speed(g),
            vn: p.normal_velocity(n),
            c_ext: e.wave_speed(g),
            vn_ext: e.normal_velocity(n),
            vt_ext: e.tangential_velocity(n),
            h_bar: (p.h * e.h).sqrt(),
            lambda1: 0.0,
            lambda2: 0.0,
            lambda3: 0.0,
        }
    }

    /// Regime-specific geometric means. Outflow uses `c - v_n`; inflow regimes
    /// use `|v_n| + c`, `|v_n|` and `|v_n| - c`.
    pub fn new(p: &SwePrim, e: &SwePrim, n: [f64; 2], g: f64, regime: Regime) -> Result<Self> {
        let mut m = Self::base(p, e, n, g);
        match regime {
            Regime::SupercriticalOutflow => {}
            Regime::SubcriticalOutflow => {
                m.lambda1 = checked_sqrt("lambda1", (m.c - m.vn) * (m.c_ext - m.vn_ext))?;
            }
            Regime::SubcriticalInflow | Regime::SupercriticalInflow => {
                m.lambda1 = ((m.vn.abs() + m.c) * (m.vn_ext.abs() + m.c_ext)).sqrt();
                m.lambda2 = (m.vn.abs() * m.vn_ext.abs()).sqrt();
                if regime == Regime::SupercriticalInflow {
                    m.lambda3 = checked_sqrt("lambda3", (m.vn.abs() - m.c) * (m.vn_ext.abs() - m.c_ext))?;
                }
            }
        }
        Ok(m)
    }
}

fn require(p: &SwePrim, n: [f64; 2], g: f64, expected: Regime) -> Result<()> {
    let found = classify_regime(p.normal_velocity(n), p.wave_speed(g))?;
    if found == expected {
        Ok(())
    } else {
        Err(Error::RegimeMismatch {
            expected: expected.name(),
            found: found.name(),
        })
    }
}

fn prims(q: SweConserved, q_ext: SweConserved) -> Result<(SwePrim, SwePrim)> {
    Ok((q.to_prim()?, q_ext.to_prim()?))
}

/// No incoming characteristics: the physical normal flux.
pub fn swe_flux_supercritical_outflow(q: SweConserved, n: [f64; 2], g: f64) -> Result<[f64; 3]> {
    swe_flux_normal(q, n, g)
}

pub fn swe_flux_subcritical_outflow(q: SweConserved, q_ext: SweConserved, n: [f64; 2], g: f64) -> Result<[f64; 3]> {
    let (p, e) = prims(q, q_ext)?;
    require(&p, n, g, Regime::SubcriticalOutflow)?;
    let m = GeoMeans::new(&p, &e, n, g, Regime::SubcriticalOutflow)?;
    Ok(subcritical_outflow(&p, &m, n, g))
}

#[inline]
fn subcritical_outflow(p: &SwePrim, m: &GeoMeans, n: [f64; 2], g: f64) -> [f64; 3] {
    let a = ALPHA;
    let (h, c, vn) = (p.h, m.c, m.vn);
    let data = m.lambda1 * m.c_ext * (a * m.c_ext - m.vn_ext);
    let mass = 0.5 * a * h * vn + (1.0 - a) * h * c + a / (2.0 * g) * c * vn * vn - a / (2.0 * g) * data;
    let mom = |vk: f64, nk: f64| {
        (0.25 * a + 0.5) * h * vk * vn
            + 0.5 * (1.0 - a) * h * c * vk
            + a / (4.0 * g) * c * vk * vn * vn
            + (1.0 - a) * 0.5 * g * h * h * nk
            + 0.5 * h * vn * ((1.0 + a) * c - vn) * nk
            - data * (a * vk - 2.0 * c * nk) / (4.0 * g)
    };
    [mass, mom(p.v1, n[0]), mom(p.v2, n[1])]
}

pub fn swe_flux_subcritical_inflow(q: SweConserved, q_ext: SweConserved, n: [f64; 2], g: f64) -> Result<[f64; 3]> {
    let (p, e) = prims(q, q_ext)?;
    require(&p, n, g, Regime::SubcriticalInflow)?;
    let m = GeoMeans::new(&p, &e, n, g, Regime::SubcriticalInflow)?;
    Ok(subcritical_inflow(&p, &m, n, g))
}

#[inline]
fn subcritical_inflow(p: &SwePrim, m: &GeoMeans, n: [f64; 2], g: f64) -> [f64; 3] {
    let a = ALPHA;
    let (h, c, vn) = (p.h, m.c, m.vn);
    let data = m.lambda1 * m.c_ext * (a * m.c_ext - m.vn_ext);
    let tangential = m.lambda2 * m.h_bar * m.vt_ext;
    let mass = 0.5 * a * h * vn + (1.0 - a) * h * c + a / (2.0 * g) * c * vn * vn - a / (2.0 * g) * data;
    let mom = |vk: f64, nk: f64| {
        (0.25 * a - 0.5) * h * vk * vn
            + 0.5 * (1.0 - a) * h * c * vk
            + a / (4.0 * g) * c * vk * vn * vn
            + (1.0 - a) * 0.5 * g * h * h * nk
            + 0.5 * h * vn * ((1.0 + a) * c + vn) * nk
            - data * (a * vk - 2.0 * c * nk) / (4.0 * g)
    };
    [
        mass,
        mom(p.v1, n[0]) + tangential * n[1],
        mom(p.v2, n[1]) - tangential * n[0],
    ]
}

pub fn swe_flux_supercritical_inflow(q: SweConserved, q_ext: SweConserved, n: [f64; 2], g: f64) -> Result<[f64; 3]> {
    let (p, e) = prims(q, q_ext)?;
    require(&p, n, g, Regime::SupercriticalInflow)?;
    let m = GeoMeans::new(&p, &e, n, g, Regime::SupercriticalInflow)?;
    Ok(supercritical_inflow(&p, &m, n, g))
}

#[inline]
fn supercritical_inflow(p: &SwePrim, m: &GeoMeans, n: [f64; 2], g: f64) -> [f64; 3] {
    let a = ALPHA;
    let (h, c, vn) = (p.h, m.c, m.vn);
    let data1 = m.lambda1 * m.c_ext * (a * m.c_ext - m.vn_ext);
    let data3 = m.lambda3 * m.c_ext * (a * m.c_ext + m.vn_ext);
    let tangential = m.lambda2 * m.h_bar * m.vt_ext;
    let mass = (a - 1.0) * h * vn - a / (2.0 * g) * (data1 + data3);
    let mom = |vk: f64, nk: f64| {
        (0.5 * a - 1.0) * h * vk * vn + (1.0 - 2.0 * a) * 0.5 * g * h * h * nk
            - data1 * (a * vk - 2.0 * c * nk) / (4.0 * g)
            - data3 * (a * vk + 2.0 * c * nk) / (4.0 * g)
    };
    [
        mass,
        mom(p.v1, n[0]) + tangential * n[1],
        mom(p.v2, n[1]) - tangential * n[0],
    ]
}

/// Classifies the interior state and applies the matching regime flux.
pub fn swe_open_boundary_flux(q: SweConserved, q_ext: SweConserved, n: [f64; 2], g: f64) -> Result<([f64; 3], Regime)> {
    let (p, e) = prims(q, q_ext)?;
    let regime = classify_regime(p.normal_velocity(n), p.wave_speed(g))?;
    let m = GeoMeans::new(&p, &e, n, g, regime)?;
    let flux = match regime {
        Regime::SupercriticalOutflow => swe_flux_normal(q, n, g)?,
        Regime::SubcriticalOutflow => subcritical_outflow(&p, &m, n, g),
        Regime::SubcriticalInflow => subcritical_inflow(&p, &m, n, g),
        Regime::SupercriticalInflow => supercritical_inflow(&p, &m, n, g),
    };
    Ok((flux, regime))
}
