//! Two-dimensional shallow water equations over a flat bottom.
//!
//! Conserved variables `q = (h, h v1, h v2)`, entropy
//! `S = h |v|^2 / 2 + g h^2 / 2` (the total energy).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquationParams {
    pub g: f64,
    #[serde(default)]
    pub f0: f64,
    #[serde(default)]
    pub beta_cor: f64,
}

impl EquationParams {
    pub fn new(g: f64) -> Result<Self> {
        Self::with_coriolis(g, 0.0, 0.0)
    }

    pub fn with_coriolis(g: f64, f0: f64, beta_cor: f64) -> Result<Self> {
        if !(g > 0.0) {
            return Err(Error::Config(format!("gravity must be positive, got {g}")));
        }
        Ok(Self { g, f0, beta_cor })
    }

    /// Coriolis parameter on the beta plane.
    pub fn coriolis(&self, y: f64) -> f64 {
        self.f0 + self.beta_cor * y
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweConserved {
    pub h: f64,
    pub hv1: f64,
    pub hv2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwePrim {
    pub h: f64,
    pub v1: f64,
    pub v2: f64,
}

impl SweConserved {
    pub fn new(h: f64, hv1: f64, hv2: f64) -> Self {
        Self { h, hv1, hv2 }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.h, self.hv1, self.hv2]
    }

    pub fn check(self) -> Result<Self> {
        if self.h > 0.0 {
            Ok(self)
        } else {
            Err(Error::NonpositiveHeight(self.h))
        }
    }

    pub fn to_prim(self) -> Result<SwePrim> {
        let q = self.check()?;
        Ok(SwePrim {
            h: q.h,
            v1: q.hv1 / q.h,
            v2: q.hv2 / q.h,
        })
    }
}

impl SwePrim {
    pub fn new(h: f64, v1: f64, v2: f64) -> Self {
        Self { h, v1, v2 }
    }

    pub fn to_cons(self) -> SweConserved {
        SweConserved::new(self.h, self.h * self.v1, self.h * self.v2)
    }

    pub fn normal_velocity(&self, n: [f64; 2]) -> f64 {
        n[0] * self.v1 + n[1] * self.v2
    }

    pub fn tangential_velocity(&self, n: [f64; 2]) -> f64 {
        -n[1] * self.v1 + n[0] * self.v2
    }

    pub fn wave_speed(&self, g: f64) -> f64 {
        (g * self.h).sqrt()
    }

    /// Rebuilds velocities from normal and tangential components.
    pub fn from_rotated(h: f64, vn: f64, vt: f64, n: [f64; 2]) -> Self {
        Self::new(h, n[0] * vn - n[1] * vt, n[1] * vn + n[0] * vt)
    }
}

#[inline]
fn flux_prim(p: &SwePrim, n: [f64; 2], g: f64) -> [f64; 3] {
    let vn = p.normal_velocity(n);
    let hvn = p.h * vn;
    let pressure = 0.5 * g * p.h * p.h;
    [hvn, hvn * p.v1 + pressure * n[0], hvn * p.v2 + pressure * n[1]]
}

/// Physical flux `n1 f1 + n2 f2`. The direction need not be normalized.
pub fn swe_flux_normal(q: SweConserved, n: [f64; 2], g: f64) -> Result<[f64; 3]> {
    Ok(flux_prim(&q.to_prim()?, n, g))
}

/// Entropy, normal entropy flux, entropy variables and normal entropy potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweEntropy {
    pub entropy: f64,
    pub flux_n: f64,
    pub variables: [f64; 3],
    pub potential_n: f64,
}

pub fn swe_entropy_pair(q: SweConserved, n: [f64; 2], g: f64) -> Result<SweEntropy> {
    let p = q.to_prim()?;
    let ke = p.v1 * p.v1 + p.v2 * p.v2;
    let vn = p.normal_velocity(n);
    Ok(SweEntropy {
        entropy: 0.5 * p.h * ke + 0.5 * g * p.h * p.h,
        flux_n: 0.5 * p.h * vn * ke + g * p.h * p.h * vn,
        variables: [g * p.h - 0.5 * ke, p.v1, p.v2],
        potential_n: 0.5 * g * p.h * p.h * vn,
    })
}

/// Entropy variables `(g h - |v|^2/2, v1, v2)`.
pub fn entropy_variables(q: SweConserved, g: f64) -> Result<[f64; 3]> {
    let p = q.to_prim()?;
    Ok([g * p.h - 0.5 * (p.v1 * p.v1 + p.v2 * p.v2), p.v1, p.v2])
}

pub fn entropy(q: SweConserved, g: f64) -> Result<f64> {
    let p = q.to_prim()?;
    Ok(0.5 * p.h * (p.v1 * p.v1 + p.v2 * p.v2) + 0.5 * g * p.h * p.h)
}

/// Entropy-conservative two-point flux with arithmetic means, contracted
/// with `direction` (not necessarily unit length).
pub fn swe_ec_flux(ql: SweConserved, qr: SweConserved, direction: [f64; 2], g: f64) -> Result<[f64; 3]> {
    let l = ql.to_prim()?;
    let r = qr.to_prim()?;
    Ok(ec_flux_prim(&l, &r, direction, g))
}

#[inline]
pub(crate) fn ec_flux_prim(l: &SwePrim, r: &SwePrim, n: [f64; 2], g: f64) -> [f64; 3] {
    let h_avg = 0.5 * (l.h + r.h);
    let h2_avg = 0.5 * (l.h * l.h + r.h * r.h);
    let v1 = 0.5 * (l.v1 + r.v1);
    let v2 = 0.5 * (l.v2 + r.v2);
    let mass = h_avg * (n[0] * v1 + n[1] * v2);
    let p = 0.5 * g * h2_avg;
    [mass, mass * v1 + p * n[0], mass * v2 + p * n[1]]
}

/// Local Lax-Friedrichs flux in the unit direction `n`.
pub fn swe_llf(ql: SweConserved, qr: SweConserved, n: [f64; 2], g: f64) -> Result<[f64; 3]> {
    let l = ql.to_prim()?;
    let r = qr.to_prim()?;
    let fl = flux_prim(&l, n, g);
    let fr = flux_prim(&r, n, g);
    let lambda = (l.normal_velocity(n).abs() + l.wave_speed(g)).max(r.normal_velocity(n).abs() + r.wave_speed(g));
    let (a, b) = (ql.to_array(), qr.to_array());
    Ok(std::array::from_fn(|k| {
        0.5 * (fl[k] + fr[k]) - 0.5 * lambda * (b[k] - a[k])
    }))
}

/// HLL flux with Davis wave-speed bounds in the unit direction `n`.
pub fn swe_hll(ql: SweConserved, qr: SweConserved, n: [f64; 2], g: f64) -> Result<[f64; 3]> {
    let l = ql.to_prim()?;
    let r = qr.to_prim()?;
    let (vl, vr) = (l.normal_velocity(n), r.normal_velocity(n));
    let (cl, cr) = (l.wave_speed(g), r.wave_speed(g));
    let s_min = (vl - cl).min(vr - cr);
    let s_max = (vl + cl).max(vr + cr);
    let fl = flux_prim(&l, n, g);
    if s_min >= 0.0 {
        return Ok(fl);
    }
    let fr = flux_prim(&r, n, g);
    if s_max <= 0.0 {
        return Ok(fr);
    }
    let (a, b) = (ql.to_array(), qr.to_array());
    Ok(std::array::from_fn(|k| {
        (s_max * fl[k] - s_min * fr[k] + s_min * s_max * (b[k] - a[k])) / (s_max - s_min)
    }))
}
