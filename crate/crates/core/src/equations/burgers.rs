//! Inviscid Burgers equation `u_t + (u^2/2)_x = 0` with entropy `u^2/2`.

#[inline]
pub fn burgers_flux(u: f64) -> f64 {
    0.5 * u * u
}

/// Entropy `S`, entropy flux, entropy variable and entropy potential `psi = v f - f_ent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersEntropy {
    pub entropy: f64,
    pub flux: f64,
    pub variable: f64,
    pub potential: f64,
}

pub fn burgers_entropy_pair(u: f64) -> BurgersEntropy {
    BurgersEntropy {
        entropy: 0.5 * u * u,
        flux: u * u * u / 3.0,
        variable: u,
        potential: u * u * u / 6.0,
    }
}

/// Entropy-conservative two-point flux `(uL^2 + uL uR + uR^2) / 6`.
#[inline]
pub fn burgers_ec_flux(ul: f64, ur: f64) -> f64 {
    (ul * ul + ul * ur + ur * ur) / 6.0
}

/// Local Lax-Friedrichs flux.
#[inline]
pub fn burgers_llf(ul: f64, ur: f64) -> f64 {
    let lambda = ul.abs().max(ur.abs());
    0.5 * (burgers_flux(ul) + burgers_flux(ur)) - 0.5 * lambda * (ur - ul)
}
