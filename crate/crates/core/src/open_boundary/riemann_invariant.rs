//! External state for a Riemann solver built from linear characteristic
//! analysis: prescribe the depth, extrapolate the outgoing Riemann invariant.

use crate::equations::{SweConserved, SwePrim};
use crate::error::{Error, Result};

/// Builds the exterior state from interior `q` and prescribed data.
///
/// For subcritical nodes the exterior depth `h_b` comes from the data,
/// `v_n,b = v_n + 2 (c - c_b)` keeps the outgoing invariant `v_n + 2c`, and the
/// tangential velocity is extrapolated. Supercritical outflow returns the
/// interior state; supercritical inflow returns the prescribed state.
pub fn riemann_invariant_external_state(
    q: SweConserved,
    prescribed: &SwePrim,
    n: [f64; 2],
    g: f64,
) -> Result<SweConserved> {
    let p = q.to_prim()?;
    if !(prescribed.h > 0.0) {
        return Err(Error::NonpositiveHeight(prescribed.h));
    }
    let c = p.wave_speed(g);
    let vn = p.normal_velocity(n);
    if vn.abs() >= c {
        return Ok(if vn >= 0.0 { q } else { prescribed.to_cons() });
    }
    let hb = prescribed.h;
    let cb = (g * hb).sqrt();
    let vnb = vn + 2.0 * (c - cb);
    Ok(SwePrim::from_rotated(hb, vnb, p.tangential_velocity(n), n).to_cons())
}
