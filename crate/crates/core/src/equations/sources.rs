//! Manufactured solutions, their source terms, the Coriolis source and the
//! geostrophic adjustment initial condition.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use super::swe::{EquationParams, SweConserved, SwePrim};

const BURGERS_PHASE: f64 = 0.7;

/// Smooth, strictly positive Burgers solution `2 + sin(pi (x - t) - 0.7)`.
pub fn burgers_mms(x: f64, t: f64) -> f64 {
    2.0 + (PI * (x - t) - BURGERS_PHASE).sin()
}

pub fn burgers_mms_source(x: f64, t: f64) -> f64 {
    let arg = PI * (x - t) - BURGERS_PHASE;
    PI * arg.cos() * (1.0 + arg.sin())
}

/// `(0, f h v2, -f h v1)` with `f = f0 + beta y`.
pub fn coriolis_source(q: SweConserved, y: f64, params: &EquationParams) -> [f64; 3] {
    let f = params.coriolis(y);
    [0.0, f * q.hv2, -f * q.hv1]
}

/// Gaussian height pulse carried by the constant velocity `(1, 1)/sqrt(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelMms {
    pub h0: f64,
    pub g: f64,
}

impl ChannelMms {
    pub fn new(h0: f64, g: f64) -> Self {
        Self { h0, g }
    }

    fn pulse(&self, x: f64, y: f64, t: f64) -> (f64, f64, f64) {
        let dx = x - t * FRAC_1_SQRT_2 + 2.0 * SQRT_2;
        let dy = y - t * FRAC_1_SQRT_2 + FRAC_1_SQRT_2;
        (dx, dy, (-8.0 * (dx * dx + dy * dy)).exp())
    }

    pub fn solution(&self, x: f64, y: f64, t: f64) -> SwePrim {
        let (_, _, e) = self.pulse(x, y, t);
        SwePrim::new((self.h0 + e) / (2.0 * self.g), FRAC_1_SQRT_2, FRAC_1_SQRT_2)
    }

    /// `(0, g h h_x, g h h_y)`.
    pub fn source(&self, x: f64, y: f64, t: f64) -> [f64; 3] {
        let (dx, dy, e) = self.pulse(x, y, t);
        let h = (self.h0 + e) / (2.0 * self.g);
        let hx = -16.0 * dx * e / (2.0 * self.g);
        let hy = -16.0 * dy * e / (2.0 * self.g);
        [0.0, self.g * h * hx, self.g * h * hy]
    }

    /// Exact `d/dt` of the conserved variables.
    pub fn time_derivative(&self, x: f64, y: f64, t: f64) -> [f64; 3] {
        let (dx, dy, e) = self.pulse(x, y, t);
        let ht = 16.0 * FRAC_1_SQRT_2 * (dx + dy) * e / (2.0 * self.g);
        [ht, ht * FRAC_1_SQRT_2, ht * FRAC_1_SQRT_2]
    }

    /// Background normal Froude number `|v| / sqrt(g h)` away from the pulse.
    pub fn background_froude(&self) -> f64 {
        1.0 / (self.h0 / 2.0).sqrt()
    }
}

/// Elliptical height bump at rest, relaxing under rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeostrophicIc {
    pub a0: f64,
    pub lambda: f64,
    pub re: f64,
    pub ri: f64,
}

impl Default for GeostrophicIc {
    fn default() -> Self {
        Self {
            a0: 0.5,
            lambda: 2.5,
            re: 0.1,
            ri: 1.0,
        }
    }
}

impl GeostrophicIc {
    pub fn initial(&self, x: f64, y: f64) -> SwePrim {
        let sl = self.lambda.sqrt();
        let r = ((sl * x).powi(2) + (y / sl).powi(2)).sqrt();
        let h = 1.0 + 0.5 * self.a0 * (1.0 - ((r - self.ri) / self.re).tanh());
        SwePrim::new(h, 0.0, 0.0)
    }
}
