//! Boundary matrix `A(beta)`, its congruence `T Lambda T^T` and the variable
//! sets it acts on.

use nalgebra::{Matrix3, Vector3};

use crate::equations::SwePrim;

/// Positive root of `alpha^2 + 2 alpha - 2 = 0`.
pub const ALPHA: f64 = 0.732_050_807_568_877_2;
/// `1 - alpha = alpha^2 / 2 = 2 - sqrt(3)`.
pub const BETA: f64 = 0.267_949_192_431_122_7;

/// Parameters of the skew-symmetric family and the matrices built from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CongruenceSet {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for CongruenceSet {
    fn default() -> Self {
        Self {
            alpha: ALPHA,
            beta: BETA,
        }
    }
}

impl CongruenceSet {
    /// Uses `beta = 1 - alpha`; only the default alpha satisfies `2 beta = alpha^2`.
    pub fn with_alpha(alpha: f64) -> Self {
        Self {
            alpha,
            beta: 1.0 - alpha,
        }
    }

    /// Symmetric boundary matrix of the skew-symmetric formulation.
    pub fn a(&self, vn: f64, c: f64) -> Matrix3<f64> {
        boundary_matrix(self.beta, vn, c)
    }

    pub fn t(&self) -> Matrix3<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = self.alpha * s;
        Matrix3::new(a, 0.0, a, -s, 0.0, s, 0.0, 1.0, 0.0)
    }

    pub fn lambda(vn: f64, c: f64) -> Matrix3<f64> {
        Matrix3::from_diagonal(&Vector3::new(vn - c, vn, vn + c))
    }

    /// Entrywise max of `|T Lambda T^T - A|`.
    pub fn congruence_defect(&self, vn: f64, c: f64) -> f64 {
        let t = self.t();
        let d = t * Self::lambda(vn, c) * t.transpose() - self.a(vn, c);
        d.amax()
    }
}

/// `A(beta)` for arbitrary `beta`; its quadratic form does not depend on `beta`.
pub fn boundary_matrix(beta: f64, vn: f64, c: f64) -> Matrix3<f64> {
    let off = (1.0 - beta) * c;
    Matrix3::new(2.0 * beta * vn, off, 0.0, off, vn, 0.0, 0.0, 0.0, vn)
}

/// `U^T A(beta) U` for the scaled rotated variables of a state.
pub fn boundary_matrix_quadratic_form(beta: f64, u: &ScaledRotatedVars) -> f64 {
    let v = u.vector();
    v.dot(&(boundary_matrix(beta, u.vn, u.c) * v))
}

/// `U = (g h, c v_n, c v_tau) / sqrt(2 g)` with `c = sqrt(g h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledRotatedVars {
    pub u: [f64; 3],
    pub h: f64,
    pub c: f64,
    pub vn: f64,
    pub vt: f64,
}

impl ScaledRotatedVars {
    pub fn new(p: &SwePrim, n: [f64; 2], g: f64) -> Self {
        let c = p.wave_speed(g);
        let vn = p.normal_velocity(n);
        let vt = p.tangential_velocity(n);
        let s = 1.0 / (2.0 * g).sqrt();
        Self {
            u: [s * g * p.h, s * c * vn, s * c * vt],
            h: p.h,
            c,
            vn,
            vt,
        }
    }

    /// Recovers `(h, v_n, v_tau)`; requires `U[0] > 0`.
    pub fn invert(u: [f64; 3], g: f64) -> (f64, f64, f64) {
        let s = (2.0 * g).sqrt();
        let h = s * u[0] / g;
        let c = (g * h).sqrt();
        (h, s * u[1] / c, s * u[2] / c)
    }

    pub fn vector(&self) -> Vector3<f64> {
        Vector3::from(self.u)
    }
}

/// Nonlinear characteristic variables `W = T^T U` in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharVars {
    pub w: [f64; 3],
    pub lambda: [f64; 3],
}

impl CharVars {
    pub fn new(p: &SwePrim, n: [f64; 2], g: f64) -> Self {
        Self::with_alpha(p, n, g, ALPHA)
    }

    pub fn with_alpha(p: &SwePrim, n: [f64; 2], g: f64, alpha: f64) -> Self {
        let c = p.wave_speed(g);
        let vn = p.normal_velocity(n);
        let vt = p.tangential_velocity(n);
        let s = c / (2.0 * g.sqrt());
        Self {
            w: [
                s * (alpha * c - vn),
                s * std::f64::consts::SQRT_2 * vt,
                s * (alpha * c + vn),
            ],
            lambda: [vn - c, vn, vn + c],
        }
    }

    /// `W^T Lambda W`.
    pub fn quadratic_form(&self) -> f64 {
        (0..3).map(|k| self.lambda[k] * self.w[k] * self.w[k]).sum()
    }
}
