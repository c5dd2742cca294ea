//! Split-form DGSEM semidiscretizations and the discrete entropy monitor.
//!
//! Volume terms use flux differencing with an entropy-conservative (or any
//! symmetric, consistent) two-point flux. Surface terms are applied in strong
//! form at the face nodes: `-(s_hat / (J w_end)) (F*_n - F_n)`.

mod burgers1d;
mod swe2d;

pub use burgers1d::{Burgers1d, BurgersData};
pub use swe2d::{Swe2d, SweData, SweSource};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Two-point flux used at interior interfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteriorFlux {
    Ec,
    Llf,
    Hll,
}

/// Numerical flux applied at the faces carrying one boundary tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySpec {
    /// Regime-dispatched flux whose entropy rate is bounded by data.
    NewNonlinear,
    /// Depth from data, outgoing Riemann invariant extrapolated, then LLF.
    RiemannInvariantLlf,
    /// As above with HLL.
    RiemannInvariantHll,
    /// Entropy-conservative flux against the exterior data.
    Ec,
    /// Local Lax-Friedrichs against the exterior data.
    Llf,
    /// Physical flux of the exterior data.
    ExactData,
    Periodic,
    /// Reflecting wall: EC flux against the mirrored state, `(0, g h^2 n / 2)`.
    Wall,
}

impl BoundarySpec {
    pub fn name(self) -> &'static str {
        match self {
            Self::NewNonlinear => "new_nonlinear",
            Self::RiemannInvariantLlf => "riemann_invariant_llf",
            Self::RiemannInvariantHll => "riemann_invariant_hll",
            Self::Ec => "ec",
            Self::Llf => "llf",
            Self::ExactData => "exact_data",
            Self::Periodic => "periodic",
            Self::Wall => "wall",
        }
    }
}

/// Nodal solution stored as `data[(e * nodes_per_element + node) * nvar + v]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    pub nvar: usize,
    pub nodes_per_element: usize,
    pub num_elements: usize,
    pub data: Vec<f64>,
}

impl SolutionField {
    pub fn zeros(nvar: usize, nodes_per_element: usize, num_elements: usize) -> Self {
        Self {
            nvar,
            nodes_per_element,
            num_elements,
            data: vec![0.0; nvar * nodes_per_element * num_elements],
        }
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(self.nvar, self.nodes_per_element, self.num_elements)
    }

    #[inline]
    pub fn offset(&self, e: usize, node: usize) -> usize {
        (e * self.nodes_per_element + node) * self.nvar
    }

    pub fn node(&self, e: usize, node: usize) -> &[f64] {
        let o = self.offset(e, node);
        &self.data[o..o + self.nvar]
    }

    pub fn element(&self, e: usize) -> &[f64] {
        let len = self.nodes_per_element * self.nvar;
        &self.data[e * len..(e + 1) * len]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

/// One sample of the entropy monitor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub t: f64,
    /// `sum w J S(q)`.
    pub entropy: f64,
    /// `sum w J V . dq/dt`.
    pub rate: f64,
    /// Face quadrature of `G^T G s_hat` over open boundaries.
    pub budget: f64,
    /// `sum w J V . s` for volume sources.
    pub source_power: f64,
    /// `budget + source_power - rate`; nonnegative when the bound holds.
    pub margin: f64,
    /// Smallest water height (smallest `u` for Burgers).
    pub min_h: f64,
    pub max_speed: f64,
}

impl EntropyReport {
    /// Tolerance the margin is checked against.
    pub fn tolerance(&self) -> f64 {
        1e-8 * self.entropy.abs().max(1.0)
    }

    pub fn bound_holds(&self) -> bool {
        self.margin >= -self.tolerance()
    }
}

/// A semidiscrete operator `dq/dt = R(q, t)` with its time-step and entropy
/// diagnostics.
pub trait Semidiscretization: Sync {
    fn layout(&self) -> SolutionField;

    /// Nodal interpolation of the initial state or exact solution at `t`.
    fn project(&self, f: &dyn Fn(f64, f64, f64) -> Vec<f64>, t: f64) -> SolutionField;

    fn rhs(&self, q: &SolutionField, t: f64, dq: &mut SolutionField) -> Result<()>;

    /// `CFL * min_e dx_e / (lambda_e d)`, capped by `dt_max`, with the
    /// denominator `d` chosen by `norm`.
    fn compute_dt(&self, q: &SolutionField, cfl: f64, dt_max: f64, norm: DtDenominator) -> f64;

    fn entropy_report(&self, q: &SolutionField, dq: &SolutionField, t: f64) -> Result<EntropyReport>;

    /// Conserved totals `sum w J q` per variable.
    fn totals(&self, q: &SolutionField) -> Vec<f64>;

    /// Smallest value of the positivity-constrained variable, if any.
    fn min_positive(&self, q: &SolutionField) -> Option<f64>;

    /// Physical coordinates of each node as `(element, i, j, x, y)`.
    fn node_coords(&self) -> Vec<(usize, usize, usize, f64, f64)>;

    /// Volume-normalized L2 error per variable against the exact solution, on
    /// Gauss-Lobatto analysis nodes of degree `2N`.
    fn l2_error(&self, q: &SolutionField, t: f64) -> Option<Vec<f64>>;
}

/// Polynomial-degree scaling in the CFL condition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DtDenominator {
    /// `2N + 1`.
    #[default]
    TwoNPlusOne,
    /// `N + 1`, the number of nodes per direction.
    NPlusOne,
}

impl DtDenominator {
    pub fn factor(self, degree: usize) -> f64 {
        match self {
            Self::TwoNPlusOne => (2 * degree + 1) as f64,
            Self::NPlusOne => (degree + 1) as f64,
        }
    }
}

/// Element step `cfl * dx / (lambda d)`, with zero speed giving `inf`.
pub(crate) fn element_dt(cfl: f64, dx: f64, lambda: f64, degree: usize, norm: DtDenominator) -> f64 {
    if lambda > 0.0 {
        cfl * dx / (lambda * norm.factor(degree))
    } else {
        f64::INFINITY
    }
}

/// One-dimensional flux differencing on an element with constant Jacobian:
/// `-(2 / J) sum_j D_ij f*(u_i, u_j)`.
pub fn volume_fluxdiff_1d(
    u: &[f64],
    basis: &crate::basis::NodalBasis,
    jacobian: f64,
    flux: impl Fn(f64, f64) -> f64,
) -> Vec<f64> {
    let np = u.len();
    let mut out = vec![0.0; np];
    for i in 0..np {
        out[i] += basis.d(i, i) * flux(u[i], u[i]);
        for j in i + 1..np {
            let f = flux(u[i], u[j]);
            out[i] += basis.d(i, j) * f;
            out[j] += basis.d(j, i) * f;
        }
    }
    out.iter_mut().for_each(|x| *x *= -2.0 / jacobian);
    out
}

#[cfg(test)]
mod tests;
