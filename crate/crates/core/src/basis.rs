//! Legendre-Gauss-Lobatto (LGL) collocation machinery.
//!
//! The nodal basis collocates interpolation and quadrature on the LGL nodes. The
//! resulting diagonal mass matrix `M` and differentiation matrix `D` satisfy the
//! summation-by-parts identity `M D + (M D)^T = diag(-1, 0, ..., 0, 1)`, which is
//! what lets the discrete entropy analysis move volume terms onto the surface.

use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Immutable LGL basis of degree `N` (N + 1 nodes).
#[derive(Debug, Clone)]
pub struct NodalBasis {
    degree: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    bary_weights: Vec<f64>,
    /// Row-major `(N+1) x (N+1)`: `diff[i * (N+1) + j] = l_j'(x_i)`.
    diff: Vec<f64>,
}

impl NodalBasis {
    pub fn new(degree: usize) -> Result<Self> {
        let (nodes, weights) = lgl_nodes_weights(degree)?;
        let diff = lagrange_diff_matrix(&nodes)?;
        let bary_weights = barycentric_weights(&nodes)?;
        Ok(Self {
            degree,
            nodes,
            weights,
            bary_weights,
            diff,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_nodes(&self) -> usize {
        self.degree + 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Entry `D_ij = l_j'(x_i)`.
    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.diff[i * (self.degree + 1) + j]
    }

    pub fn diff_matrix(&self) -> &[f64] {
        &self.diff
    }

    /// Applies `D` to nodal values.
    pub fn differentiate(&self, values: &[f64]) -> Vec<f64> {
        let n = self.num_nodes();
        assert_eq!(values.len(), n);
        (0..n).map(|i| (0..n).map(|j| self.d(i, j) * values[j]).sum()).collect()
    }

    /// LGL quadrature of nodal values on `[-1, 1]`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        barycentric_eval_with(values, &self.nodes, &self.bary_weights, x)
    }

    /// Matrix (row-major, `targets.len() x (N+1)`) mapping nodal values to values at `targets`.
    pub fn interpolation_matrix(&self, targets: &[f64]) -> Vec<f64> {
        let n = self.num_nodes();
        let mut out = vec![0.0; targets.len() * n];
        let mut unit = vec![0.0; n];
        for (r, &x) in targets.iter().enumerate() {
            for j in 0..n {
                unit.iter_mut().for_each(|u| *u = 0.0);
                unit[j] = 1.0;
                out[r * n + j] = self.interpolate(&unit, x);
            }
        }
        out
    }
}

/// Legendre polynomial `P_n(x)` and its derivative via the three-term recurrence.
pub fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    match n {
        0 => (1.0, 0.0),
        1 => (x, 1.0),
        _ => {
            let (mut p_prev, mut p) = (1.0, x);
            let (mut dp_prev, mut dp) = (0.0, 1.0);
            for k in 2..=n {
                let kf = k as f64;
                let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
                let dp_next = dp_prev + (2.0 * kf - 1.0) * p;
                p_prev = p;
                p = p_next;
                dp_prev = dp;
                dp = dp_next;
            }
            (p, dp)
        }
    }
}

/// LGL nodes (ascending) and weights for degree `n`.
///
/// Interior nodes are the roots of `P_N'`, found by Newton iteration from
/// Chebyshev-Gauss-Lobatto initial guesses. Weights are `2 / (N (N+1) P_N(x_i)^2)`.
pub fn lgl_nodes_weights(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidDegree(n));
    }
    let nf = n as f64;
    let scale = nf * (nf + 1.0);
    let mut nodes = vec![0.0; n + 1];
    nodes[0] = -1.0;
    nodes[n] = 1.0;
    for i in 1..n {
        let mut x = -(std::f64::consts::PI * i as f64 / nf).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre_and_derivative(n, x);
            // Legendre ODE gives P'' without another recurrence.
            let ddp = (2.0 * x * dp - scale * p) / (1.0 - x * x);
            let delta = dp / ddp;
            x -= delta;
            if delta.abs() <= NEWTON_TOL * x.abs().max(1.0) {
                break;
            }
        }
        nodes[i] = x;
    }
    // Exact symmetry of the node set.
    for i in 0..=n / 2 {
        let m = 0.5 * (nodes[n - i] - nodes[i]);
        nodes[i] = -m;
        nodes[n - i] = m;
    }
    if n.is_multiple_of(2) {
        nodes[n / 2] = 0.0;
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (p, _) = legendre_and_derivative(n, x);
            2.0 / (scale * p * p)
        })
        .collect();
    Ok((nodes, weights))
}

fn barycentric_weights(nodes: &[f64]) -> Result<Vec<f64>> {
    let n = nodes.len();
    let mut w = vec![1.0; n];
    for j in 0..n {
        for k in 0..n {
            if k != j {
                let diff = nodes[j] - nodes[k];
                if diff == 0.0 {
                    return Err(Error::DuplicateNodes(j.min(k), j.max(k)));
                }
                w[j] /= diff;
            }
        }
    }
    Ok(w)
}

/// Lagrange differentiation matrix `D_ij = l_j'(x_i)`, row-major.
///
/// Diagonal entries use the negative row sum so that constants are annihilated
/// to round-off.
pub fn lagrange_diff_matrix(nodes: &[f64]) -> Result<Vec<f64>> {
    let n = nodes.len();
    let w = barycentric_weights(nodes)?;
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if i != j {
                let v = (w[j] / w[i]) / (nodes[i] - nodes[j]);
                d[i * n + j] = v;
                row_sum += v;
            }
        }
        d[i * n + i] = -row_sum;
    }
    Ok(d)
}

/// Evaluates the interpolant of `values` on `nodes` at `x`.
pub fn barycentric_eval(values: &[f64], nodes: &[f64], x: f64) -> f64 {
    let w = barycentric_weights(nodes).expect("distinct interpolation nodes");
    barycentric_eval_with(values, nodes, &w, x)
}

fn barycentric_eval_with(values: &[f64], nodes: &[f64], bary: &[f64], x: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&xj, &fj), &wj) in nodes.iter().zip(values).zip(bary) {
        let diff = x - xj;
        if diff == 0.0 {
            return fj;
        }
        let t = wj / diff;
        num += t * fj;
        den += t;
    }
    num / den
}
