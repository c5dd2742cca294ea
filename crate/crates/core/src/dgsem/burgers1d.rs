use crate::basis::{lgl_nodes_weights, NodalBasis};
use crate::equations::{burgers_ec_flux, burgers_flux, burgers_llf, burgers_mms, burgers_mms_source};
use crate::error::{Error, Result};
use crate::mesh::Mesh1D;
use crate::open_boundary::{burgers_boundary_data, burgers_open_flux_normal};

use super::{
    element_dt, volume_fluxdiff_1d, BoundarySpec, DtDenominator, EntropyReport, InteriorFlux, Semidiscretization,
    SolutionField,
};

/// Exterior data at the two boundary points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BurgersData {
    /// The manufactured solution `2 + sin(pi (x - t) - 0.7)`.
    Mms,
    Constant(f64),
}

impl BurgersData {
    pub fn value(&self, x: f64, t: f64) -> f64 {
        match *self {
            Self::Mms => burgers_mms(x, t),
            Self::Constant(u) => u,
        }
    }
}

/// Burgers equation on an interval mesh.
#[derive(Debug, Clone)]
pub struct Burgers1d {
    mesh: Mesh1D,
    basis: NodalBasis,
    interior: InteriorFlux,
    left: BoundarySpec,
    right: BoundarySpec,
    data: BurgersData,
    mms_source: bool,
}

fn check_spec(spec: BoundarySpec) -> Result<()> {
    match spec {
        BoundarySpec::RiemannInvariantLlf | BoundarySpec::RiemannInvariantHll | BoundarySpec::Wall => Err(
            Error::Config(format!("boundary spec {} is not available for burgers", spec.name())),
        ),
        _ => Ok(()),
    }
}

impl Burgers1d {
    pub fn new(
        mut mesh: Mesh1D,
        basis: NodalBasis,
        interior: InteriorFlux,
        left: BoundarySpec,
        right: BoundarySpec,
        data: BurgersData,
        mms_source: bool,
    ) -> Result<Self> {
        if interior == InteriorFlux::Hll {
            return Err(Error::Config("hll interior flux is not available for burgers".into()));
        }
        check_spec(left)?;
        check_spec(right)?;
        let periodic = left == BoundarySpec::Periodic;
        if periodic != (right == BoundarySpec::Periodic) {
            return Err(Error::Config("periodic boundaries must be set on both ends".into()));
        }
        mesh.set_periodic(periodic);
        Ok(Self {
            mesh,
            basis,
            interior,
            left,
            right,
            data,
            mms_source,
        })
    }

    pub fn basis(&self) -> &NodalBasis {
        &self.basis
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    fn interface_flux(&self, ul: f64, ur: f64) -> f64 {
        match self.interior {
            InteriorFlux::Ec => burgers_ec_flux(ul, ur),
            _ => burgers_llf(ul, ur),
        }
    }

    /// Outward normal numerical flux at a boundary point with normal `n`.
    fn boundary_flux(&self, spec: BoundarySpec, u: f64, x: f64, n: f64, t: f64) -> f64 {
        let ue = self.data.value(x, t);
        // orient the pair left-to-right for the two-point fluxes
        let (ul, ur) = if n > 0.0 { (u, ue) } else { (ue, u) };
        match spec {
            BoundarySpec::NewNonlinear => burgers_open_flux_normal(u, ue, n),
            BoundarySpec::Ec => n * burgers_ec_flux(ul, ur),
            BoundarySpec::Llf => n * burgers_llf(ul, ur),
            BoundarySpec::ExactData => n * burgers_flux(ue),
            _ => unreachable!("validated in the constructor"),
        }
    }

    fn x(&self, e: usize, i: usize) -> f64 {
        self.mesh.map(e, self.basis.nodes()[i])
    }

    /// Numerical fluxes in the `+x` direction at the `K + 1` vertices.
    fn vertex_fluxes(&self, q: &[f64], t: f64) -> Vec<f64> {
        let np = self.basis.num_nodes();
        let k = self.mesh.num_elements();
        let verts = self.mesh.vertices();
        let mut f = vec![0.0; k + 1];
        for v in 1..k {
            f[v] = self.interface_flux(q[v * np - 1], q[v * np]);
        }
        if self.mesh.is_periodic() {
            let p = self.interface_flux(q[k * np - 1], q[0]);
            f[0] = p;
            f[k] = p;
        } else {
            f[0] = -self.boundary_flux(self.left, q[0], verts[0], -1.0, t);
            f[k] = self.boundary_flux(self.right, q[k * np - 1], verts[k], 1.0, t);
        }
        f
    }
}

impl Semidiscretization for Burgers1d {
    fn layout(&self) -> SolutionField {
        SolutionField::zeros(1, self.basis.num_nodes(), self.mesh.num_elements())
    }

    fn project(&self, f: &dyn Fn(f64, f64, f64) -> Vec<f64>, t: f64) -> SolutionField {
        let mut s = self.layout();
        let np = self.basis.num_nodes();
        for e in 0..self.mesh.num_elements() {
            for i in 0..np {
                s.data[e * np + i] = f(self.x(e, i), 0.0, t)[0];
            }
        }
        s
    }

    fn rhs(&self, q: &SolutionField, t: f64, dq: &mut SolutionField) -> Result<()> {
        let np = self.basis.num_nodes();
        let n = np - 1;
        let w = self.basis.weights();
        let u = &q.data;
        let fstar = self.vertex_fluxes(u, t);
        for e in 0..self.mesh.num_elements() {
            let jac = self.mesh.jacobian(e);
            let ue = &u[e * np..(e + 1) * np];
            let out = &mut dq.data[e * np..(e + 1) * np];
            out.copy_from_slice(&volume_fluxdiff_1d(ue, &self.basis, jac, burgers_ec_flux));
            out[n] -= (fstar[e + 1] - burgers_flux(ue[n])) / (jac * w[n]);
            out[0] += (fstar[e] - burgers_flux(ue[0])) / (jac * w[0]);
            if self.mms_source {
                for (i, o) in out.iter_mut().enumerate() {
                    *o += burgers_mms_source(self.x(e, i), t);
                }
            }
        }
        Ok(())
    }

    fn compute_dt(&self, q: &SolutionField, cfl: f64, dt_max: f64, norm: DtDenominator) -> f64 {
        let np = self.basis.num_nodes();
        (0..self.mesh.num_elements())
            .map(|e| {
                let lambda = q.data[e * np..(e + 1) * np].iter().fold(0.0f64, |m, u| m.max(u.abs()));
                element_dt(cfl, self.mesh.width(e), lambda, self.basis.degree(), norm)
            })
            .fold(dt_max, f64::min)
    }

    fn entropy_report(&self, q: &SolutionField, dq: &SolutionField, t: f64) -> Result<EntropyReport> {
        let np = self.basis.num_nodes();
        let w = self.basis.weights();
        let (mut entropy, mut rate, mut source_power) = (0.0, 0.0, 0.0);
        let mut min_u = f64::INFINITY;
        let mut max_speed = 0.0f64;
        for e in 0..self.mesh.num_elements() {
            let jac = self.mesh.jacobian(e);
            for i in 0..np {
                let u = q.data[e * np + i];
                let wj = w[i] * jac;
                entropy += wj * 0.5 * u * u;
                rate += wj * u * dq.data[e * np + i];
                if self.mms_source {
                    source_power += wj * u * burgers_mms_source(self.x(e, i), t);
                }
                min_u = min_u.min(u);
                max_speed = max_speed.max(u.abs());
            }
        }
        let mut budget = 0.0;
        if !self.mesh.is_periodic() {
            let verts = self.mesh.vertices();
            let k = self.mesh.num_elements();
            for (u, x, n) in [(q.data[0], verts[0], -1.0), (q.data[k * np - 1], verts[k], 1.0)] {
                if n * u < 0.0 {
                    budget += burgers_boundary_data(self.data.value(x, t)).g.powi(2);
                }
            }
        }
        Ok(EntropyReport {
            t,
            entropy,
            rate,
            budget,
            source_power,
            margin: budget + source_power - rate,
            min_h: min_u,
            max_speed,
        })
    }

    fn totals(&self, q: &SolutionField) -> Vec<f64> {
        let np = self.basis.num_nodes();
        let w = self.basis.weights();
        let total = (0..self.mesh.num_elements())
            .map(|e| {
                let jac = self.mesh.jacobian(e);
                (0..np).map(|i| w[i] * jac * q.data[e * np + i]).sum::<f64>()
            })
            .sum();
        vec![total]
    }

    fn min_positive(&self, _q: &SolutionField) -> Option<f64> {
        None
    }

    fn node_coords(&self) -> Vec<(usize, usize, usize, f64, f64)> {
        let np = self.basis.num_nodes();
        (0..self.mesh.num_elements())
            .flat_map(|e| (0..np).map(move |i| (e, i)))
            .map(|(e, i)| (e, i, 0, self.x(e, i), 0.0))
            .collect()
    }

    fn l2_error(&self, q: &SolutionField, t: f64) -> Option<Vec<f64>> {
        if self.data != BurgersData::Mms || !self.mms_source {
            return None;
        }
        let np = self.basis.num_nodes();
        let (xa, wa) = lgl_nodes_weights(2 * self.basis.degree()).ok()?;
        let interp = self.basis.interpolation_matrix(&xa);
        let mut sum = 0.0;
        for e in 0..self.mesh.num_elements() {
            let jac = self.mesh.jacobian(e);
            let ue = &q.data[e * np..(e + 1) * np];
            for (a, (&xi, &wt)) in xa.iter().zip(&wa).enumerate() {
                let uh: f64 = (0..np).map(|j| interp[a * np + j] * ue[j]).sum();
                let err = uh - burgers_mms(self.mesh.map(e, xi), t);
                sum += wt * jac * err * err;
            }
        }
        Some(vec![(sum / self.mesh.length()).sqrt()])
    }
}
