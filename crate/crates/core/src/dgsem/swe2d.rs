use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::basis::{lgl_nodes_weights, NodalBasis};
use crate::equations::swe::ec_flux_prim;
use crate::equations::{
    coriolis_source, swe_ec_flux, swe_flux_normal, swe_hll, swe_llf, ChannelMms, EquationParams, SweConserved, SwePrim,
};
use crate::error::{Error, Result};
use crate::mesh::{bilinear, compute_metrics, BoundaryTag, MetricTerms, QuadMesh, Side};
use crate::open_boundary::{classify_regime, data_budget, riemann_invariant_external_state, swe_open_boundary_flux};

use super::{element_dt, BoundarySpec, DtDenominator, EntropyReport, InteriorFlux, Semidiscretization, SolutionField};

/// Exterior data supplied to open boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweData {
    Channel(ChannelMms),
    Constant(SwePrim),
}

impl SweData {
    pub fn value(&self, x: f64, y: f64, t: f64) -> SwePrim {
        match self {
            Self::Channel(m) => m.solution(x, y, t),
            Self::Constant(p) => *p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweSource {
    None,
    Channel(ChannelMms),
    Coriolis,
}

/// Shallow water equations on a straight-sided quadrilateral mesh.
#[derive(Debug, Clone)]
pub struct Swe2d {
    mesh: QuadMesh,
    basis: NodalBasis,
    metrics: MetricTerms,
    params: EquationParams,
    interior: InteriorFlux,
    face_specs: Vec<BoundarySpec>,
    data: SweData,
    source: SweSource,
}

type FaceFlux = [f64; 3];

impl Swe2d {
    pub fn new(
        mesh: QuadMesh,
        basis: NodalBasis,
        params: EquationParams,
        interior: InteriorFlux,
        specs: &BTreeMap<BoundaryTag, BoundarySpec>,
        data: SweData,
        source: SweSource,
    ) -> Result<Self> {
        let face_specs = mesh
            .boundary_faces()
            .iter()
            .map(|f| match specs.get(&f.tag) {
                None => Err(Error::Config(format!("no boundary spec for tag {}", f.tag.name()))),
                Some(BoundarySpec::Periodic) => Err(Error::Config(format!(
                    "tag {} is a boundary face; periodic sides must be wired in the mesh",
                    f.tag.name()
                ))),
                Some(&s) => Ok(s),
            })
            .collect::<Result<Vec<_>>>()?;
        let metrics = compute_metrics(&mesh, &basis)?;
        Ok(Self {
            mesh,
            basis,
            metrics,
            params,
            interior,
            face_specs,
            data,
            source,
        })
    }

    pub fn mesh(&self) -> &QuadMesh {
        &self.mesh
    }

    pub fn basis(&self) -> &NodalBasis {
        &self.basis
    }

    pub fn metrics(&self) -> &MetricTerms {
        &self.metrics
    }

    pub fn params(&self) -> &EquationParams {
        &self.params
    }

    fn np(&self) -> usize {
        self.basis.num_nodes()
    }

    fn cons(q: &SolutionField, idx: usize) -> SweConserved {
        SweConserved::new(q.data[3 * idx], q.data[3 * idx + 1], q.data[3 * idx + 2])
    }

    fn primitives(&self, q: &SolutionField) -> Result<Vec<SwePrim>> {
        (0..q.data.len() / 3)
            .into_par_iter()
            .map(|idx| Self::cons(q, idx).to_prim())
            .collect()
    }

    #[inline]
    fn face_slot(&self, e: usize, side: Side, k: usize) -> usize {
        (e * 4 + side as usize) * self.np() + k
    }

    fn interface_flux(&self, q1: SweConserved, q2: SweConserved, n: [f64; 2]) -> Result<FaceFlux> {
        let g = self.params.g;
        match self.interior {
            InteriorFlux::Ec => swe_ec_flux(q1, q2, n, g),
            InteriorFlux::Llf => swe_llf(q1, q2, n, g),
            InteriorFlux::Hll => swe_hll(q1, q2, n, g),
        }
    }

    /// Outward normal numerical flux at one boundary node.
    pub fn boundary_flux(
        &self,
        spec: BoundarySpec,
        q: SweConserved,
        xy: [f64; 2],
        n: [f64; 2],
        t: f64,
    ) -> Result<FaceFlux> {
        let g = self.params.g;
        let ext = self.data.value(xy[0], xy[1], t);
        match spec {
            BoundarySpec::NewNonlinear => Ok(swe_open_boundary_flux(q, ext.to_cons(), n, g)?.0),
            BoundarySpec::RiemannInvariantLlf => {
                let qb = riemann_invariant_external_state(q, &ext, n, g)?;
                swe_llf(q, qb, n, g)
            }
            BoundarySpec::RiemannInvariantHll => {
                let qb = riemann_invariant_external_state(q, &ext, n, g)?;
                swe_hll(q, qb, n, g)
            }
            BoundarySpec::Ec => swe_ec_flux(q, ext.to_cons(), n, g),
            BoundarySpec::Llf => swe_llf(q, ext.to_cons(), n, g),
            BoundarySpec::ExactData => swe_flux_normal(ext.to_cons(), n, g),
            BoundarySpec::Wall => {
                let p = q.check()?.h;
                let pressure = 0.5 * g * p * p;
                Ok([0.0, pressure * n[0], pressure * n[1]])
            }
            BoundarySpec::Periodic => unreachable!("rejected in the constructor"),
        }
    }

    /// Numerical flux in each element's outward normal direction, one slot per
    /// element side and face node. Interior faces are evaluated once and shared.
    fn face_fluxes(&self, q: &SolutionField, t: f64) -> Result<Vec<FaceFlux>> {
        let np = self.np();
        let n = np - 1;
        let m = &self.metrics;
        let node_of = |e: usize, side: Side, k: usize| {
            let (i, j) = side.volume_node(k, n);
            m.node(e, i, j)
        };
        let interior: Vec<Vec<FaceFlux>> = self
            .mesh
            .interfaces()
            .par_iter()
            .map(|f| {
                let (e1, s1) = f.first;
                let (e2, s2) = f.second;
                (0..np)
                    .map(|k| {
                        let k2 = if f.flipped { n - k } else { k };
                        let normal = m.face(e1, s1, k).normal;
                        self.interface_flux(
                            Self::cons(q, node_of(e1, s1, k)),
                            Self::cons(q, node_of(e2, s2, k2)),
                            normal,
                        )
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let boundary: Vec<Vec<FaceFlux>> = self
            .mesh
            .boundary_faces()
            .par_iter()
            .zip(self.face_specs.par_iter())
            .map(|(f, &spec)| {
                (0..np)
                    .map(|k| {
                        let idx = node_of(f.element, f.side, k);
                        let geo = m.face(f.element, f.side, k);
                        self.boundary_flux(spec, Self::cons(q, idx), m.coords[idx], geo.normal, t)
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;

        let mut out = vec![[0.0; 3]; self.mesh.num_elements() * 4 * np];
        for (f, vals) in self.mesh.interfaces().iter().zip(&interior) {
            for (k, v) in vals.iter().enumerate() {
                let k2 = if f.flipped { n - k } else { k };
                out[self.face_slot(f.first.0, f.first.1, k)] = *v;
                out[self.face_slot(f.second.0, f.second.1, k2)] = [-v[0], -v[1], -v[2]];
            }
        }
        for (f, vals) in self.mesh.boundary_faces().iter().zip(&boundary) {
            for (k, v) in vals.iter().enumerate() {
                out[self.face_slot(f.element, f.side, k)] = *v;
            }
        }
        Ok(out)
    }

    fn source_at(&self, q: SweConserved, xy: [f64; 2], t: f64) -> [f64; 3] {
        match &self.source {
            SweSource::None => [0.0; 3],
            SweSource::Channel(m) => m.source(xy[0], xy[1], t),
            SweSource::Coriolis => coriolis_source(q, xy[1], &self.params),
        }
    }

    /// Element-local volume, surface and source contributions.
    fn element_rhs(&self, e: usize, q: &SolutionField, prims: &[SwePrim], faces: &[FaceFlux], t: f64, out: &mut [f64]) {
        let np = self.np();
        let n = np - 1;
        let g = self.params.g;
        let m = &self.metrics;
        let b = &self.basis;
        let base = e * np * np;
        out.fill(0.0);
        let mut acc = |local: usize, d: f64, f: &[f64; 3]| {
            for v in 0..3 {
                out[3 * local + v] += d * f[v];
            }
        };
        for line in 0..np {
            for a in 0..np {
                // xi direction: nodes (a, line) and (c, line)
                let la = a + np * line;
                let pa = &prims[base + la];
                acc(la, b.d(a, a), &ec_flux_prim(pa, pa, m.ja1[base + la], g));
                for c in a + 1..np {
                    let lc = c + np * line;
                    let ja = avg(m.ja1[base + la], m.ja1[base + lc]);
                    let f = ec_flux_prim(pa, &prims[base + lc], ja, g);
                    acc(la, b.d(a, c), &f);
                    acc(lc, b.d(c, a), &f);
                }
                // eta direction: nodes (line, a) and (line, c)
                let la = line + np * a;
                let pa = &prims[base + la];
                acc(la, b.d(a, a), &ec_flux_prim(pa, pa, m.ja2[base + la], g));
                for c in a + 1..np {
                    let lc = line + np * c;
                    let ja = avg(m.ja2[base + la], m.ja2[base + lc]);
                    let f = ec_flux_prim(pa, &prims[base + lc], ja, g);
                    acc(la, b.d(a, c), &f);
                    acc(lc, b.d(c, a), &f);
                }
            }
        }
        for local in 0..np * np {
            let s = -2.0 / m.jacobian[base + local];
            out[3 * local..3 * local + 3].iter_mut().for_each(|x| *x *= s);
        }
        let w_end = b.weights()[n];
        for side in Side::ALL {
            for k in 0..np {
                let (i, j) = side.volume_node(k, n);
                let local = i + np * j;
                let geo = m.face(e, side, k);
                let fstar = faces[self.face_slot(e, side, k)];
                let p = &prims[base + local];
                let f = ec_flux_prim(p, p, geo.normal, g);
                let scale = geo.s_hat / (m.jacobian[base + local] * w_end);
                for v in 0..3 {
                    out[3 * local + v] -= scale * (fstar[v] - f[v]);
                }
            }
        }
        if self.source != SweSource::None {
            for local in 0..np * np {
                let s = self.source_at(Self::cons(q, base + local), m.coords[base + local], t);
                for v in 0..3 {
                    out[3 * local + v] += s[v];
                }
            }
        }
    }

    fn exact(&self) -> Option<&ChannelMms> {
        match (&self.data, &self.source) {
            (SweData::Channel(m), SweSource::Channel(_)) => Some(m),
            _ => None,
        }
    }
}

#[inline]
fn avg(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

impl Semidiscretization for Swe2d {
    fn layout(&self) -> SolutionField {
        let np = self.np();
        SolutionField::zeros(3, np * np, self.mesh.num_elements())
    }

    fn project(&self, f: &dyn Fn(f64, f64, f64) -> Vec<f64>, t: f64) -> SolutionField {
        let mut s = self.layout();
        for (idx, xy) in self.metrics.coords.iter().enumerate() {
            let v = f(xy[0], xy[1], t);
            s.data[3 * idx..3 * idx + 3].copy_from_slice(&v[..3]);
        }
        s
    }

    fn rhs(&self, q: &SolutionField, t: f64, dq: &mut SolutionField) -> Result<()> {
        let prims = self.primitives(q)?;
        let faces = self.face_fluxes(q, t)?;
        let chunk = 3 * self.np() * self.np();
        dq.data
            .par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(e, out)| self.element_rhs(e, q, &prims, &faces, t, out));
        Ok(())
    }

    fn compute_dt(&self, q: &SolutionField, cfl: f64, dt_max: f64, norm: DtDenominator) -> f64 {
        let npe = self.np() * self.np();
        let g = self.params.g;
        (0..self.mesh.num_elements())
            .map(|e| {
                let lambda = (0..npe).fold(0.0f64, |acc, l| {
                    let c = Self::cons(q, e * npe + l);
                    let (v1, v2) = (c.hv1 / c.h, c.hv2 / c.h);
                    acc.max(v1.abs().max(v2.abs()) + (g * c.h).sqrt())
                });
                element_dt(cfl, self.metrics.min_edge[e], lambda, self.basis.degree(), norm)
            })
            .fold(dt_max, f64::min)
    }

    fn entropy_report(&self, q: &SolutionField, dq: &SolutionField, t: f64) -> Result<EntropyReport> {
        let g = self.params.g;
        let np = self.np();
        let n = np - 1;
        let w = self.basis.weights();
        let m = &self.metrics;
        let (mut entropy, mut rate, mut source_power) = (0.0, 0.0, 0.0);
        let mut min_h = f64::INFINITY;
        let mut max_speed = 0.0f64;
        for e in 0..self.mesh.num_elements() {
            for j in 0..np {
                for i in 0..np {
                    let idx = m.node(e, i, j);
                    let c = Self::cons(q, idx);
                    let p = c.to_prim()?;
                    let wj = w[i] * w[j] * m.jacobian[idx];
                    let ke = 0.5 * (p.v1 * p.v1 + p.v2 * p.v2);
                    let v = [g * p.h - ke, p.v1, p.v2];
                    entropy += wj * (p.h * ke + 0.5 * g * p.h * p.h);
                    rate += wj * (0..3).map(|k| v[k] * dq.data[3 * idx + k]).sum::<f64>();
                    let s = self.source_at(c, m.coords[idx], t);
                    source_power += wj * (0..3).map(|k| v[k] * s[k]).sum::<f64>();
                    min_h = min_h.min(p.h);
                    max_speed = max_speed.max((2.0 * ke).sqrt() + p.wave_speed(g));
                }
            }
        }
        let mut budget = 0.0;
        for (f, &spec) in self.mesh.boundary_faces().iter().zip(&self.face_specs) {
            if spec == BoundarySpec::Wall {
                continue;
            }
            for k in 0..np {
                let (i, j) = f.side.volume_node(k, n);
                let idx = m.node(f.element, i, j);
                let geo = m.face(f.element, f.side, k);
                let p = Self::cons(q, idx).to_prim()?;
                let regime = classify_regime(p.normal_velocity(geo.normal), p.wave_speed(g))?;
                let xy = m.coords[idx];
                let ext = self.data.value(xy[0], xy[1], t);
                budget += w[k] * geo.s_hat * data_budget(&ext, geo.normal, g, regime);
            }
        }
        Ok(EntropyReport {
            t,
            entropy,
            rate,
            budget,
            source_power,
            margin: budget + source_power - rate,
            min_h,
            max_speed,
        })
    }

    fn totals(&self, q: &SolutionField) -> Vec<f64> {
        let np = self.np();
        let w = self.basis.weights();
        let m = &self.metrics;
        let mut t = vec![0.0; 3];
        for e in 0..self.mesh.num_elements() {
            for j in 0..np {
                for i in 0..np {
                    let idx = m.node(e, i, j);
                    let wj = w[i] * w[j] * m.jacobian[idx];
                    for v in 0..3 {
                        t[v] += wj * q.data[3 * idx + v];
                    }
                }
            }
        }
        t
    }

    fn min_positive(&self, q: &SolutionField) -> Option<f64> {
        Some(q.data.iter().step_by(3).fold(f64::INFINITY, |a, &h| a.min(h)))
    }

    fn node_coords(&self) -> Vec<(usize, usize, usize, f64, f64)> {
        let np = self.np();
        let mut out = Vec::with_capacity(self.metrics.coords.len());
        for e in 0..self.mesh.num_elements() {
            for j in 0..np {
                for i in 0..np {
                    let xy = self.metrics.coords[self.metrics.node(e, i, j)];
                    out.push((e, i, j, xy[0], xy[1]));
                }
            }
        }
        out
    }

    fn l2_error(&self, q: &SolutionField, t: f64) -> Option<Vec<f64>> {
        let exact = self.exact()?;
        let np = self.np();
        let (xa, wa) = lgl_nodes_weights(2 * self.basis.degree()).ok()?;
        let na = xa.len();
        let interp = self.basis.interpolation_matrix(&xa);
        let mut sum = [0.0; 3];
        let mut tmp = vec![[0.0; 3]; na * np];
        for e in 0..self.mesh.num_elements() {
            // interpolate along xi, then eta
            for j in 0..np {
                for a in 0..na {
                    let mut s = [0.0; 3];
                    for i in 0..np {
                        let idx = self.metrics.node(e, i, j);
                        for v in 0..3 {
                            s[v] += interp[a * np + i] * q.data[3 * idx + v];
                        }
                    }
                    tmp[a + na * j] = s;
                }
            }
            let corners = self.mesh.corners(e);
            for bb in 0..na {
                for a in 0..na {
                    let mut s = [0.0; 3];
                    for j in 0..np {
                        for v in 0..3 {
                            s[v] += interp[bb * np + j] * tmp[a + na * j][v];
                        }
                    }
                    let (xy, dxi, deta) = bilinear(corners, xa[a], xa[bb]);
                    let jac = dxi[0] * deta[1] - deta[0] * dxi[1];
                    let ex = exact.solution(xy[0], xy[1], t).to_cons().to_array();
                    for v in 0..3 {
                        sum[v] += wa[a] * wa[bb] * jac * (s[v] - ex[v]).powi(2);
                    }
                }
            }
        }
        let area = self.mesh.area();
        Some(sum.iter().map(|s| (s / area).sqrt()).collect())
    }
}
