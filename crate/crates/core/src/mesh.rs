//! Interval meshes and straight-sided quadrilateral meshes with metric terms.
//!
//! Quadrilaterals are bilinear maps of the reference square `[-1, 1]^2` with
//! corners ordered counterclockwise (SW, SE, NE, NW). For such maps the
//! cross-product metric terms are polynomials of degree one, so the discrete
//! metric identities and free-stream preservation hold exactly.

use serde::{Deserialize, Serialize};

use crate::basis::NodalBasis;
use crate::error::{Error, Result};

/// Uniform partition of `[a, b]`.
#[derive(Debug, Clone)]
pub struct Mesh1D {
    vertices: Vec<f64>,
    periodic: bool,
}

impl Mesh1D {
    pub fn num_elements(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[f64] {
        &self.vertices
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn set_periodic(&mut self, periodic: bool) {
        self.periodic = periodic;
    }

    /// Element Jacobian `dx/dxi = (x_{e+1} - x_e) / 2`.
    pub fn jacobian(&self, e: usize) -> f64 {
        0.5 * (self.vertices[e + 1] - self.vertices[e])
    }

    pub fn width(&self, e: usize) -> f64 {
        self.vertices[e + 1] - self.vertices[e]
    }

    /// Physical coordinate of reference point `xi` in element `e`.
    pub fn map(&self, e: usize, xi: f64) -> f64 {
        self.vertices[e] + (xi + 1.0) * self.jacobian(e)
    }

    pub fn length(&self) -> f64 {
        self.vertices[self.vertices.len() - 1] - self.vertices[0]
    }
}

pub fn build_interval_mesh(a: f64, b: f64, elements: usize) -> Result<Mesh1D> {
    if elements == 0 {
        return Err(Error::InvalidMesh("interval mesh needs at least one element".into()));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidMesh(format!("interval [{a}, {b}] is empty")));
    }
    let h = (b - a) / elements as f64;
    let mut vertices: Vec<f64> = (0..=elements).map(|k| a + k as f64 * h).collect();
    vertices[elements] = b;
    Ok(Mesh1D {
        vertices,
        periodic: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryTag {
    Inflow,
    Outflow,
    Open,
    Wall,
    Periodic,
}

impl BoundaryTag {
    pub fn name(self) -> &'static str {
        match self {
            Self::Inflow => "inflow",
            Self::Outflow => "outflow",
            Self::Open => "open",
            Self::Wall => "wall",
            Self::Periodic => "periodic",
        }
    }
}

/// Faces of the reference square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    South = 0,
    East = 1,
    North = 2,
    West = 3,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::South, Side::East, Side::North, Side::West];

    /// Volume node `(i, j)` of face node `k`; south/north faces run along `xi`,
    /// east/west faces along `eta`.
    #[inline]
    pub fn volume_node(self, k: usize, n: usize) -> (usize, usize) {
        match self {
            Side::South => (k, 0),
            Side::North => (k, n),
            Side::West => (0, k),
            Side::East => (n, k),
        }
    }
}

/// Tag assignment for the four sides of a structured channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideTags {
    pub south: BoundaryTag,
    pub east: BoundaryTag,
    pub north: BoundaryTag,
    pub west: BoundaryTag,
}

impl Default for SideTags {
    fn default() -> Self {
        Self {
            south: BoundaryTag::Inflow,
            east: BoundaryTag::Wall,
            north: BoundaryTag::Outflow,
            west: BoundaryTag::Wall,
        }
    }
}

impl SideTags {
    pub fn get(&self, side: Side) -> BoundaryTag {
        match side {
            Side::South => self.south,
            Side::East => self.east,
            Side::North => self.north,
            Side::West => self.west,
        }
    }
}

/// Face shared by two elements. Face node `k` on `first` couples to node
/// `k` (or `N - k` when `flipped`) on `second`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interface {
    pub first: (usize, Side),
    pub second: (usize, Side),
    pub flipped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFace {
    pub element: usize,
    pub side: Side,
    pub tag: BoundaryTag,
}

#[derive(Debug, Clone)]
pub struct QuadMesh {
    /// Corners counterclockwise: SW, SE, NE, NW.
    elements: Vec<[[f64; 2]; 4]>,
    interfaces: Vec<Interface>,
    boundary_faces: Vec<BoundaryFace>,
}

impl QuadMesh {
    /// Assembles a mesh and checks that every element side is either on exactly
    /// one interface or exactly one boundary face.
    pub fn new(
        elements: Vec<[[f64; 2]; 4]>,
        interfaces: Vec<Interface>,
        boundary_faces: Vec<BoundaryFace>,
    ) -> Result<Self> {
        let mut seen = vec![0u8; elements.len() * 4];
        let mut mark = |e: usize, s: Side| -> Result<()> {
            if e >= elements.len() {
                return Err(Error::InvalidMesh(format!("face refers to element {e}")));
            }
            seen[e * 4 + s as usize] += 1;
            Ok(())
        };
        for f in &interfaces {
            if f.first == f.second {
                return Err(Error::InvalidMesh("interface couples a face to itself".into()));
            }
            mark(f.first.0, f.first.1)?;
            mark(f.second.0, f.second.1)?;
        }
        for f in &boundary_faces {
            if f.tag == BoundaryTag::Periodic {
                return Err(Error::InvalidMesh("periodic faces must be stored as interfaces".into()));
            }
            mark(f.element, f.side)?;
        }
        if let Some(idx) = seen.iter().position(|&c| c != 1) {
            return Err(Error::InvalidMesh(format!(
                "element {} side {:?} is covered {} times",
                idx / 4,
                Side::ALL[idx % 4],
                seen[idx]
            )));
        }
        Ok(Self {
            elements,
            interfaces,
            boundary_faces,
        })
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn corners(&self, e: usize) -> &[[f64; 2]; 4] {
        &self.elements[e]
    }

    pub fn interfaces(&self) -> &[Interface] {
        &self.interfaces
    }

    pub fn boundary_faces(&self) -> &[BoundaryFace] {
        &self.boundary_faces
    }

    pub fn tags(&self) -> Vec<BoundaryTag> {
        let mut t: Vec<_> = self.boundary_faces.iter().map(|f| f.tag).collect();
        t.sort();
        t.dedup();
        t
    }

    /// Total area from the corner polygons.
    pub fn area(&self) -> f64 {
        self.elements
            .iter()
            .map(|c| {
                let mut a = 0.0;
                for k in 0..4 {
                    let p = c[k];
                    let q = c[(k + 1) % 4];
                    a += p[0] * q[1] - q[0] * p[1];
                }
                0.5 * a
            })
            .sum()
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Structured `nx x ny` mesh of congruent parallelograms spanned by `edge_u`
/// (the `xi` direction) and `edge_v` (the `eta` direction) from `origin`.
///
/// Sides tagged periodic must come in opposite pairs and are wired as interfaces.
pub fn build_parallelogram_channel(
    origin: [f64; 2],
    edge_u: [f64; 2],
    edge_v: [f64; 2],
    nx: usize,
    ny: usize,
    tags: SideTags,
) -> Result<QuadMesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidMesh(
            "channel needs at least one element per direction".into(),
        ));
    }
    let area = cross(edge_u, edge_v);
    let scale = (edge_u[0].hypot(edge_u[1]) * edge_v[0].hypot(edge_v[1])).max(f64::MIN_POSITIVE);
    if !(area > 1e-12 * scale) {
        return Err(Error::InvalidMesh(format!(
            "edge vectors {edge_u:?}, {edge_v:?} are degenerate or clockwise"
        )));
    }
    let periodic_x = tags.east == BoundaryTag::Periodic || tags.west == BoundaryTag::Periodic;
    let periodic_y = tags.south == BoundaryTag::Periodic || tags.north == BoundaryTag::Periodic;
    if periodic_x && tags.east != tags.west {
        return Err(Error::InvalidMesh("east/west periodic tags must be paired".into()));
    }
    if periodic_y && tags.south != tags.north {
        return Err(Error::InvalidMesh("south/north periodic tags must be paired".into()));
    }

    let point = |i: usize, j: usize| {
        let s = i as f64 / nx as f64;
        let t = j as f64 / ny as f64;
        [
            origin[0] + s * edge_u[0] + t * edge_v[0],
            origin[1] + s * edge_u[1] + t * edge_v[1],
        ]
    };
    let id = |i: usize, j: usize| i + nx * j;

    let mut elements = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            elements.push([point(i, j), point(i + 1, j), point(i + 1, j + 1), point(i, j + 1)]);
        }
    }

    let mut interfaces = Vec::new();
    let mut boundary_faces = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            if i + 1 < nx {
                interfaces.push(Interface {
                    first: (id(i, j), Side::East),
                    second: (id(i + 1, j), Side::West),
                    flipped: false,
                });
            }
            if j + 1 < ny {
                interfaces.push(Interface {
                    first: (id(i, j), Side::North),
                    second: (id(i, j + 1), Side::South),
                    flipped: false,
                });
            }
        }
    }
    for j in 0..ny {
        if periodic_x {
            interfaces.push(Interface {
                first: (id(nx - 1, j), Side::East),
                second: (id(0, j), Side::West),
                flipped: false,
            });
        } else {
            boundary_faces.push(BoundaryFace {
                element: id(0, j),
                side: Side::West,
                tag: tags.west,
            });
            boundary_faces.push(BoundaryFace {
                element: id(nx - 1, j),
                side: Side::East,
                tag: tags.east,
            });
        }
    }
    for i in 0..nx {
        if periodic_y {
            interfaces.push(Interface {
                first: (id(i, ny - 1), Side::North),
                second: (id(i, 0), Side::South),
                flipped: false,
            });
        } else {
            boundary_faces.push(BoundaryFace {
                element: id(i, 0),
                side: Side::South,
                tag: tags.south,
            });
            boundary_faces.push(BoundaryFace {
                element: id(i, ny - 1),
                side: Side::North,
                tag: tags.north,
            });
        }
    }
    QuadMesh::new(elements, interfaces, boundary_faces)
}

/// Geometry of one face node: outward unit normal and the surface scaling
/// between reference and physical normals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceGeometry {
    pub normal: [f64; 2],
    pub s_hat: f64,
}

/// Per-node geometry of a [`QuadMesh`] for a given basis.
#[derive(Debug, Clone)]
pub struct MetricTerms {
    n: usize,
    /// Per element and node `i + (N+1) j`.
    pub coords: Vec<[f64; 2]>,
    pub jacobian: Vec<f64>,
    /// Contravariant vectors `J a^1 = (y_eta, -x_eta)` and `J a^2 = (-y_xi, x_xi)`.
    pub ja1: Vec<[f64; 2]>,
    pub ja2: Vec<[f64; 2]>,
    /// Per element, side and face node.
    pub faces: Vec<FaceGeometry>,
    /// Shortest physical edge of each element.
    pub min_edge: Vec<f64>,
}

impl MetricTerms {
    pub fn nodes_per_element(&self) -> usize {
        (self.n + 1) * (self.n + 1)
    }

    #[inline]
    pub fn node(&self, e: usize, i: usize, j: usize) -> usize {
        e * (self.n + 1) * (self.n + 1) + i + (self.n + 1) * j
    }

    #[inline]
    pub fn face(&self, e: usize, side: Side, k: usize) -> &FaceGeometry {
        &self.faces[(e * 4 + side as usize) * (self.n + 1) + k]
    }
}

pub(crate) fn bilinear(c: &[[f64; 2]; 4], xi: f64, eta: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
    let mut x = [0.0; 2];
    let mut dxi = [0.0; 2];
    let mut deta = [0.0; 2];
    for d in 0..2 {
        x[d] = 0.25
            * ((1.0 - xi) * (1.0 - eta) * c[0][d]
                + (1.0 + xi) * (1.0 - eta) * c[1][d]
                + (1.0 + xi) * (1.0 + eta) * c[2][d]
                + (1.0 - xi) * (1.0 + eta) * c[3][d]);
        dxi[d] =
            0.25 * (-(1.0 - eta) * c[0][d] + (1.0 - eta) * c[1][d] + (1.0 + eta) * c[2][d] - (1.0 + eta) * c[3][d]);
        deta[d] = 0.25 * (-(1.0 - xi) * c[0][d] - (1.0 + xi) * c[1][d] + (1.0 + xi) * c[2][d] + (1.0 - xi) * c[3][d]);
    }
    (x, dxi, deta)
}

pub fn compute_metrics(mesh: &QuadMesh, basis: &NodalBasis) -> Result<MetricTerms> {
    let n = basis.degree();
    let np = n + 1;
    let ne = mesh.num_elements();
    let xs = basis.nodes();
    let mut m = MetricTerms {
        n,
        coords: Vec::with_capacity(ne * np * np),
        jacobian: Vec::with_capacity(ne * np * np),
        ja1: Vec::with_capacity(ne * np * np),
        ja2: Vec::with_capacity(ne * np * np),
        faces: Vec::with_capacity(ne * 4 * np),
        min_edge: Vec::with_capacity(ne),
    };
    for e in 0..ne {
        let c = mesh.corners(e);
        for j in 0..np {
            for i in 0..np {
                let (x, dxi, deta) = bilinear(c, xs[i], xs[j]);
                let jac = dxi[0] * deta[1] - deta[0] * dxi[1];
                if !(jac > 0.0) {
                    return Err(Error::NonpositiveJacobian {
                        element: e,
                        jacobian: jac,
                    });
                }
                m.coords.push(x);
                m.jacobian.push(jac);
                m.ja1.push([deta[1], -deta[0]]);
                m.ja2.push([-dxi[1], dxi[0]]);
            }
        }
        let base = e * np * np;
        for side in Side::ALL {
            for k in 0..np {
                let (i, j) = side.volume_node(k, n);
                let idx = base + i + np * j;
                let (v, sign) = match side {
                    Side::East => (m.ja1[idx], 1.0),
                    Side::West => (m.ja1[idx], -1.0),
                    Side::North => (m.ja2[idx], 1.0),
                    Side::South => (m.ja2[idx], -1.0),
                };
                let s_hat = v[0].hypot(v[1]);
                m.faces.push(FaceGeometry {
                    normal: [sign * v[0] / s_hat, sign * v[1] / s_hat],
                    s_hat,
                });
            }
        }
        let edge = (0..4)
            .map(|k| {
                let p = c[k];
                let q = c[(k + 1) % 4];
                (q[0] - p[0]).hypot(q[1] - p[1])
            })
            .fold(f64::INFINITY, f64::min);
        m.min_edge.push(edge);
    }
    Ok(m)
}
