//! Scenario files: a TOML schema with unknown-key rejection, validation and
//! construction of the discretization, initial state and run parameters.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::basis::NodalBasis;
use crate::dgsem::EntropyReport;
use crate::dgsem::{
    BoundarySpec, Burgers1d, BurgersData, DtDenominator, InteriorFlux, Semidiscretization, SolutionField, Swe2d,
    SweData, SweSource,
};
use crate::equations::{burgers_mms, ChannelMms, EquationParams, GeostrophicIc, SwePrim};
use crate::error::{Error, Result};
use crate::mesh::{build_interval_mesh, build_parallelogram_channel, BoundaryTag, SideTags};
use crate::timeloop::{self, RunConfig, RunResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    Burgers,
    Swe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    BurgersMms,
    SweChannel,
    Geostrophic,
}

/// Interval (`a`, `b`, `elements`, end tags) or parallelogram channel
/// (`origin`, `edge_u`, `edge_v`, `nx`, `ny`, side tags).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub elements: Option<usize>,
    pub left: Option<BoundaryTag>,
    pub right: Option<BoundaryTag>,
    pub origin: Option<[f64; 2]>,
    pub edge_u: Option<[f64; 2]>,
    pub edge_v: Option<[f64; 2]>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub tags: Option<SideTags>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsConfig {
    pub g: Option<f64>,
    pub f0: Option<f64>,
    pub beta_cor: Option<f64>,
    pub h0: Option<f64>,
    pub a0: Option<f64>,
    pub lambda: Option<f64>,
    pub re: Option<f64>,
    pub ri: Option<f64>,
    /// Depth of the resting exterior state used as open-boundary data.
    pub exterior_h: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub entropy: Option<String>,
    pub snapshot: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub equation: Equation,
    pub scenario: ScenarioKind,
    pub degree: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub dt_max: Option<f64>,
    pub interior_flux: InteriorFlux,
    #[serde(default)]
    pub log_stride: usize,
    #[serde(default)]
    pub dt_denominator: DtDenominator,
    /// Relative entropy-margin guard; see [`RunConfig::entropy_guard`].
    pub entropy_guard: Option<f64>,
    pub mesh: MeshConfig,
    pub boundary: BTreeMap<BoundaryTag, BoundarySpec>,
    #[serde(default)]
    pub physics: PhysicsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn missing(field: &str) -> Error {
    Error::Config(format!("missing field `{field}`"))
}

fn positive(field: &str, v: Option<f64>) -> Result<f64> {
    let v = v.ok_or_else(|| missing(field))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("`{field}` must be positive, got {v}")))
    }
}

/// A built scenario ready to run.
pub struct Scenario {
    pub config: ScenarioConfig,
    pub disc: Box<dyn Semidiscretization>,
    pub initial: SolutionField,
    pub run: RunConfig,
}

impl std::fmt::Debug for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scenario")
            .field("config", &self.config)
            .finish_non_exhaustive()
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn with_degree(&self, degree: usize) -> Self {
        Self { degree, ..self.clone() }
    }

    /// Tags present on the mesh boundary.
    pub fn mesh_tags(&self) -> Vec<BoundaryTag> {
        let mut tags = match self.equation {
            Equation::Burgers => vec![
                self.mesh.left.unwrap_or(BoundaryTag::Inflow),
                self.mesh.right.unwrap_or(BoundaryTag::Outflow),
            ],
            Equation::Swe => {
                let t = self.mesh.tags.unwrap_or_default();
                vec![t.south, t.east, t.north, t.west]
            }
        };
        tags.sort();
        tags.dedup();
        tags
    }

    pub fn validate(&self) -> Result<()> {
        let ok = matches!(
            (self.equation, self.scenario),
            (Equation::Burgers, ScenarioKind::BurgersMms)
                | (Equation::Swe, ScenarioKind::SweChannel)
                | (Equation::Swe, ScenarioKind::Geostrophic)
        );
        if !ok {
            return Err(Error::Config(format!(
                "scenario {:?} does not belong to equation {:?}",
                self.scenario, self.equation
            )));
        }
        if self.degree < 1 {
            return Err(Error::Config("`degree` must be at least 1".into()));
        }
        positive("cfl", Some(self.cfl))?;
        positive("t_end", Some(self.t_end))?;
        if self.dt_max.is_some() {
            positive("dt_max", self.dt_max)?;
        }
        if self.entropy_guard.is_some() {
            positive("entropy_guard", self.entropy_guard)?;
        }
        let tags = self.mesh_tags();
        for (tag, spec) in &self.boundary {
            if !tags.contains(tag) {
                return Err(Error::Config(format!(
                    "boundary tag `{}` does not occur on the mesh",
                    tag.name()
                )));
            }
            if (*tag == BoundaryTag::Periodic) != (*spec == BoundarySpec::Periodic) {
                return Err(Error::Config(format!(
                    "spec `{}` for tag `{}`: periodic specs belong to the periodic tag only",
                    spec.name(),
                    tag.name()
                )));
            }
        }
        for tag in &tags {
            if *tag != BoundaryTag::Periodic && !self.boundary.contains_key(tag) {
                return Err(Error::Config(format!("no boundary spec for mesh tag `{}`", tag.name())));
            }
        }
        match self.equation {
            Equation::Burgers => {
                let m = &self.mesh;
                if m.origin.is_some()
                    || m.edge_u.is_some()
                    || m.edge_v.is_some()
                    || m.nx.is_some()
                    || m.ny.is_some()
                    || m.tags.is_some()
                {
                    return Err(Error::Config(
                        "burgers uses an interval mesh (a, b, elements, left, right)".into(),
                    ));
                }
            }
            Equation::Swe => {
                let m = &self.mesh;
                if m.a.is_some() || m.b.is_some() || m.elements.is_some() || m.left.is_some() || m.right.is_some() {
                    return Err(Error::Config(
                        "swe uses a channel mesh (origin, edge_u, edge_v, nx, ny, tags)".into(),
                    ));
                }
                positive("physics.g", self.physics.g)?;
            }
        }
        match self.scenario {
            ScenarioKind::SweChannel => {
                positive("physics.h0", self.physics.h0)?;
            }
            ScenarioKind::Geostrophic => {
                for (name, v) in [
                    ("physics.a0", self.physics.a0),
                    ("physics.lambda", self.physics.lambda),
                    ("physics.re", self.physics.re),
                    ("physics.ri", self.physics.ri),
                ] {
                    positive(name, v)?;
                }
                if let Some(h) = self.physics.exterior_h {
                    positive("physics.exterior_h", Some(h))?;
                }
            }
            ScenarioKind::BurgersMms => {}
        }
        Ok(())
    }

    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            cfl: self.cfl,
            t_end: self.t_end,
            dt_max: self.dt_max.unwrap_or(self.t_end),
            log_stride: self.log_stride,
            dt_denominator: self.dt_denominator,
            entropy_guard: self.entropy_guard,
        }
    }

    pub fn build(&self) -> Result<Scenario> {
        self.validate()?;
        let basis = NodalBasis::new(self.degree)?;
        let (disc, initial): (Box<dyn Semidiscretization>, SolutionField) = match self.scenario {
            ScenarioKind::BurgersMms => {
                let m = &self.mesh;
                let mesh = build_interval_mesh(
                    m.a.ok_or_else(|| missing("mesh.a"))?,
                    m.b.ok_or_else(|| missing("mesh.b"))?,
                    m.elements.ok_or_else(|| missing("mesh.elements"))?,
                )?;
                let spec = |tag: Option<BoundaryTag>, default| {
                    let tag = tag.unwrap_or(default);
                    if tag == BoundaryTag::Periodic {
                        BoundarySpec::Periodic
                    } else {
                        self.boundary[&tag]
                    }
                };
                let d = Burgers1d::new(
                    mesh,
                    basis,
                    self.interior_flux,
                    spec(m.left, BoundaryTag::Inflow),
                    spec(m.right, BoundaryTag::Outflow),
                    BurgersData::Mms,
                    true,
                )?;
                let q0 = d.project(&|x, _, t| vec![burgers_mms(x, t)], 0.0);
                (Box::new(d), q0)
            }
            ScenarioKind::SweChannel | ScenarioKind::Geostrophic => {
                let m = &self.mesh;
                let mesh = build_parallelogram_channel(
                    m.origin.ok_or_else(|| missing("mesh.origin"))?,
                    m.edge_u.ok_or_else(|| missing("mesh.edge_u"))?,
                    m.edge_v.ok_or_else(|| missing("mesh.edge_v"))?,
                    m.nx.ok_or_else(|| missing("mesh.nx"))?,
                    m.ny.ok_or_else(|| missing("mesh.ny"))?,
                    m.tags.unwrap_or_default(),
                )?;
                let ph = &self.physics;
                let g = positive("physics.g", ph.g)?;
                if self.scenario == ScenarioKind::SweChannel {
                    let mms = ChannelMms::new(positive("physics.h0", ph.h0)?, g);
                    let d = Swe2d::new(
                        mesh,
                        basis,
                        EquationParams::new(g)?,
                        self.interior_flux,
                        &self.boundary,
                        SweData::Channel(mms),
                        SweSource::Channel(mms),
                    )?;
                    let q0 = d.project(&|x, y, t| mms.solution(x, y, t).to_cons().to_array().to_vec(), 0.0);
                    (Box::new(d), q0)
                } else {
                    let params = EquationParams::with_coriolis(g, ph.f0.unwrap_or(0.0), ph.beta_cor.unwrap_or(0.0))?;
                    let ic = GeostrophicIc {
                        a0: positive("physics.a0", ph.a0)?,
                        lambda: positive("physics.lambda", ph.lambda)?,
                        re: positive("physics.re", ph.re)?,
                        ri: positive("physics.ri", ph.ri)?,
                    };
                    let rest = SwePrim::new(ph.exterior_h.unwrap_or(1.0), 0.0, 0.0);
                    let d = Swe2d::new(
                        mesh,
                        basis,
                        params,
                        self.interior_flux,
                        &self.boundary,
                        SweData::Constant(rest),
                        SweSource::Coriolis,
                    )?;
                    let q0 = d.project(&|x, y, _| ic.initial(x, y).to_cons().to_array().to_vec(), 0.0);
                    (Box::new(d), q0)
                }
            }
        };
        Ok(Scenario {
            config: self.clone(),
            disc,
            initial,
            run: self.run_config(),
        })
    }
}

/// Outcome of a scenario run with its final L2 error, when an exact solution exists.
#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub result: RunResult,
    pub l2_error: Option<Vec<f64>>,
}

impl Scenario {
    pub fn has_exact_solution(&self) -> bool {
        self.disc.l2_error(&self.initial, 0.0).is_some()
    }

    pub fn execute(&self, on_sample: impl FnMut(&EntropyReport)) -> Result<ScenarioOutcome> {
        let result = timeloop::run(self.disc.as_ref(), self.initial.clone(), &self.run, on_sample)?;
        let l2_error = result
            .state
            .as_ref()
            .and_then(|q| self.disc.l2_error(q, self.run.t_end));
        Ok(ScenarioOutcome { result, l2_error })
    }
}
