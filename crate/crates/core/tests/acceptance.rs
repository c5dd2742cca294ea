//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dgbound::basis::NodalBasis;
use dgbound::dgsem::{
    BoundarySpec, Burgers1d, BurgersData, InteriorFlux, Semidiscretization, SolutionField, Swe2d, SweData, SweSource,
};
use dgbound::equations::{EquationParams, SwePrim};
use dgbound::mesh::{build_interval_mesh, build_parallelogram_channel, BoundaryTag, SideTags};
use dgbound::scenario::{ScenarioConfig, ScenarioOutcome};
use dgbound::timeloop::{rk54_field_step, rk54_step, RunStatus};
use dgbound::verify::{counterexample_scan, run_suite, VerifyOptions};

const BURGERS_REFERENCE_L2: f64 = 8.80419344e-7;

struct Line {
    id: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn config(name: &str) -> ScenarioConfig {
    ScenarioConfig::from_path(&scenario_path(name)).expect("bundled scenario parses")
}

fn execute(cfg: &ScenarioConfig) -> ScenarioOutcome {
    cfg.build()
        .expect("scenario builds")
        .execute(|_| {})
        .expect("scenario runs")
}

fn min_relative_margin(out: &ScenarioOutcome) -> f64 {
    out.result
        .reports
        .iter()
        .map(|r| r.margin / r.entropy.abs().max(1.0))
        .fold(f64::INFINITY, f64::min)
}

fn margin_holds(out: &ScenarioOutcome) -> bool {
    !out.result.reports.is_empty() && out.result.reports.iter().all(|r| r.bound_holds())
}

fn status(out: &ScenarioOutcome) -> String {
    match out.result.status {
        RunStatus::Completed => "completed".into(),
        RunStatus::Aborted { time, reason } => format!("aborted at t = {time:.3} ({reason})"),
    }
}

fn timed(id: &'static str, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (passed, detail) = f();
    Line {
        id,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

fn criterion_identities() -> (bool, String) {
    let start = Instant::now();
    let report = run_suite(&VerifyOptions::default());
    let elapsed = start.elapsed();
    let failed: Vec<&str> = report.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let passed = failed.is_empty() && elapsed < Duration::from_secs(5);
    (
        passed,
        format!(
            "{} checks, failed {:?}, {:.2} s",
            report.len(),
            failed,
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_burgers(new: &ScenarioOutcome, llf: &ScenarioOutcome, ec: &ScenarioOutcome) -> (bool, String) {
    let e_new = new.l2_error.as_ref().map(|e| e[0]);
    let e_llf = llf.l2_error.as_ref().map(|e| e[0]);
    let a = match e_new {
        Some(e) => {
            new.result.status.is_completed() && (0.5 * BURGERS_REFERENCE_L2..=2.0 * BURGERS_REFERENCE_L2).contains(&e)
        }
        None => false,
    };
    let b = match (e_new, e_llf) {
        (Some(x), Some(y)) => llf.result.status.is_completed() && ((x - y) / x).abs() < 5e-4,
        _ => false,
    };
    let c = matches!(ec.result.status, RunStatus::Aborted { time, .. } if time < 120.0);
    (
        a && b && c,
        format!(
            "(a) l2 {:?} vs {BURGERS_REFERENCE_L2:e}; (b) llf l2 {:?}; (c) ec {}",
            e_new,
            e_llf,
            status(ec)
        ),
    )
}

fn criterion_margin(runs: &[(&str, &ScenarioOutcome)]) -> (bool, String) {
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, out) in runs {
        passed &= margin_holds(out);
        parts.push(format!("{name} min margin/scale {:.3e}", min_relative_margin(out)));
    }
    (passed, parts.join("; "))
}

fn criterion_channel(sub: &ScenarioOutcome, sup: &ScenarioOutcome) -> (bool, String) {
    let cfg = config("swe_channel_subcritical.toml");
    let coarse = execute(&cfg.with_degree(3));
    let fine = execute(&cfg.with_degree(6));
    let drop = match (&coarse.l2_error, &fine.l2_error) {
        (Some(c), Some(f)) => c[0] / f[0],
        _ => 0.0,
    };
    let sup_cfg = config("swe_channel_supercritical.toml");
    let sup_coarse = execute(&sup_cfg.with_degree(3));
    let sup_fine = execute(&sup_cfg.with_degree(6));
    let sup_drop = match (&sup_coarse.l2_error, &sup_fine.l2_error) {
        (Some(c), Some(f)) => format!("{:.1}x", c[0] / f[0]),
        _ => format!("n/a ({}, {})", status(&sup_coarse), status(&sup_fine)),
    };
    let completed = sub.result.status.is_completed() && sup.result.status.is_completed();
    (
        completed && drop >= 100.0,
        format!(
            "subcritical {}, supercritical {}; subcritical 8x4 h-error drop N=3 to 6 {:.1}x; supercritical 16x8 (informational) {}",
            status(sub),
            status(sup),
            drop,
            sup_drop
        ),
    )
}

fn criterion_geostrophic() -> (bool, String) {
    let reduced = execute(&config("geostrophic.toml"));
    let a = reduced.result.status.is_completed() && margin_holds(&reduced);
    let full = execute(&config("geostrophic_riemann.toml"));
    let b = match full.result.status {
        RunStatus::Aborted { time, .. } => time < 25.0,
        RunStatus::Completed => full
            .result
            .reports
            .iter()
            .any(|r| r.margin < -1e-3 * r.entropy.abs().max(1.0)),
    };
    (
        a && b,
        format!(
            "reduced {} with min margin/scale {:.3e}; riemann-invariant 32x32 N=8 {}",
            status(&reduced),
            min_relative_margin(&reduced),
            status(&full)
        ),
    )
}

fn sheared(tags: SideTags) -> dgbound::mesh::QuadMesh {
    build_parallelogram_channel([0.2, -0.1], [2.0, 0.3], [0.7, 1.5], 3, 2, tags).expect("valid mesh")
}

fn all_tags(tag: BoundaryTag) -> SideTags {
    SideTags {
        south: tag,
        east: tag,
        north: tag,
        west: tag,
    }
}

fn random_state(d: &dyn Semidiscretization, seed: u64) -> SolutionField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = d.layout();
    let nvar = q.nvar;
    for (k, x) in q.data.iter_mut().enumerate() {
        *x = if nvar == 3 && k % 3 == 0 {
            rng.gen_range(0.5..2.0)
        } else {
            rng.gen_range(-1.0..1.0)
        };
    }
    q
}

fn criterion_structure() -> (bool, String) {
    let report = run_suite(&VerifyOptions::default());
    let named = |prefix: &str| report.iter().filter(|c| c.name.starts_with(prefix)).all(|c| c.passed);
    let algebra = named("sbp") && named("quadrature") && named("tadmor");

    let swe = Swe2d::new(
        sheared(all_tags(BoundaryTag::Periodic)),
        NodalBasis::new(4).unwrap(),
        EquationParams::new(9.81).unwrap(),
        InteriorFlux::Ec,
        &BTreeMap::new(),
        SweData::Constant(SwePrim::new(1.0, 0.0, 0.0)),
        SweSource::None,
    )
    .unwrap();
    let burgers = Burgers1d::new(
        build_interval_mesh(-1.0, 1.0, 4).unwrap(),
        NodalBasis::new(5).unwrap(),
        InteriorFlux::Ec,
        BoundarySpec::Periodic,
        BoundarySpec::Periodic,
        BurgersData::Constant(0.0),
        false,
    )
    .unwrap();
    let mut drift = 0.0f64;
    let mut mass = 0.0f64;
    for (seed, d) in [(1u64, &swe as &dyn Semidiscretization), (2, &burgers)] {
        let q = random_state(d, seed);
        let mut dq = q.zeros_like();
        d.rhs(&q, 0.0, &mut dq).unwrap();
        let rep = d.entropy_report(&q, &dq, 0.0).unwrap();
        let scale = rep.entropy.abs().max(1.0);
        drift = drift.max(rep.rate.abs() / scale);
        for t in d.totals(&dq) {
            mass = mass.max(t.abs() / scale);
        }
    }

    let state = SwePrim::new(1.3, 0.4, -0.25);
    let open = Swe2d::new(
        sheared(all_tags(BoundaryTag::Open)),
        NodalBasis::new(4).unwrap(),
        EquationParams::new(9.81).unwrap(),
        InteriorFlux::Ec,
        &[(BoundaryTag::Open, BoundarySpec::NewNonlinear)].into_iter().collect(),
        SweData::Constant(state),
        SweSource::None,
    )
    .unwrap();
    let q0 = open.project(&|_, _, _| state.to_cons().to_array().to_vec(), 0.0);
    let mut q = q0.clone();
    let (mut k, mut du) = (q.zeros_like(), q.zeros_like());
    let dt = open.compute_dt(&q, 0.5, f64::INFINITY, Default::default());
    for s in 0..100 {
        rk54_field_step(&open, &mut q, &mut k, &mut du, s as f64 * dt, dt).unwrap();
    }
    let free = q
        .data
        .iter()
        .zip(&q0.data)
        .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));

    let err = |n: usize| {
        let mut y = [1.0];
        let (mut k, mut du) = ([0.0], [0.0]);
        let dt = 1.0 / n as f64;
        for s in 0..n {
            rk54_step(&mut y, &mut k, &mut du, s as f64 * dt, dt, |u, _, out| {
                out[0] = -u[0];
                Ok(())
            })
            .unwrap();
        }
        (y[0] - (-1.0f64).exp()).abs()
    };
    let order = (err(10) / err(20)).log2();

    let passed = algebra && drift <= 1e-11 && mass <= 1e-12 && free <= 1e-12 && (3.9..=4.1).contains(&order);
    (
        passed,
        format!(
            "sbp/quadrature/tadmor {}; entropy drift {drift:.2e}; conservation {mass:.2e}; free stream {free:.2e}; rk order {order:.3}",
            if algebra { "ok" } else { "failed" }
        ),
    )
}

fn criterion_scan() -> (bool, String) {
    let start = Instant::now();
    let s = counterexample_scan(100, 1e-12);
    let report = run_suite(&VerifyOptions::default());
    let llf_closed_form = report
        .iter()
        .find(|c| c.name.starts_with("llf boundary term"))
        .is_some_and(|c| c.passed);
    let passed =
        s.ec_exceedances > 0 && s.new_exceedances == 0 && llf_closed_form && start.elapsed() < Duration::from_secs(5);
    (
        passed,
        format!(
            "ec exceeds G^2 at {} of 10000 states (worst {:.3}); new worst excess {:.2e}; llf exceeds at {} states (worst excess {:.2e}, closed form verified)",
            s.ec_exceedances, s.ec_worst_excess, s.new_worst_excess, s.llf_exceedances, s.llf_worst_excess
        ),
    )
}

fn main() {
    let mut lines = vec![timed("1", criterion_identities)];

    let start = Instant::now();
    let new = execute(&config("burgers_mms.toml"));
    let llf = execute(&config("burgers_llf.toml"));
    let ec = execute(&config("burgers_ec_boundary.toml"));
    let burgers_time = start.elapsed();
    let mut line = timed("2", || criterion_burgers(&new, &llf, &ec));
    line.elapsed += burgers_time;
    lines.push(line);

    let start = Instant::now();
    let sub = execute(&config("swe_channel_subcritical.toml"));
    let sup = execute(&config("swe_channel_supercritical.toml"));
    let channel_time = start.elapsed();
    lines.push(timed("3", || {
        criterion_margin(&[
            ("burgers new flux", &new),
            ("subcritical channel", &sub),
            ("supercritical channel", &sup),
        ])
    }));
    let mut line = timed("4", || criterion_channel(&sub, &sup));
    line.elapsed += channel_time;
    lines.push(line);

    lines.push(timed("5", criterion_geostrophic));
    lines.push(timed("6", criterion_structure));
    lines.push(timed("7", criterion_scan));

    for l in &lines {
        println!(
            "criterion {}: {} ({:.1} s) {}",
            l.id,
            if l.passed { "PASS" } else { "FAIL" },
            l.elapsed.as_secs_f64(),
            l.detail
        );
    }
    if lines.iter().any(|l| !l.passed) {
        std::process::exit(1);
    }
}
