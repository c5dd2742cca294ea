use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::basis::NodalBasis;
use crate::equations::{burgers_mms, ChannelMms, EquationParams, SwePrim};
use crate::mesh::{build_interval_mesh, build_parallelogram_channel, BoundaryTag, SideTags};

fn burgers(k: usize, n: usize, left: BoundarySpec, right: BoundarySpec, data: BurgersData, src: bool) -> Burgers1d {
    Burgers1d::new(
        build_interval_mesh(-1.0, 1.0, k).unwrap(),
        NodalBasis::new(n).unwrap(),
        InteriorFlux::Ec,
        left,
        right,
        data,
        src,
    )
    .unwrap()
}

fn periodic_burgers(interior: InteriorFlux) -> Burgers1d {
    Burgers1d::new(
        build_interval_mesh(-1.0, 1.0, 4).unwrap(),
        NodalBasis::new(5).unwrap(),
        interior,
        BoundarySpec::Periodic,
        BoundarySpec::Periodic,
        BurgersData::Constant(0.0),
        false,
    )
    .unwrap()
}

fn random_field(d: &dyn Semidiscretization, seed: u64, f: impl Fn(&mut ChaCha8Rng, usize) -> f64) -> SolutionField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = d.layout();
    for (k, x) in s.data.iter_mut().enumerate() {
        *x = f(&mut rng, k % s.nvar);
    }
    s
}

fn evaluate(d: &dyn Semidiscretization, q: &SolutionField, t: f64) -> SolutionField {
    let mut dq = q.zeros_like();
    d.rhs(q, t, &mut dq).unwrap();
    dq
}

#[test]
fn burgers_free_stream_periodic() {
    let d = periodic_burgers(InteriorFlux::Ec);
    let q = d.project(&|_, _, _| vec![1.7], 0.0);
    let dq = evaluate(&d, &q, 0.0);
    assert!(dq.data.iter().all(|x| x.abs() < 1e-12));
}

#[test]
fn burgers_periodic_ec_conserves_entropy_and_mass() {
    let d = periodic_burgers(InteriorFlux::Ec);
    let q = random_field(&d, 3, |r, _| r.gen_range(-2.0..2.0));
    let dq = evaluate(&d, &q, 0.0);
    let rep = d.entropy_report(&q, &dq, 0.0).unwrap();
    assert!(rep.rate.abs() < 1e-12, "{}", rep.rate);
    assert_eq!(rep.budget, 0.0);
    assert!(d.totals(&dq)[0].abs() < 1e-12);
}

#[test]
fn burgers_periodic_llf_dissipates() {
    let d = periodic_burgers(InteriorFlux::Llf);
    let q = random_field(&d, 4, |r, _| r.gen_range(-2.0..2.0));
    let dq = evaluate(&d, &q, 0.0);
    assert!(d.entropy_report(&q, &dq, 0.0).unwrap().rate < 0.0);
    assert!(d.totals(&dq)[0].abs() < 1e-12);
}

#[test]
fn linear_flux_recovers_strong_derivative() {
    let basis = NodalBasis::new(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let u: Vec<f64> = (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let a = 1.3;
    let jac = 0.4;
    let got = volume_fluxdiff_1d(&u, &basis, jac, |l, r| 0.5 * a * (l + r));
    let du = basis.differentiate(&u);
    for i in 0..7 {
        assert!((got[i] + a * du[i] / jac).abs() < 1e-12);
    }
}

#[test]
fn burgers_mms_rhs_matches_time_derivative() {
    let mut prev = f64::INFINITY;
    for n in [3, 5, 7, 9] {
        let d = burgers(
            5,
            n,
            BoundarySpec::NewNonlinear,
            BoundarySpec::NewNonlinear,
            BurgersData::Mms,
            true,
        );
        let t = 0.3;
        let q = d.project(&|x, _, t| vec![burgers_mms(x, t)], t);
        let dq = evaluate(&d, &q, t);
        let err = d
            .node_coords()
            .iter()
            .zip(&dq.data)
            .map(|(c, v)| (v + PI * (PI * (c.3 - t) - 0.7).cos()).abs())
            .fold(0.0, f64::max);
        assert!(err < prev, "N={n}: {err} vs {prev}");
        prev = err;
    }
    assert!(prev < 1e-4, "{prev}");
}

#[test]
fn single_element_inflow_rate_bounded_by_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let ue = rng.gen_range(0.0..5.0);
        let d = burgers(
            1,
            4,
            BoundarySpec::NewNonlinear,
            BoundarySpec::NewNonlinear,
            BurgersData::Constant(ue),
            false,
        );
        let q = random_field(&d, rng.gen(), |r, _| r.gen_range(0.01..5.0));
        let dq = evaluate(&d, &q, 0.0);
        let rep = d.entropy_report(&q, &dq, 0.0).unwrap();
        assert!(rep.bound_holds(), "{rep:?}");
        assert!(rep.rate <= burgers_boundary_g2(ue) + 1e-12);
    }
}

fn burgers_boundary_g2(ue: f64) -> f64 {
    crate::open_boundary::burgers_boundary_data(ue).g.powi(2)
}

#[test]
fn burgers_rejects_bad_configuration() {
    let mk = |i, l, r| {
        Burgers1d::new(
            build_interval_mesh(0.0, 1.0, 2).unwrap(),
            NodalBasis::new(2).unwrap(),
            i,
            l,
            r,
            BurgersData::Mms,
            false,
        )
    };
    assert!(mk(InteriorFlux::Hll, BoundarySpec::Ec, BoundarySpec::Ec).is_err());
    assert!(mk(InteriorFlux::Ec, BoundarySpec::Periodic, BoundarySpec::Ec).is_err());
    assert!(mk(InteriorFlux::Ec, BoundarySpec::Wall, BoundarySpec::Ec).is_err());
}

fn specs(pairs: &[(BoundaryTag, BoundarySpec)]) -> BTreeMap<BoundaryTag, BoundarySpec> {
    pairs.iter().copied().collect()
}

fn sheared_mesh(tags: SideTags) -> crate::mesh::QuadMesh {
    build_parallelogram_channel([0.2, -0.1], [2.0, 0.3], [0.7, 1.5], 3, 2, tags).unwrap()
}

fn open_tags() -> SideTags {
    SideTags {
        south: BoundaryTag::Open,
        east: BoundaryTag::Open,
        north: BoundaryTag::Open,
        west: BoundaryTag::Open,
    }
}

fn periodic_tags() -> SideTags {
    SideTags {
        south: BoundaryTag::Periodic,
        east: BoundaryTag::Periodic,
        north: BoundaryTag::Periodic,
        west: BoundaryTag::Periodic,
    }
}

#[test]
fn swe_free_stream_on_sheared_mesh() {
    let state = SwePrim::new(1.3, 0.4, -0.25);
    for spec in [
        BoundarySpec::Ec,
        BoundarySpec::NewNonlinear,
        BoundarySpec::Llf,
        BoundarySpec::ExactData,
    ] {
        let d = Swe2d::new(
            sheared_mesh(open_tags()),
            NodalBasis::new(4).unwrap(),
            EquationParams::new(9.81).unwrap(),
            InteriorFlux::Ec,
            &specs(&[(BoundaryTag::Open, spec)]),
            SweData::Constant(state),
            SweSource::None,
        )
        .unwrap();
        let q = d.project(&|_, _, _| state.to_cons().to_array().to_vec(), 0.0);
        let dq = evaluate(&d, &q, 0.0);
        let worst = dq.data.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        assert!(worst <= 1e-12, "{spec:?}: {worst}");
    }
}

#[test]
fn swe_rest_state_with_walls_is_steady() {
    let tags = SideTags {
        south: BoundaryTag::Wall,
        east: BoundaryTag::Wall,
        north: BoundaryTag::Wall,
        west: BoundaryTag::Wall,
    };
    let d = Swe2d::new(
        sheared_mesh(tags),
        NodalBasis::new(3).unwrap(),
        EquationParams::new(1.0).unwrap(),
        InteriorFlux::Hll,
        &specs(&[(BoundaryTag::Wall, BoundarySpec::Wall)]),
        SweData::Constant(SwePrim::new(1.0, 0.0, 0.0)),
        SweSource::None,
    )
    .unwrap();
    let q = d.project(&|_, _, _| vec![2.0, 0.0, 0.0], 0.0);
    let dq = evaluate(&d, &q, 0.0);
    assert!(dq.data.iter().all(|x| x.abs() < 1e-12));
}

fn periodic_swe(interior: InteriorFlux) -> Swe2d {
    Swe2d::new(
        sheared_mesh(periodic_tags()),
        NodalBasis::new(4).unwrap(),
        EquationParams::new(9.81).unwrap(),
        interior,
        &BTreeMap::new(),
        SweData::Constant(SwePrim::new(1.0, 0.0, 0.0)),
        SweSource::None,
    )
    .unwrap()
}

#[test]
fn swe_periodic_ec_conserves_entropy_and_mass() {
    let d = periodic_swe(InteriorFlux::Ec);
    let q = random_field(&d, 8, |r, v| {
        if v == 0 {
            r.gen_range(0.5..2.0)
        } else {
            r.gen_range(-1.0..1.0)
        }
    });
    let dq = evaluate(&d, &q, 0.0);
    let rep = d.entropy_report(&q, &dq, 0.0).unwrap();
    assert!(rep.rate.abs() < 1e-11 * rep.entropy.max(1.0), "{}", rep.rate);
    for (k, t) in d.totals(&dq).iter().enumerate() {
        assert!(t.abs() < 1e-12 * rep.entropy.max(1.0), "var {k}: {t}");
    }
}

#[test]
fn swe_periodic_dissipative_fluxes_decrease_entropy() {
    for interior in [InteriorFlux::Llf, InteriorFlux::Hll] {
        let d = periodic_swe(interior);
        let q = random_field(&d, 9, |r, v| {
            if v == 0 {
                r.gen_range(0.5..2.0)
            } else {
                r.gen_range(-1.0..1.0)
            }
        });
        let dq = evaluate(&d, &q, 0.0);
        assert!(d.entropy_report(&q, &dq, 0.0).unwrap().rate < 0.0);
        assert!(d.totals(&dq).iter().all(|t| t.abs() < 1e-11));
    }
}

#[test]
fn supercritical_outflow_everywhere_has_zero_budget() {
    let d = Swe2d::new(
        build_parallelogram_channel([-1.0, -1.0], [2.0, 0.0], [0.0, 2.0], 1, 1, open_tags()).unwrap(),
        NodalBasis::new(4).unwrap(),
        EquationParams::new(1.0).unwrap(),
        InteriorFlux::Ec,
        &specs(&[(BoundaryTag::Open, BoundarySpec::NewNonlinear)]),
        SweData::Constant(SwePrim::new(1.0, 0.0, 0.0)),
        SweSource::None,
    )
    .unwrap();
    let q = d.project(
        &|x, y, _| SwePrim::new(0.1, 10.0 * x, 10.0 * y).to_cons().to_array().to_vec(),
        0.0,
    );
    let dq = evaluate(&d, &q, 0.0);
    let rep = d.entropy_report(&q, &dq, 0.0).unwrap();
    assert_eq!(rep.budget, 0.0);
    assert!(rep.rate <= 0.0 && rep.bound_holds(), "{rep:?}");
}

fn channel(h0: f64, n: usize) -> (Swe2d, ChannelMms) {
    let mms = ChannelMms::new(h0, 9.81);
    let tags = SideTags {
        south: BoundaryTag::Wall,
        east: BoundaryTag::Outflow,
        north: BoundaryTag::Wall,
        west: BoundaryTag::Inflow,
    };
    let s = FRAC_1_SQRT_2;
    let mesh = build_parallelogram_channel([0.0, 0.0], [6.0 * s, 6.0 * s], [-3.0 * s, 3.0 * s], 8, 4, tags).unwrap();
    let d = Swe2d::new(
        mesh,
        NodalBasis::new(n).unwrap(),
        EquationParams::new(9.81).unwrap(),
        InteriorFlux::Ec,
        &specs(&[
            (BoundaryTag::Inflow, BoundarySpec::NewNonlinear),
            (BoundaryTag::Outflow, BoundarySpec::NewNonlinear),
            (BoundaryTag::Wall, BoundarySpec::Wall),
        ]),
        SweData::Channel(mms),
        SweSource::Channel(mms),
    )
    .unwrap();
    (d, mms)
}

#[test]
fn channel_mms_rhs_converges_spectrally() {
    // evaluate away from the walls' influence: the pulse starts mid-channel
    let mut errs = vec![];
    for n in [3, 6, 9] {
        let (d, mms) = channel(32.0, n);
        let t = 2.5;
        let q = d.project(&|x, y, t| mms.solution(x, y, t).to_cons().to_array().to_vec(), t);
        let dq = evaluate(&d, &q, t);
        let mut worst = 0.0f64;
        for (k, c) in d.node_coords().iter().enumerate() {
            let ex = mms.time_derivative(c.3, c.4, t);
            for v in 0..3 {
                worst = worst.max((dq.data[3 * k + v] - ex[v]).abs());
            }
        }
        errs.push(worst);
    }
    assert!(errs[0] > 10.0 * errs[1] && errs[1] > 10.0 * errs[2], "{errs:?}");
}

#[test]
fn channel_l2_error_of_exact_projection_is_small() {
    let (d, mms) = channel(0.6, 6);
    let q = d.project(&|x, y, t| mms.solution(x, y, t).to_cons().to_array().to_vec(), 1.0);
    let e = d.l2_error(&q, 1.0).unwrap();
    assert!(e.iter().all(|v| *v < 1e-3), "{e:?}");
    let zero = d.layout();
    assert!(d.l2_error(&zero, 1.0).unwrap()[0] > 0.01);
}

#[test]
fn compute_dt_matches_formula() {
    let d = Swe2d::new(
        build_parallelogram_channel(
            [0.0, 0.0],
            [1.0, 0.0],
            [0.0, 1.0],
            1,
            1,
            SideTags {
                south: BoundaryTag::Wall,
                east: BoundaryTag::Wall,
                north: BoundaryTag::Wall,
                west: BoundaryTag::Wall,
            },
        )
        .unwrap(),
        NodalBasis::new(1).unwrap(),
        EquationParams::new(1.0).unwrap(),
        InteriorFlux::Ec,
        &specs(&[(BoundaryTag::Wall, BoundarySpec::Wall)]),
        SweData::Constant(SwePrim::new(1.0, 0.0, 0.0)),
        SweSource::None,
    )
    .unwrap();
    let q = d.project(&|_, _, _| vec![1.0, 0.0, 0.0], 0.0);
    assert!((d.compute_dt(&q, 1.0, 10.0, DtDenominator::TwoNPlusOne) - 1.0 / 3.0).abs() < 1e-15);
    assert!((d.compute_dt(&q, 2.0, 10.0, DtDenominator::TwoNPlusOne) - 2.0 / 3.0).abs() < 1e-15);
    let b = periodic_burgers(InteriorFlux::Ec);
    let z = b.layout();
    assert_eq!(b.compute_dt(&z, 0.5, 7.0, DtDenominator::NPlusOne), 7.0);
    assert!((d.compute_dt(&q, 1.0, 10.0, DtDenominator::NPlusOne) - 0.5).abs() < 1e-15);
}
