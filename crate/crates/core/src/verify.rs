//! Seeded property suite over the algebraic identities the boundary fluxes
//! rest on. Each check reports its worst residual against a pinned tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::NodalBasis;
use crate::equations::{
    burgers_ec_flux, burgers_entropy_pair, burgers_llf, swe_ec_flux, swe_entropy_pair, swe_flux_normal, SwePrim,
};
use crate::open_boundary::theory::{bound_gap_with, condition_residual_with};
use crate::open_boundary::{
    boundary_matrix_quadratic_form, burgers_boundary_data, burgers_boundary_term, burgers_condition_residual,
    burgers_inflow_flux, swe_flux_subcritical_inflow, swe_flux_subcritical_outflow, swe_flux_supercritical_inflow,
    swe_flux_supercritical_outflow, CharVars, CongruenceSet, Regime, ScaledRotatedVars, BETA,
};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `worst <= tolerance`.
    fn at_most(name: impl Into<String>, worst: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            worst,
            tolerance,
            passed: worst <= tolerance,
        }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:<40} worst {:.3e} (tol {:.1e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Added to alpha before every congruence-dependent check (test hook).
    pub alpha_perturbation: f64,
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            alpha_perturbation: 0.0,
            samples: 1000,
        }
    }
}

/// Random interior and exterior primitive states of a common regime with a
/// random unit normal and gravity.
pub fn random_admissible_pair(rng: &mut impl Rng, regime: Regime) -> (SwePrim, SwePrim, [f64; 2], f64) {
    let g = rng.gen_range(0.5..10.0);
    let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let n = [th.cos(), th.sin()];
    let mut draw = || {
        let h: f64 = rng.gen_range(0.1..5.0);
        let c = (g * h).sqrt();
        let fr = match regime {
            Regime::SupercriticalOutflow => rng.gen_range(1.0..3.0),
            Regime::SubcriticalOutflow => rng.gen_range(0.0..1.0),
            Regime::SubcriticalInflow => -rng.gen_range(1e-3..1.0),
            Regime::SupercriticalInflow => -rng.gen_range(1.0..3.0),
        };
        let vt = rng.gen_range(-2.0..2.0) * c;
        SwePrim::from_rotated(h, fr * c, vt, n)
    };
    (draw(), draw(), n, g)
}

/// Magnitude of the flux-sized quantities built from a pair of states.
pub fn pair_scale(p: &SwePrim, e: &SwePrim, g: f64) -> f64 {
    let h = p.h.max(e.h);
    let v = 1.0 + p.v1.abs() + p.v2.abs() + e.v1.abs() + e.v2.abs();
    (1.0 + g * h * (1.0 + h) + h * v) * v
}

/// Outcome of the Burgers boundary-term grid scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleScan {
    pub ec_exceedances: usize,
    pub llf_exceedances: usize,
    pub new_exceedances: usize,
    pub ec_worst_excess: f64,
    pub llf_worst_excess: f64,
    /// Largest `BT - G^2` of the new flux; nonpositive when bounded.
    pub new_worst_excess: f64,
}

/// Scans `u, u_ext` over `(0, 5]` on a `steps x steps` grid at a left inflow
/// boundary, comparing each flux's boundary term with `G^2`.
pub fn counterexample_scan(steps: usize, slack: f64) -> CounterexampleScan {
    let mut out = CounterexampleScan {
        ec_exceedances: 0,
        llf_exceedances: 0,
        new_exceedances: 0,
        ec_worst_excess: f64::NEG_INFINITY,
        llf_worst_excess: f64::NEG_INFINITY,
        new_worst_excess: f64::NEG_INFINITY,
    };
    for a in 1..=steps {
        for b in 1..=steps {
            let u = 5.0 * a as f64 / steps as f64;
            let ue = 5.0 * b as f64 / steps as f64;
            let g2 = burgers_boundary_data(ue).g.powi(2);
            let ec = burgers_boundary_term(burgers_ec_flux(ue, u), u) - g2;
            let llf = burgers_boundary_term(burgers_llf(ue, u), u) - g2;
            let new = burgers_boundary_term(burgers_inflow_flux(ue, u), u) - g2;
            out.ec_exceedances += usize::from(ec > slack);
            out.llf_exceedances += usize::from(llf > slack);
            out.new_exceedances += usize::from(new > slack);
            out.ec_worst_excess = out.ec_worst_excess.max(ec);
            out.llf_worst_excess = out.llf_worst_excess.max(llf);
            out.new_worst_excess = out.new_worst_excess.max(new);
        }
    }
    out
}

fn sbp_and_quadrature(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut sbp = 0.0f64;
    let mut quad = 0.0f64;
    for n in 1..=12 {
        let b = NodalBasis::new(n).expect("degree >= 1");
        let w = b.weights();
        let np = n + 1;
        for i in 0..np {
            for j in 0..np {
                let q = w[i] * b.d(i, j) + w[j] * b.d(j, i);
                let bij = match (i, j) {
                    (0, 0) => -1.0,
                    (i, j) if i == n && j == n => 1.0,
                    _ => 0.0,
                };
                sbp = sbp.max((q - bij).abs());
            }
        }
        for _ in 0..20 {
            let coeffs: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let eval = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
            let exact: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 0 { 2.0 * c / (k + 1) as f64 } else { 0.0 })
                .sum();
            let vals: Vec<f64> = b.nodes().iter().map(|&x| eval(x)).collect();
            let scale = coeffs.iter().map(|c| c.abs()).sum::<f64>().max(1.0);
            quad = quad.max((b.integrate(&vals) - exact).abs() / scale);
        }
    }
    vec![
        Check::at_most("sbp identity, N <= 12", sbp, 1e-13),
        Check::at_most("quadrature exact to degree 2N-1", quad, 1e-12),
    ]
}

fn tadmor(rng: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    let mut worst_b = 0.0f64;
    let mut worst_s = 0.0f64;
    for _ in 0..samples {
        let (ul, ur) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let (l, r) = (burgers_entropy_pair(ul), burgers_entropy_pair(ur));
        let res = (r.variable - l.variable) * burgers_ec_flux(ul, ur) - (r.potential - l.potential);
        worst_b = worst_b.max(res.abs() / (1.0 + ul.abs().max(ur.abs()).powi(3)));

        let g = rng.gen_range(0.5..10.0);
        let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let n = [th.cos(), th.sin()];
        let pl = SwePrim::new(
            rng.gen_range(0.1..5.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        let pr = SwePrim::new(
            rng.gen_range(0.1..5.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        let (ql, qr) = (pl.to_cons(), pr.to_cons());
        let el = swe_entropy_pair(ql, n, g).expect("positive depth");
        let er = swe_entropy_pair(qr, n, g).expect("positive depth");
        let f = swe_ec_flux(ql, qr, n, g).expect("positive depth");
        let jump: f64 = (0..3).map(|k| (er.variables[k] - el.variables[k]) * f[k]).sum();
        let res = jump - (er.potential_n - el.potential_n);
        worst_s = worst_s.max(res.abs() / pair_scale(&pl, &pr, g));
    }
    vec![
        Check::at_most("tadmor condition, burgers ec flux", worst_b, 1e-12),
        Check::at_most("tadmor condition, swe ec flux", worst_s, 1e-12),
    ]
}

fn congruence(set: &CongruenceSet, rng: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    let alpha = set.alpha;
    let mut defect = 0.0f64;
    for _ in 0..10 * samples {
        let vn = rng.gen_range(-10.0..10.0);
        let c = rng.gen_range(1e-3..10.0);
        defect = defect.max(set.congruence_defect(vn, c));
    }
    let mut qa = 0.0f64;
    let mut qw = 0.0f64;
    for _ in 0..samples {
        let g = rng.gen_range(0.5..10.0);
        let p = SwePrim::new(
            rng.gen_range(0.1..10.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
        );
        let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let n = [th.cos(), th.sin()];
        let fent = swe_entropy_pair(p.to_cons(), n, g).expect("positive depth").flux_n;
        let scale = fent
            .abs()
            .max(p.h * (p.v1 * p.v1 + p.v2 * p.v2 + g * p.h) * p.wave_speed(g))
            .max(1e-300);
        let u = ScaledRotatedVars::new(&p, n, g);
        for beta in [0.0, 0.5, BETA, 5.0] {
            qa = qa.max((boundary_matrix_quadratic_form(beta, &u) - fent).abs() / scale);
        }
        qw = qw.max((CharVars::with_alpha(&p, n, g, alpha).quadratic_form() - fent).abs() / scale);
    }
    vec![
        Check::at_most(
            "alpha^2 + 2 alpha - 2 = 0",
            (alpha * alpha + 2.0 * alpha - 2.0).abs(),
            1e-15,
        ),
        Check::at_most("congruence T Lambda T^T = A", defect, 1e-13),
        Check::at_most("U^T A(beta) U = F_ent_n, any beta", qa, 1e-12),
        Check::at_most("W^T Lambda W = F_ent_n", qw, 1e-12),
    ]
}

fn consistency(rng: &mut ChaCha8Rng, samples: usize) -> Check {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let u = rng.gen_range(1e-3..5.0);
        worst = worst.max((burgers_inflow_flux(u, u) - 0.5 * u * u).abs() / (1.0 + u * u));
        for regime in Regime::ALL {
            let (p, _, n, g) = random_admissible_pair(rng, regime);
            let q = p.to_cons();
            let f = swe_flux_normal(q, n, g).expect("positive depth");
            let fs = match regime {
                Regime::SupercriticalOutflow => swe_flux_supercritical_outflow(q, n, g),
                Regime::SubcriticalOutflow => swe_flux_subcritical_outflow(q, q, n, g),
                Regime::SubcriticalInflow => swe_flux_subcritical_inflow(q, q, n, g),
                Regime::SupercriticalInflow => swe_flux_supercritical_inflow(q, q, n, g),
            }
            .expect("matching regime");
            let scale = pair_scale(&p, &p, g);
            for k in 0..3 {
                worst = worst.max((fs[k] - f[k]).abs() / scale);
            }
        }
    }
    Check::at_most("consistency F*(q, q) = F_n(q), five fluxes", worst, 1e-13)
}

fn regime_checks(set: &CongruenceSet, rng: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for regime in Regime::ALL {
        let mut res = 0.0f64;
        let mut gap = f64::INFINITY;
        for _ in 0..samples {
            let (p, e, n, g) = random_admissible_pair(rng, regime);
            let scale = pair_scale(&p, &e, g);
            let r = condition_residual_with(set, p.to_cons(), e.to_cons(), n, g, regime).expect("admissible pair");
            res = res.max(r.iter().fold(0.0f64, |a, x| a.max(x.abs())) / scale);
            let gp = bound_gap_with(set, p.to_cons(), e.to_cons(), n, g, regime).expect("admissible pair");
            gap = gap.min(gp / scale);
        }
        out.push(Check::at_most(
            format!("condition residual, {}", regime.name()),
            res,
            1e-12,
        ));
        out.push(Check::at_most(
            format!("bound gap >= 0, {}", regime.name()),
            (-gap).max(0.0),
            1e-12,
        ));
    }
    let mut burgers = 0.0f64;
    for _ in 0..samples {
        let (ue, u) = (rng.gen_range(0.0..5.0), rng.gen_range(1e-3..5.0));
        burgers = burgers.max(burgers_condition_residual(ue, u).abs() / (1.0 + u.max(ue).powi(3)));
    }
    out.push(Check::at_most("condition residual, burgers inflow", burgers, 1e-12));
    out
}

/// Closed-form LLF boundary term at a left inflow boundary with `u, u_ext > 0`.
pub fn burgers_llf_boundary_term_closed_form(u_ext: f64, u: f64) -> f64 {
    let jump = u * (u - u_ext).powi(2) / 4.0;
    let base = -u.powi(3) / 6.0 + u * u_ext * u_ext / 2.0;
    if u > u_ext {
        base - jump
    } else {
        base + jump
    }
}

fn scan_check() -> Vec<Check> {
    let scan = counterexample_scan(100, 1e-12);
    let found = |n: usize| if n > 0 { 0.0 } else { 1.0 };
    let mut llf = 0.0f64;
    for a in 1..=100 {
        for b in 1..=100 {
            let (u, ue) = (0.05 * a as f64, 0.05 * b as f64);
            let direct = burgers_boundary_term(burgers_llf(ue, u), u);
            llf = llf.max((direct - burgers_llf_boundary_term_closed_form(ue, u)).abs() / (1.0 + u.max(ue).powi(3)));
        }
    }
    vec![
        Check::at_most(
            "ec boundary term exceeds G^2 somewhere",
            found(scan.ec_exceedances),
            0.0,
        ),
        Check::at_most("llf boundary term matches closed form", llf, 1e-13),
        Check::at_most(
            "new boundary term <= G^2 on scan grid",
            scan.new_worst_excess.max(0.0),
            1e-12,
        ),
    ]
}

/// Runs every check with a fixed seed; identical options give identical reports.
pub fn run_suite(opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let set = CongruenceSet::with_alpha(crate::open_boundary::ALPHA + opts.alpha_perturbation);
    let set = if opts.alpha_perturbation == 0.0 {
        CongruenceSet::default()
    } else {
        set
    };
    let mut out = sbp_and_quadrature(&mut rng);
    out.extend(tadmor(&mut rng, opts.samples));
    out.extend(congruence(&set, &mut rng, opts.samples));
    out.push(consistency(&mut rng, opts.samples));
    out.extend(regime_checks(&set, &mut rng, opts.samples));
    out.extend(scan_check());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pristine_suite_passes() {
        let report = run_suite(&VerifyOptions::default());
        for c in &report {
            assert!(c.passed, "{c}");
        }
        assert!(report.len() >= 18);
    }

    #[test]
    fn perturbed_alpha_fails_congruence() {
        let report = run_suite(&VerifyOptions {
            alpha_perturbation: 1e-6,
            ..Default::default()
        });
        let c = report.iter().find(|c| c.name.starts_with("congruence")).unwrap();
        assert!(!c.passed, "{c}");
    }

    #[test]
    fn seeded_report_is_deterministic() {
        let opts = VerifyOptions {
            samples: 50,
            ..Default::default()
        };
        assert_eq!(run_suite(&opts), run_suite(&opts));
    }

    #[test]
    fn scan_finds_counterexamples() {
        let s = counterexample_scan(50, 1e-12);
        assert!(s.ec_exceedances > 0);
        assert_eq!(s.new_exceedances, 0);
        // the LLF term is G^2 minus a nonnegative multiple of (u - u_ext)^2 for
        // positive states, so it depends on u without exceeding the data
        assert_eq!(s.llf_exceedances, 0);
        assert!(s.llf_worst_excess <= 1e-12);
        // u = 1, u_ext = 3: EC term (9 + 3) / 6 = 2 is below G^2 = 9, so the
        // violations sit at small data relative to the interior state
        let ec = burgers_boundary_term(burgers_ec_flux(0.1, 4.0), 4.0);
        assert!(ec > burgers_boundary_data(0.1).g.powi(2));
    }
}
