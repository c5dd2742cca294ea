//! Five-stage, fourth-order low-storage Runge-Kutta integration with CFL step
//! control and abort detection.

use std::fmt;

use crate::dgsem::{DtDenominator, EntropyReport, Semidiscretization, SolutionField};
use crate::error::{Error, Result};

/// Carpenter-Kennedy (1994) 2N-storage coefficients, solution 3.
pub const RK_A: [f64; 5] = [
    0.0,
    -567301805773.0 / 1357537059087.0,
    -2404267990393.0 / 2016746695238.0,
    -3550918686646.0 / 2091501179385.0,
    -1275806237668.0 / 842570457699.0,
];
pub const RK_B: [f64; 5] = [
    1432997174477.0 / 9575080441755.0,
    5161836677717.0 / 13612068292357.0,
    1720146321549.0 / 2090206949498.0,
    3134564353537.0 / 4481467310338.0,
    2277821191437.0 / 14882151754819.0,
];
pub const RK_C: [f64; 5] = [
    0.0,
    1432997174477.0 / 9575080441755.0,
    2526269341429.0 / 6820363962896.0,
    2006345519317.0 / 3224310063776.0,
    2802321613138.0 / 2924317926251.0,
];

/// One step of the low-storage scheme. `k` and `du` are scratch registers of
/// the same length as `q`.
pub fn rk54_step<F>(q: &mut [f64], k: &mut [f64], du: &mut [f64], t: f64, dt: f64, mut rhs: F) -> Result<()>
where
    F: FnMut(&[f64], f64, &mut [f64]) -> Result<()>,
{
    k.fill(0.0);
    for s in 0..5 {
        rhs(q, t + RK_C[s] * dt, du)?;
        stage_update(q, k, du, s, dt);
    }
    Ok(())
}

#[inline]
fn stage_update(q: &mut [f64], k: &mut [f64], du: &[f64], s: usize, dt: f64) {
    for ((qi, ki), di) in q.iter_mut().zip(k.iter_mut()).zip(du) {
        *ki = RK_A[s] * *ki + dt * di;
        *qi += RK_B[s] * *ki;
    }
}

/// [`rk54_step`] applied to a semidiscretization.
pub fn rk54_field_step(
    disc: &dyn Semidiscretization,
    q: &mut SolutionField,
    k: &mut SolutionField,
    du: &mut SolutionField,
    t: f64,
    dt: f64,
) -> Result<()> {
    k.data.fill(0.0);
    for s in 0..5 {
        disc.rhs(q, t + RK_C[s] * dt, du)?;
        stage_update(&mut q.data, &mut k.data, &du.data, s, dt);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbortReason {
    NaN,
    NonpositiveHeight,
    /// Boundary data incompatible with the interior flow regime.
    BoundaryData,
    /// A logged entropy rate exceeded the data budget by more than the guard.
    EntropyBound,
}

impl AbortReason {
    fn from_error(e: &Error) -> Self {
        match e {
            Error::NonpositiveHeight(h) | Error::NonpositiveWaveSpeed(h) if h.is_nan() => Self::NaN,
            Error::NonpositiveHeight(_) | Error::NonpositiveWaveSpeed(_) => Self::NonpositiveHeight,
            _ => Self::BoundaryData,
        }
    }
}

impl fmt::Display for AbortReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::NaN => "non-finite value in solution",
            Self::NonpositiveHeight => "nonpositive water height",
            Self::BoundaryData => "boundary data incompatible with flow regime",
            Self::EntropyBound => "entropy rate exceeded the boundary data budget",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunStatus {
    Completed,
    /// `time` is the start of the step that failed.
    Aborted {
        time: f64,
        reason: AbortReason,
    },
}

impl RunStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, Self::Completed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub cfl: f64,
    pub t_end: f64,
    /// Upper bound on the step, used when every wave speed vanishes.
    pub dt_max: f64,
    /// Sample the entropy monitor every this many steps (0 disables sampling
    /// except at the start and the end).
    pub log_stride: usize,
    pub dt_denominator: DtDenominator,
    /// Abort when a logged margin drops below `-guard * max(1, |E|)`.
    pub entropy_guard: Option<f64>,
}

impl RunConfig {
    pub fn new(cfl: f64, t_end: f64) -> Self {
        Self {
            cfl,
            t_end,
            dt_max: t_end,
            log_stride: 0,
            dt_denominator: DtDenominator::default(),
            entropy_guard: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub status: RunStatus,
    pub steps: usize,
    /// Final state; present only for completed runs.
    pub state: Option<SolutionField>,
    pub reports: Vec<EntropyReport>,
}

/// Evaluates the entropy monitor at `q`.
pub fn sample(disc: &dyn Semidiscretization, q: &SolutionField, t: f64) -> Result<EntropyReport> {
    let mut dq = q.zeros_like();
    disc.rhs(q, t, &mut dq)?;
    disc.entropy_report(q, &dq, t)
}

fn state_fault(disc: &dyn Semidiscretization, q: &SolutionField) -> Option<AbortReason> {
    if !q.is_finite() {
        return Some(AbortReason::NaN);
    }
    match disc.min_positive(q) {
        Some(h) if h <= 0.0 => Some(AbortReason::NonpositiveHeight),
        _ => None,
    }
}

/// Advances `initial` to `cfg.t_end`, recomputing the step from the current
/// state, clipping the last step onto `t_end` and stopping at the first fault.
/// `on_sample` sees every logged entropy report.
pub fn run(
    disc: &dyn Semidiscretization,
    initial: SolutionField,
    cfg: &RunConfig,
    mut on_sample: impl FnMut(&EntropyReport),
) -> Result<RunResult> {
    if !(cfg.cfl > 0.0) || !(cfg.t_end > 0.0) || !(cfg.dt_max > 0.0) {
        return Err(Error::Config("cfl, t_end and dt_max must be positive".into()));
    }
    let mut q = initial;
    let mut k = q.zeros_like();
    let mut du = q.zeros_like();
    let mut t = 0.0;
    let mut steps = 0;
    let mut reports = Vec::new();
    let abort = |time, reason, steps, reports| {
        Ok(RunResult {
            status: RunStatus::Aborted { time, reason },
            steps,
            state: None,
            reports,
        })
    };
    if let Some(reason) = state_fault(disc, &q) {
        return abort(t, reason, steps, reports);
    }
    let mut log = |t: f64, q: &SolutionField, reports: &mut Vec<EntropyReport>| -> Result<(), AbortReason> {
        let r = sample(disc, q, t).map_err(|e| AbortReason::from_error(&e))?;
        on_sample(&r);
        reports.push(r);
        match cfg.entropy_guard {
            Some(g) if r.margin < -g * r.entropy.abs().max(1.0) => Err(AbortReason::EntropyBound),
            _ => Ok(()),
        }
    };
    if let Err(reason) = log(t, &q, &mut reports) {
        return abort(t, reason, steps, reports);
    }
    while t < cfg.t_end {
        let mut dt = disc.compute_dt(&q, cfg.cfl, cfg.dt_max, cfg.dt_denominator);
        if !(dt > 0.0) || !dt.is_finite() {
            return abort(t, AbortReason::NaN, steps, reports);
        }
        let last = t + dt >= cfg.t_end;
        if last {
            dt = cfg.t_end - t;
        }
        let stepped = rk54_field_step(disc, &mut q, &mut k, &mut du, t, dt);
        if let Err(e) = stepped {
            return abort(t, AbortReason::from_error(&e), steps, reports);
        }
        if let Some(reason) = state_fault(disc, &q) {
            return abort(t, reason, steps, reports);
        }
        steps += 1;
        let t_prev = t;
        t = if last { cfg.t_end } else { t + dt };
        if last || (cfg.log_stride > 0 && steps % cfg.log_stride == 0) {
            if let Err(reason) = log(t, &q, &mut reports) {
                return abort(t_prev, reason, steps, reports);
            }
        }
    }
    Ok(RunResult {
        status: RunStatus::Completed,
        steps,
        state: Some(q),
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate(f: impl Fn(&[f64], &mut [f64]), y0: &[f64], t_end: f64, steps: usize) -> Vec<f64> {
        let mut y = y0.to_vec();
        let mut k = vec![0.0; y.len()];
        let mut du = vec![0.0; y.len()];
        let dt = t_end / steps as f64;
        for s in 0..steps {
            rk54_step(&mut y, &mut k, &mut du, s as f64 * dt, dt, |u, _, out| {
                f(u, out);
                Ok(())
            })
            .unwrap();
        }
        y
    }

    #[test]
    fn coefficients_consistent() {
        // b sums to one; c_s equals the stage time implied by a and b
        let mut b_eff = [0.0; 5];
        let mut w = 0.0;
        let mut c_implied = [0.0; 5];
        let mut t = 0.0;
        for s in 0..5 {
            c_implied[s] = t;
            w = RK_A[s] * w + 1.0;
            t += RK_B[s] * w;
            b_eff[s] = t;
        }
        assert!((t - 1.0).abs() < 1e-14, "{t}");
        for s in 0..5 {
            assert!((c_implied[s] - RK_C[s]).abs() < 1e-12, "stage {s}");
        }
    }

    #[test]
    fn zero_rhs_leaves_state() {
        let y = integrate(|_, out| out.fill(0.0), &[1.5, -2.0], 1.0, 7);
        assert_eq!(y, vec![1.5, -2.0]);
    }

    #[test]
    fn observed_order_on_decay() {
        let err = |n| (integrate(|u, out| out[0] = -u[0], &[1.0], 1.0, n)[0] - (-1.0f64).exp()).abs();
        let (e1, e2, e3) = (err(5), err(10), err(20));
        for (a, b) in [(e1, e2), (e2, e3)] {
            let order = (a / b).log2();
            assert!((3.9..=4.1).contains(&order), "order {order}");
        }
    }

    #[test]
    fn energy_decay_of_linear_system() {
        // u' = A u with A = [[-1, 2], [-2, -1]]: |u|^2 = exp(-2 t) |u0|^2
        let rhs = |u: &[f64], out: &mut [f64]| {
            out[0] = -u[0] + 2.0 * u[1];
            out[1] = -2.0 * u[0] - u[1];
        };
        let err = |n| {
            let y = integrate(rhs, &[1.0, 0.5], 2.0, n);
            (y[0] * y[0] + y[1] * y[1] - 1.25 * (-4.0f64).exp()).abs()
        };
        let (a, b) = (err(40), err(80));
        assert!(b < 1e-6);
        let order = (a / b).log2();
        assert!((3.8..=4.2).contains(&order), "order {order}");
    }

    #[test]
    fn abort_reason_mapping() {
        assert_eq!(
            AbortReason::from_error(&Error::NonpositiveHeight(f64::NAN)),
            AbortReason::NaN
        );
        assert_eq!(
            AbortReason::from_error(&Error::NonpositiveHeight(-1.0)),
            AbortReason::NonpositiveHeight
        );
        let e = Error::NegativeRadicand {
            name: "lambda1",
            value: -1.0,
        };
        assert_eq!(AbortReason::from_error(&e), AbortReason::BoundaryData);
    }
}
