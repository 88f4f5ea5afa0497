//! Closed-form base parameters for the lightlike and timelike geodesics of
//! `-g_H + e^{2√k H} g_T`, and a numeric demo that launches them.
//!
//! The base curve is the unit-speed hyperbolic geodesic
//! `γ0(s) = (0, ..., 0, e^{-s})` in the half-space chart, so `γ0' = -∇H` with
//! `H = log y`. A geodesic `(γ0(s(t)), γ_F(t))` then needs
//! `s'' = √k s'^2` (lightlike) or `s'' = √k (s'^2 - 1)` (timelike), and both
//! solutions run off to `s = ∞` at a finite parameter.

use serde::Serialize;

use super::flows::{energy, warped_geodesic_rhs};
use super::ode::{integrate, IntegratorConfig, Status, Trajectory};
use crate::chart::curvature::inner;
use crate::error::{Error, Result};
use crate::spaces::{flat_torus, hyperbolic, WarpFunction, WarpedProductSpec};

/// Relative tolerance on the breakdown parameter.
pub const BREAKDOWN_TOLERANCE: f64 = 1e-2;
/// Half-width of the symmetric control interval for the plain product.
pub const CONTROL_SPAN: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalKind {
    Lightlike,
    Timelike,
}

impl CausalKind {
    /// Default `C1` for the demo. The constants are free; these give a
    /// singularity at `-1/√k` and `log 2 / (2√k)`.
    pub fn default_c1(self) -> f64 {
        match self {
            Self::Lightlike => 1.0,
            Self::Timelike => 0.5,
        }
    }

    fn target_energy(self) -> f64 {
        match self {
            Self::Lightlike => 0.0,
            Self::Timelike => -1.0,
        }
    }
}

fn check_k(k: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::ParameterDomain(format!("k must be positive, got {k}")));
    }
    Ok(k.sqrt())
}

fn singular(t: f64) -> Error {
    Error::Domain { chart: "closed-form base parameter".into(), point: vec![t] }
}

/// `s(t) = -(1/√k) log|√k t + C1| + C2`.
pub fn lightlike_s(t: f64, k: f64, c1: f64, c2: f64) -> Result<f64> {
    let r = check_k(k)?;
    let a = r * t + c1;
    if a == 0.0 || !a.is_finite() {
        return Err(singular(t));
    }
    Ok(-a.abs().ln() / r + c2)
}

pub fn lightlike_ds(t: f64, k: f64, c1: f64) -> Result<f64> {
    let r = check_k(k)?;
    let a = r * t + c1;
    if a == 0.0 {
        return Err(singular(t));
    }
    Ok(-1.0 / a)
}

/// Parameter where the lightlike solution leaves every compact set.
pub fn lightlike_singular_time(k: f64, c1: f64) -> Result<f64> {
    Ok(-c1 / check_k(k)?)
}

fn check_c1(c1: f64) -> Result<()> {
    if !(c1 > 0.0 && c1.is_finite()) {
        return Err(Error::ParameterDomain(format!("timelike C1 must be positive, got {c1}")));
    }
    Ok(())
}

/// `s(t) = -(1/√k) log|C1 e^{2√k t} - 1| + t + C2`.
pub fn timelike_s(t: f64, k: f64, c1: f64, c2: f64) -> Result<f64> {
    let r = check_k(k)?;
    check_c1(c1)?;
    let a = c1 * (2.0 * r * t).exp() - 1.0;
    if a == 0.0 || !a.is_finite() {
        return Err(singular(t));
    }
    Ok(-a.abs().ln() / r + t + c2)
}

/// `s'(t) = (C1 e^{2√k t} + 1) / (1 - C1 e^{2√k t})`.
pub fn timelike_ds(t: f64, k: f64, c1: f64) -> Result<f64> {
    let r = check_k(k)?;
    check_c1(c1)?;
    let e = c1 * (2.0 * r * t).exp();
    if e == 1.0 {
        return Err(singular(t));
    }
    Ok((e + 1.0) / (1.0 - e))
}

pub fn timelike_singular_time(k: f64, c1: f64) -> Result<f64> {
    let r = check_k(k)?;
    check_c1(c1)?;
    Ok((1.0 / c1).ln() / (2.0 * r))
}

/// Finite-difference residual of the base-parameter ODE at `t`.
///
/// Returns `|s'' - √k s'^2|` or `|s'' - √k (s'^2 - 1)|`, scaled by
/// `max(1, |s''|)` so it is meaningful close to the singularity too. The step
/// shrinks with the distance to the singular time and both derivatives are
/// Richardson-extrapolated.
pub fn s_residual(kind: CausalKind, t: f64, k: f64, c1: f64, c2: f64) -> Result<f64> {
    let r = check_k(k)?;
    let (t_star, s): (f64, Box<dyn Fn(f64) -> Result<f64>>) = match kind {
        CausalKind::Lightlike => (lightlike_singular_time(k, c1)?, Box::new(move |t| lightlike_s(t, k, c1, c2))),
        CausalKind::Timelike => (timelike_singular_time(k, c1)?, Box::new(move |t| timelike_s(t, k, c1, c2))),
    };
    let h = 1e-3 * (1.0 + t.abs()).min((t - t_star).abs());
    let s0 = s(t)?;
    let diffs = |h: f64| -> Result<(f64, f64)> {
        let (sp, sm) = (s(t + h)?, s(t - h)?);
        Ok(((sp - sm) / (2.0 * h), (sp - 2.0 * s0 + sm) / (h * h)))
    };
    let (a1, a2) = diffs(h)?;
    let (b1, b2) = diffs(0.5 * h)?;
    let d1 = (4.0 * b1 - a1) / 3.0;
    let d2 = (4.0 * b2 - a2) / 3.0;
    let rhs = match kind {
        CausalKind::Lightlike => r * d1 * d1,
        CausalKind::Timelike => r * (d1 * d1 - 1.0),
    };
    Ok((d2 - rhs).abs() / d2.abs().max(1.0))
}

/// `-g_H + e^{2 scale H} g_T` on `H^l × T^m`.
pub fn busemann_warped(l: usize, m: usize, scale: f64) -> WarpedProductSpec {
    WarpedProductSpec::new(hyperbolic(l), flat_torus(m), WarpFunction::Busemann { scale })
}

#[derive(Debug, Clone, Serialize)]
pub struct CausalRun {
    pub kind: CausalKind,
    pub k: f64,
    pub c1: f64,
    pub c2: f64,
    /// Direction of integration, towards the singular parameter.
    pub direction: f64,
    pub closed_form_time: f64,
    pub status: Status,
    pub breakdown_estimate: Option<f64>,
    pub relative_error: Option<f64>,
    pub initial_energy: f64,
    /// Largest `|g(γ',γ') - g0| / max(1, s'^2)` over samples in the first
    /// 90% of the interval.
    pub max_energy_drift: f64,
    /// Largest `|s_numeric - s_closed|` over the same samples.
    pub max_s_deviation: f64,
    pub passed: bool,
    #[serde(skip)]
    pub trajectory: Trajectory,
}

/// Launches the geodesic `(γ0(s(t)), γ_F(t))` on `busemann_warped(l, m, √k)`
/// from `t = 0` towards the closed-form singular parameter.
pub fn warped_causal_run(
    l: usize,
    m: usize,
    k: f64,
    kind: CausalKind,
    c1: f64,
    c2: f64,
    cfg: &IntegratorConfig,
) -> Result<CausalRun> {
    if l < 2 || m < 2 {
        return Err(Error::ParameterDomain(format!("need l, m >= 2, got l = {l}, m = {m}")));
    }
    let r = check_k(k)?;
    let (s0, ds0, t_star) = match kind {
        CausalKind::Lightlike => {
            (lightlike_s(0.0, k, c1, c2)?, lightlike_ds(0.0, k, c1)?, lightlike_singular_time(k, c1)?)
        }
        CausalKind::Timelike => {
            let ds = timelike_ds(0.0, k, c1)?;
            if ds <= 1.0 {
                return Err(Error::ParameterDomain(format!(
                    "timelike construction needs s'(0) > 1, got {ds} (C1 must lie in (0, 1))"
                )));
            }
            (timelike_s(0.0, k, c1, c2)?, ds, timelike_singular_time(k, c1)?)
        }
    };
    let spec = busemann_warped(l, m, r);
    let y0 = initial_state(&spec, kind, s0, ds0)?;
    let chart = spec.assemble();
    let e0 = energy(&chart, &y0)?;

    let direction = t_star.signum();
    let t_end = 2.0 * t_star;
    let trajectory = integrate(&warped_geodesic_rhs(&spec)?, &y0, (0.0, t_end), cfg)?;

    let s_closed = |t: f64| match kind {
        CausalKind::Lightlike => lightlike_s(t, k, c1, c2),
        CausalKind::Timelike => timelike_s(t, k, c1, c2),
    };
    let mut max_energy_drift = 0.0f64;
    let mut max_s_deviation = 0.0f64;
    for (&t, y) in trajectory.times.iter().zip(&trajectory.states) {
        if t.abs() > 0.9 * t_star.abs() {
            break;
        }
        let s_num = -y[l - 1].ln();
        max_s_deviation = max_s_deviation.max((s_num - s_closed(t)?).abs());
        let ds = match kind {
            CausalKind::Lightlike => lightlike_ds(t, k, c1)?,
            CausalKind::Timelike => timelike_ds(t, k, c1)?,
        };
        let drift = (energy(&chart, y)? - e0).abs() / ds.powi(2).max(1.0);
        max_energy_drift = max_energy_drift.max(drift);
    }

    let breakdown_estimate = trajectory.status.is_breakdown().then(|| trajectory.breakdown_estimate());
    let relative_error = breakdown_estimate.map(|b| (b - t_star).abs() / t_star.abs());
    let passed = relative_error.is_some_and(|e| e <= BREAKDOWN_TOLERANCE)
        && (e0 - kind.target_energy()).abs() <= 1e-12
        && max_energy_drift <= 1e-6
        && max_s_deviation <= 1e-3;
    Ok(CausalRun {
        kind,
        k,
        c1,
        c2,
        direction,
        closed_form_time: t_star,
        status: trajectory.status,
        breakdown_estimate,
        relative_error,
        initial_energy: e0,
        max_energy_drift,
        max_s_deviation,
        passed,
        trajectory,
    })
}

/// State `(γ0(s0), 0, s'(0) γ0'(s0), v e_1)` with the fiber speed `v` solved
/// from the causal condition given the base speed.
fn initial_state(spec: &WarpedProductSpec, kind: CausalKind, s0: f64, ds0: f64) -> Result<Vec<f64>> {
    let (l, m) = (spec.base_dim(), spec.fiber_dim());
    let y = (-s0).exp();
    let mut b = vec![0.0; l];
    b[l - 1] = y;
    let mut db = vec![0.0; l];
    db[l - 1] = -ds0 * y;
    let f = vec![0.0; m];
    let base_sq = inner(&spec.base.metric_at(&b)?, &db, &db);
    let fiber_sq = match kind {
        CausalKind::Lightlike => base_sq,
        CausalKind::Timelike => base_sq - 1.0,
    };
    let unit_sq = inner(&spec.fiber.metric_at(&f)?, &unit(m), &unit(m));
    let w = (2.0 * spec.alpha.value(&b, &f)).exp();
    let speed = (fiber_sq / (w * unit_sq)).sqrt();
    let mut state = b;
    state.extend(f);
    state.extend(db);
    state.extend(unit(m).into_iter().map(|c| c * speed));
    Ok(state)
}

fn unit(m: usize) -> Vec<f64> {
    let mut e = vec![0.0; m];
    e[0] = 1.0;
    e
}

#[derive(Debug, Clone, Serialize)]
pub struct ControlRun {
    pub kind: CausalKind,
    pub span: f64,
    pub backward: Status,
    pub forward: Status,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IncompletenessReport {
    pub l: usize,
    pub m: usize,
    pub k: f64,
    pub lightlike: CausalRun,
    pub timelike: CausalRun,
    pub controls: Vec<ControlRun>,
    pub passed: bool,
}

/// Runs both causal constructions with the default constants and a plain
/// product control launched from the same initial data.
///
/// The control coordinates grow like `e^{|s'| t}` in the half-space chart,
/// which is not a breakdown, so those runs use a blow-up threshold near the
/// top of the `f64` range.
pub fn incompleteness_demo(l: usize, m: usize, k: f64, cfg: &IntegratorConfig) -> Result<IncompletenessReport> {
    let lightlike = warped_causal_run(l, m, k, CausalKind::Lightlike, CausalKind::Lightlike.default_c1(), 0.0, cfg)?;
    let timelike = warped_causal_run(l, m, k, CausalKind::Timelike, CausalKind::Timelike.default_c1(), 0.0, cfg)?;

    let plain = WarpedProductSpec::plain(hyperbolic(l), flat_torus(m));
    let sys = warped_geodesic_rhs(&plain)?;
    let control_cfg = IntegratorConfig { blowup_threshold: 1e300, ..*cfg };
    let mut controls = Vec::new();
    for run in [&lightlike, &timelike] {
        let y0 = &run.trajectory.states[0];
        let backward = integrate(&sys, y0, (0.0, -CONTROL_SPAN), &control_cfg)?.status;
        let forward = integrate(&sys, y0, (0.0, CONTROL_SPAN), &control_cfg)?.status;
        controls.push(ControlRun {
            kind: run.kind,
            span: CONTROL_SPAN,
            backward,
            forward,
            passed: backward.is_completed() && forward.is_completed(),
        });
    }
    let passed = lightlike.passed && timelike.passed && controls.iter().all(|c| c.passed);
    Ok(IncompletenessReport { l, m, k, lightlike, timelike, controls, passed })
}
