//! The comparison equation `h' = k - h²`.
//!
//! Solutions starting in `[-√k, √k]` exist for all time and stay there; any
//! other start blows up in finite time in one direction. The closed form is
//! `h(t) = √k (h0 + √k tanh(√k t)) / (√k + h0 tanh(√k t))`.

use rayon::prelude::*;
use serde::Serialize;

use super::ode::{integrate, IntegratorConfig, OdeSystem, Status};
use crate::error::{Error, Result};

/// Slack allowed above `√k` for bounded runs.
pub const BOUND_SLACK: f64 = 1e-6;
/// Blow-up threshold used for these runs. `h ~ 1/(t* - t)` near the
/// singularity, and the default `1e12` would be reached only after the step
/// size has collapsed below `min_step`.
pub const RICCATI_BLOWUP_THRESHOLD: f64 = 1e8;

pub fn riccati_closed_form(t: f64, k: f64, h0: f64) -> f64 {
    let r = k.sqrt();
    let th = (r * t).tanh();
    r * (h0 + r * th) / (r + h0 * th)
}

/// Finite blow-up time for `|h0| > √k`: negative when `h0 > √k`, positive
/// when `h0 < -√k`.
pub fn riccati_blowup_time(k: f64, h0: f64) -> Option<f64> {
    let r = k.sqrt();
    (h0.abs() > r).then(|| ((h0 - r) / (h0 + r)).ln() / (2.0 * r))
}

#[derive(Debug, Clone, Serialize)]
pub struct RiccatiLeg {
    pub t_end: f64,
    pub status: Status,
    pub sup_abs: f64,
    /// Largest deviation from the closed form over samples where it is below
    /// `1e4` in magnitude.
    pub closed_form_error: f64,
    pub breakdown_estimate: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RiccatiRun {
    pub h0: f64,
    pub bounded_start: bool,
    pub forward: RiccatiLeg,
    pub backward: RiccatiLeg,
    pub blowup_time: Option<f64>,
    pub blowup_relative_error: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RiccatiReport {
    pub k: f64,
    pub t_max: f64,
    pub bound: f64,
    pub runs: Vec<RiccatiRun>,
    pub passed: bool,
}

/// `h' = (r - h)(r + h)` with `r = √k` rounded once, so `±r` are exact
/// equilibria of the discretised flow. With `k - h²` the rounded start
/// `-fl(√k)` can sit just outside the unstable equilibrium and drift off.
pub fn riccati_system(k: f64) -> OdeSystem {
    let r = k.sqrt();
    OdeSystem::new(1, format!("h' = {k} - h^2"), move |_, h| Ok(vec![(r - h[0]) * (r + h[0])]))
}

fn leg(sys: &OdeSystem, k: f64, h0: f64, t_end: f64, cfg: &IntegratorConfig) -> Result<RiccatiLeg> {
    let tr = integrate(sys, &[h0], (0.0, t_end), cfg)?;
    let sup_abs = tr.states.iter().map(|y| y[0].abs()).fold(0.0, f64::max);
    let closed_form_error = tr
        .times
        .iter()
        .zip(&tr.states)
        .filter_map(|(&t, y)| {
            let exact = riccati_closed_form(t, k, h0);
            (exact.abs() < 1e4).then(|| (y[0] - exact).abs() / exact.abs().max(1.0))
        })
        .fold(0.0, f64::max);
    let breakdown_estimate = tr.status.is_breakdown().then(|| tr.breakdown_estimate());
    Ok(RiccatiLeg { t_end, status: tr.status, sup_abs, closed_form_error, breakdown_estimate })
}

/// Integrates from each `h0` over `[0, t_max]` and `[-t_max, 0]`.
///
/// A run passes if a start in `[-√k, √k]` stays within `√k + BOUND_SLACK` in
/// both directions, or if a start outside breaks down in the direction and
/// near the time predicted by the closed form and completes in the other.
pub fn riccati_experiment(k: f64, h0s: &[f64], t_max: f64, cfg: &IntegratorConfig) -> Result<RiccatiReport> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::ParameterDomain(format!("k must be positive, got {k}")));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::ParameterDomain(format!("t_max must be positive, got {t_max}")));
    }
    let cfg = IntegratorConfig { blowup_threshold: cfg.blowup_threshold.min(RICCATI_BLOWUP_THRESHOLD), ..*cfg };
    let sys = riccati_system(k);
    let bound = k.sqrt();
    let runs = h0s
        .par_iter()
        .map(|&h0| -> Result<RiccatiRun> {
            let forward = leg(&sys, k, h0, t_max, &cfg)?;
            let backward = leg(&sys, k, h0, -t_max, &cfg)?;
            let bounded_start = h0.abs() <= bound;
            let blowup_time = riccati_blowup_time(k, h0).filter(|t| t.abs() <= t_max);
            let (blowup_relative_error, passed) = match blowup_time {
                None => {
                    let within = forward.sup_abs.max(backward.sup_abs) <= bound + BOUND_SLACK;
                    let done = forward.status.is_completed() && backward.status.is_completed();
                    (None, done && (within || !bounded_start))
                }
                Some(ts) => {
                    let (hit, other) = if ts > 0.0 { (&forward, &backward) } else { (&backward, &forward) };
                    let err = hit.breakdown_estimate.map(|b| (b - ts).abs() / ts.abs());
                    (err, err.is_some_and(|e| e <= 1e-2) && other.status.is_completed())
                }
            };
            Ok(RiccatiRun { h0, bounded_start, forward, backward, blowup_time, blowup_relative_error, passed })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = runs.iter().all(|r| r.passed);
    Ok(RiccatiReport { k, t_max, bound, runs, passed })
}
