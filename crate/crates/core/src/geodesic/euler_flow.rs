//! Numeric integration of the Euler–Arnold equation on `h1 + h2`.
//!
//! The `h1` part is constant and `Γ2' = t ad(Γ1) Γ2` is linear with a
//! generator that is skew for `B|h2`, so
//! `Γ2(u) = exp(u t ad(Γ1)) Γ2(0)` is a rotation. The matrix exponential
//! serves as the closed-form oracle.

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use super::ode::{integrate, IntegratorConfig, OdeSystem, Status, Trajectory};
use crate::error::{Error, Result};
use crate::su21::{euler_arnold_rhs, AlgebraElement};

#[derive(Debug, Clone, Serialize)]
pub struct EulerArnoldRun {
    pub t: f64,
    pub u_max: f64,
    pub initial: [f64; 8],
    pub status: Status,
    /// Largest `|Γ1(u) - Γ1(0)|` over samples, max-norm on coordinates.
    pub gamma1_drift: f64,
    /// Largest change of `sqrt|B(Γ2, Γ2)|`.
    pub norm_drift: f64,
    /// Largest deviation from `exp(u t ad(Γ1)) Γ2(0)`, max-norm.
    pub closed_form_error: f64,
    #[serde(skip)]
    pub trajectory: Trajectory,
}

fn element(y: &[f64]) -> AlgebraElement<f64> {
    AlgebraElement::new(std::array::from_fn(|i| y[i]))
}

pub fn euler_arnold_system(t: f64) -> OdeSystem {
    OdeSystem::new(8, format!("Euler-Arnold flow at t = {t}"), move |_, y| {
        Ok(euler_arnold_rhs(&element(y), &t)?.coords().to_vec())
    })
}

/// `ad(Γ1)` restricted to `h2`, in the `f1..f4` coordinates.
fn ad_h2(gamma1: &AlgebraElement<f64>) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| gamma1.bracket(&AlgebraElement::f(j + 1)).coords()[4 + i])
}

fn b_norm(x: &AlgebraElement<f64>) -> f64 {
    x.form_b(x).abs().sqrt()
}

/// Integrates from `Γ(0) = v1 + v2` with `v1` in `h1` and `v2` in `h2`.
pub fn euler_arnold_integrate(
    v1: &AlgebraElement<f64>,
    v2: &AlgebraElement<f64>,
    t: f64,
    u_max: f64,
    cfg: &IntegratorConfig,
) -> Result<EulerArnoldRun> {
    if !(t > -1.0 && t.is_finite()) {
        return Err(Error::ParameterDomain(format!("t must exceed -1, got {t}")));
    }
    if !(u_max.is_finite() && u_max >= 0.0) {
        return Err(Error::ParameterDomain(format!("u_max must be finite and nonnegative, got {u_max}")));
    }
    if v1.project(1) != *v1 {
        return Err(Error::BasisDecomposition("v1 must lie in h1".into()));
    }
    if v2.project(2) != *v2 {
        return Err(Error::BasisDecomposition("v2 must lie in h2".into()));
    }
    let gamma0 = v1.clone() + v2.clone();
    let initial = *gamma0.coords();
    let trajectory = integrate(&euler_arnold_system(t), &initial, (0.0, u_max), cfg)?;

    let generator = ad_h2(v1) * t;
    let x0 = Vector4::from_fn(|i, _| initial[4 + i]);
    let n0 = b_norm(v2);
    let mut gamma1_drift = 0.0f64;
    let mut norm_drift = 0.0f64;
    let mut closed_form_error = 0.0f64;
    for (&u, y) in trajectory.times.iter().zip(&trajectory.states) {
        for i in 0..4 {
            gamma1_drift = gamma1_drift.max((y[i] - initial[i]).abs());
        }
        norm_drift = norm_drift.max((b_norm(&element(y).project(2)) - n0).abs());
        let exact = (generator * u).exp() * x0;
        for i in 0..4 {
            closed_form_error = closed_form_error.max((y[4 + i] - exact[i]).abs());
        }
    }
    Ok(EulerArnoldRun {
        t,
        u_max,
        initial,
        status: trajectory.status,
        gamma1_drift,
        norm_drift,
        closed_form_error,
        trajectory,
    })
}

/// Deviation of `Γ2(u)` from `cos(tu) f1 + sin(tu) f3` along the run for
/// `Γ(0) = e2 + f1`.
pub fn rotation_error(run: &EulerArnoldRun) -> f64 {
    let t = run.t;
    run.trajectory
        .times
        .iter()
        .zip(&run.trajectory.states)
        .map(|(&u, y)| {
            let expected = [(t * u).cos(), 0.0, (t * u).sin(), 0.0];
            (0..4).map(|i| (y[4 + i] - expected[i]).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}
