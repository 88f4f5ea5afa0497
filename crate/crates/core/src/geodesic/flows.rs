//! Geodesic equations as first-order systems on `(x, v)`.

use serde::Serialize;

use super::ode::OdeSystem;
use crate::chart::curvature::inner;
use crate::chart::ChartMetric;
use crate::error::{Error, Result};
use crate::spaces::WarpedProductSpec;

/// Position and velocity, concatenated as the ODE state `(x, v)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicState {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
}

impl GeodesicState {
    pub fn new(position: Vec<f64>, velocity: Vec<f64>) -> Result<Self> {
        if position.len() != velocity.len() {
            return Err(Error::DimensionMismatch { expected: position.len(), got: velocity.len() });
        }
        Ok(Self { position, velocity })
    }

    pub fn from_state(y: &[f64]) -> Self {
        let (x, v) = y.split_at(y.len() / 2);
        Self { position: x.to_vec(), velocity: v.to_vec() }
    }

    pub fn to_state(&self) -> Vec<f64> {
        let mut y = self.position.clone();
        y.extend_from_slice(&self.velocity);
        y
    }
}

/// `x' = v`, `v'^i = -Γ^i_{jk} v^j v^k`.
pub fn geodesic_rhs(chart: &ChartMetric) -> OdeSystem {
    let n = chart.dim();
    let chart = chart.clone();
    OdeSystem::new(2 * n, format!("geodesic equation of {}", chart.name()), move |_, y| {
        let (x, v) = y.split_at(n);
        let acc = chart.christoffel(x)?.contract(v, v);
        let mut out = v.to_vec();
        out.extend(acc.into_iter().map(|a| -a));
        Ok(out)
    })
}

/// `g(v, v)` at the state's base point.
pub fn energy(chart: &ChartMetric, y: &[f64]) -> Result<f64> {
    let n = chart.dim();
    let (x, v) = y.split_at(n);
    Ok(inner(&chart.metric_at(x)?, v, v))
}

/// Geodesics of `-g_B + e^{2α} g_F` written in the split form
///
/// `∇^B_t γ_B' = -e^{2α} g_F(γ_F', γ_F') ∇^B α`,
/// `∇^F_t γ_F' = -2 (d/dt α(γ_B)) γ_F'`.
///
/// The state is `(b, f, b', f')`. Only warped products (base-only `α`) are
/// accepted.
pub fn warped_geodesic_rhs(spec: &WarpedProductSpec) -> Result<OdeSystem> {
    if spec.alpha.is_fiber_dependent() {
        return Err(Error::InvalidConfig("split geodesic equations need a base-only warping function".into()));
    }
    let (nb, nf) = (spec.base_dim(), spec.fiber_dim());
    let n = nb + nf;
    let spec = spec.clone();
    let name = spec.assemble().name().to_string();
    Ok(OdeSystem::new(2 * n, format!("split geodesic equations of {name}"), move |_, y| {
        let (x, v) = y.split_at(n);
        let (b, f) = x.split_at(nb);
        let (db, df) = v.split_at(nb);
        if !spec.base.in_domain(b) || !spec.fiber.in_domain(f) {
            return Err(Error::Domain { chart: name.clone(), point: x.to_vec() });
        }
        let gf = spec.fiber.metric_at(f)?;
        let w = (2.0 * spec.alpha.value(b, f)).exp();
        let fiber_speed = w * inner(&gf, df, df);
        let grad = spec.base_gradient_alpha(b, f)?;
        let (dalpha, _) = spec.alpha.differential(b, f);
        let alpha_rate: f64 = dalpha.iter().zip(db).map(|(a, c)| a * c).sum();

        let base_acc = spec.base.christoffel(b)?.contract(db, db);
        let fiber_acc = spec.fiber.christoffel(f)?.contract(df, df);
        let mut out = v.to_vec();
        out.extend((0..nb).map(|a| -base_acc[a] - fiber_speed * grad[a]));
        out.extend((0..nf).map(|p| -fiber_acc[p] - 2.0 * alpha_rate * df[p]));
        Ok(out)
    }))
}
