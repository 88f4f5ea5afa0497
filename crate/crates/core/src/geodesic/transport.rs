//! Parallel transport along curves, and the block checks for product and
//! warped metrics: parallel fields along horizontal curves stay vertical, and
//! geodesics with horizontal initial velocity stay horizontal.

use std::sync::Arc;

use super::flows::{geodesic_rhs, warped_geodesic_rhs};
use super::ode::{integrate, IntegratorConfig, OdeSystem, Trajectory};
use crate::chart::curvature::inner;
use crate::chart::ChartMetric;
use crate::error::{Error, Result};
use crate::spaces::WarpedProductSpec;

/// A parameterised curve in chart coordinates.
pub trait CurvePath: Send + Sync {
    fn span(&self) -> (f64, f64);
    fn point(&self, t: f64) -> Vec<f64>;
    fn velocity(&self, t: f64) -> Vec<f64>;
}

type CurveFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// Curve given by closures for position and velocity.
#[derive(Clone)]
pub struct FnCurve {
    span: (f64, f64),
    point: CurveFn,
    velocity: CurveFn,
}

impl FnCurve {
    pub fn new<P, V>(span: (f64, f64), point: P, velocity: V) -> Self
    where
        P: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        V: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        Self { span, point: Arc::new(point), velocity: Arc::new(velocity) }
    }
}

impl CurvePath for FnCurve {
    fn span(&self) -> (f64, f64) {
        self.span
    }

    fn point(&self, t: f64) -> Vec<f64> {
        (self.point)(t)
    }

    fn velocity(&self, t: f64) -> Vec<f64> {
        (self.velocity)(t)
    }
}

/// Cubic Hermite interpolation of a geodesic trajectory with state `(x, v)`.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    dim: usize,
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
}

impl GeodesicPath {
    /// Times may run in either direction; they are stored increasing.
    pub fn from_trajectory(traj: &Trajectory) -> Result<Self> {
        let dim = traj.states.first().map_or(0, |s| s.len() / 2);
        if traj.times.len() < 2 || dim == 0 {
            return Err(Error::InvalidConfig("geodesic path needs at least two samples".into()));
        }
        let mut pairs: Vec<_> = traj.times.iter().copied().zip(traj.states.iter().cloned()).collect();
        if pairs[0].0 > pairs[pairs.len() - 1].0 {
            pairs.reverse();
        }
        let (times, states) = pairs.into_iter().unzip();
        Ok(Self { dim, times, states })
    }

    fn segment(&self, t: f64) -> (usize, f64, f64) {
        let i = self.times.partition_point(|&s| s <= t).clamp(1, self.times.len() - 1) - 1;
        let h = self.times[i + 1] - self.times[i];
        (i, (t - self.times[i]) / h, h)
    }
}

impl CurvePath for GeodesicPath {
    fn span(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    fn point(&self, t: f64) -> Vec<f64> {
        let (i, s, h) = self.segment(t);
        let (a, b) = (&self.states[i], &self.states[i + 1]);
        let n = self.dim;
        let h00 = 2.0 * s.powi(3) - 3.0 * s * s + 1.0;
        let h10 = s.powi(3) - 2.0 * s * s + s;
        let h01 = -2.0 * s.powi(3) + 3.0 * s * s;
        let h11 = s.powi(3) - s * s;
        (0..n).map(|j| h00 * a[j] + h10 * h * a[n + j] + h01 * b[j] + h11 * h * b[n + j]).collect()
    }

    fn velocity(&self, t: f64) -> Vec<f64> {
        let (i, s, h) = self.segment(t);
        let (a, b) = (&self.states[i], &self.states[i + 1]);
        let n = self.dim;
        let d00 = (6.0 * s * s - 6.0 * s) / h;
        let d10 = 3.0 * s * s - 4.0 * s + 1.0;
        let d01 = (-6.0 * s * s + 6.0 * s) / h;
        let d11 = 3.0 * s * s - 2.0 * s;
        (0..n).map(|j| d00 * a[j] + d10 * a[n + j] + d01 * b[j] + d11 * b[n + j]).collect()
    }
}

/// Solves `V' + Γ(c', V) = 0` along `curve` over its span. The trajectory's
/// states are the components of `V`.
pub fn parallel_transport(
    chart: &ChartMetric,
    curve: Arc<dyn CurvePath>,
    v0: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let n = chart.dim();
    if v0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v0.len() });
    }
    let span = curve.span();
    let chart = chart.clone();
    let sys = OdeSystem::new(n, format!("parallel transport on {}", chart.name()), move |t, v| {
        let x = curve.point(t);
        let dc = curve.velocity(t);
        Ok(chart.christoffel(&x)?.contract(&dc, v).into_iter().map(|a| -a).collect())
    });
    integrate(&sys, v0, span, cfg)
}

/// Integrates the geodesic from `(x0, v0)` together with the transport of
/// `w0`. States are `(x, v, W)`.
pub fn transport_along_geodesic(
    chart: &ChartMetric,
    x0: &[f64],
    v0: &[f64],
    w0: &[f64],
    t_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let n = chart.dim();
    for part in [v0, w0] {
        if part.len() != x0.len() || x0.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: part.len() });
        }
    }
    let geo = geodesic_rhs(chart);
    let c = chart.clone();
    let sys = OdeSystem::new(3 * n, format!("transport along geodesics of {}", chart.name()), move |t, y| {
        let mut out = geo.eval(t, &y[..2 * n])?;
        let gamma = c.christoffel(&y[..n])?;
        out.extend(gamma.contract(&y[n..2 * n], &y[2 * n..]).into_iter().map(|a| -a));
        Ok(out)
    });
    let y0: Vec<f64> = x0.iter().chain(v0).chain(w0).copied().collect();
    integrate(&sys, &y0, t_span, cfg)
}

/// `sqrt|g_B(W_B, W_B)|` maximised over a `(x, v, W)` trajectory on the
/// assembled metric of `spec`: the base part of the transported field.
pub fn verticality_defect(spec: &WarpedProductSpec, traj: &Trajectory) -> Result<f64> {
    let (nb, n) = (spec.base_dim(), spec.dim());
    let mut worst = 0.0f64;
    for y in &traj.states {
        let gb = spec.base.metric_at(&y[..nb])?;
        let w = &y[2 * n..2 * n + nb];
        worst = worst.max(inner(&gb, w, w).abs().sqrt());
    }
    Ok(worst)
}

/// Largest fiber-block speed `sqrt|e^{2α} g_F(f', f')|` along a geodesic
/// trajectory with state `(b, f, b', f')`.
pub fn horizontality_check(spec: &WarpedProductSpec, traj: &Trajectory) -> Result<f64> {
    let (nb, n) = (spec.base_dim(), spec.dim());
    let mut worst = 0.0f64;
    for y in &traj.states {
        let (b, f) = (&y[..nb], &y[nb..n]);
        let df = &y[n + nb..];
        let gf = spec.fiber.metric_at(f)?;
        let w = (2.0 * spec.alpha.value(b, f)).exp();
        worst = worst.max((w * inner(&gf, df, df)).abs().sqrt());
    }
    Ok(worst)
}

/// Launches the geodesic from `(b0, f0)` with velocity `(db0, df0)` using
/// the split equations and returns the horizontality defect.
pub fn horizontal_geodesic_defect(
    spec: &WarpedProductSpec,
    x0: &[f64],
    v0: &[f64],
    t_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<(Trajectory, f64)> {
    let y0: Vec<f64> = x0.iter().chain(v0).copied().collect();
    let traj = integrate(&warped_geodesic_rhs(spec)?, &y0, t_span, cfg)?;
    let defect = horizontality_check(spec, &traj)?;
    Ok((traj, defect))
}

/// Rotation angle in `(-π, π]` taking `a` to `b` in a 2D chart whose metric
/// is conformal to the Euclidean one, so coordinate angles are metric angles.
pub fn planar_angle(a: &[f64], b: &[f64]) -> f64 {
    let cross = a[0] * b[1] - a[1] * b[0];
    let dot = a[0] * b[0] + a[1] * b[1];
    cross.atan2(dot)
}
