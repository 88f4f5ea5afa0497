use nalgebra::DMatrix;

use super::{norm, ChartMetric, Riemann};
use crate::error::{Error, Result};

/// Relative threshold below which a plane counts as degenerate for [`sectional`].
pub const DEGENERATE_PLANE_RTOL: f64 = 1e-9;

pub(crate) fn inner(g: &DMatrix<f64>, u: &[f64], v: &[f64]) -> f64 {
    let n = g.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        if u[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            acc += g[(i, j)] * u[i] * v[j];
        }
    }
    acc
}

/// `g(u,u) g(v,v) - g(u,v)^2`. Negative on planes of mixed signature.
pub fn area_form(g: &DMatrix<f64>, u: &[f64], v: &[f64]) -> f64 {
    let uv = inner(g, u, v);
    inner(g, u, u) * inner(g, v, v) - uv * uv
}

pub(crate) fn quadform_with(riemann: &Riemann, g: &DMatrix<f64>, u: &[f64], v: &[f64]) -> f64 {
    let w = riemann.apply(u, v, v);
    inner(g, &w, u)
}

/// `g(R(u,v)v, u)` at `x`.
pub fn curvature_quadform(chart: &ChartMetric, x: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
    check_len(chart, u)?;
    check_len(chart, v)?;
    let riemann = chart.riemann(x)?;
    let g = chart.metric_at(x)?;
    Ok(quadform_with(&riemann, &g, u, v))
}

/// Sectional curvature of the plane spanned by `u, v`.
///
/// Fails with [`Error::DegeneratePlane`] when the plane is (numerically)
/// lightlike, i.e. `|area| <= 1e-9 |u|^2 |v|^2` in coordinate norms.
pub fn sectional(chart: &ChartMetric, x: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
    check_len(chart, u)?;
    check_len(chart, v)?;
    let g = chart.metric_at(x)?;
    let area = area_form(&g, u, v);
    let threshold = DEGENERATE_PLANE_RTOL * (norm(u) * norm(v)).powi(2);
    if area.abs() <= threshold || area == 0.0 {
        return Err(Error::DegeneratePlane { area, threshold });
    }
    let riemann = chart.riemann(x)?;
    Ok(quadform_with(&riemann, &g, u, v) / area)
}

/// Ricci tensor `Ric_{jl} = R^i_{lij}`, i.e. `Ric(Y,Z) = tr(X -> R(X,Y)Z)`.
pub fn ricci(chart: &ChartMetric, x: &[f64]) -> Result<DMatrix<f64>> {
    let r = chart.riemann(x)?;
    let n = chart.dim();
    Ok(DMatrix::from_fn(n, n, |j, l| (0..n).map(|i| r.get(i, l, i, j)).sum()))
}

pub fn scalar_curvature(chart: &ChartMetric, x: &[f64]) -> Result<f64> {
    let ric = ricci(chart, x)?;
    let ginv = chart.inverse_metric_at(x)?;
    Ok(ginv.component_mul(&ric).sum())
}

fn check_len(chart: &ChartMetric, u: &[f64]) -> Result<()> {
    if u.len() != chart.dim() {
        return Err(Error::DimensionMismatch { expected: chart.dim(), got: u.len() });
    }
    Ok(())
}
