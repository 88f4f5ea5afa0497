//! O'Neill tensor checks for warped and twisted products.
//!
//! For `(B x F, -g_B + e^{2α} g_F)` the projection onto `B` is a
//! semi-Riemannian submersion with integrable horizontal distribution, so
//! `A = 0` and the only nontrivial O'Neill tensor is `T`, the second
//! fundamental form of the fibers.

use serde::Serialize;

use super::warped::WarpedProductSpec;
use crate::chart::{
    area_form, check_r_ge_k, sectional, BoxSampler, CurvatureReport, SamplingConfig, TangentSampler,
};
use crate::chart::curvature::inner;
use crate::error::{Error, Result};

/// A point `(b, f)` of the product and two fiber directions. Only the fiber
/// components are stored, so the lifts have base components exactly zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerticalPair {
    pub point: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl VerticalPair {
    pub fn new(point: Vec<f64>, u: Vec<f64>, v: Vec<f64>) -> Self {
        Self { point, u, v }
    }
}

fn lift_vertical(spec: &WarpedProductSpec, w: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; spec.base_dim()];
    out.extend_from_slice(w);
    out
}

fn lift_horizontal(spec: &WarpedProductSpec, w: &[f64]) -> Vec<f64> {
    let mut out = w.to_vec();
    out.resize(spec.dim(), 0.0);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TMode {
    /// `T_U V = e^{2α} g_F(U, V) ∇^B α`.
    ClosedForm,
    /// Base components of `∇_U V` from finite-difference Christoffel symbols
    /// of the assembled metric.
    Numeric,
}

fn check_pair(spec: &WarpedProductSpec, point: &[f64], u: &[f64], v: &[f64]) -> Result<()> {
    if point.len() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: point.len() });
    }
    for w in [u, v] {
        if w.len() != spec.fiber_dim() {
            return Err(Error::DimensionMismatch { expected: spec.fiber_dim(), got: w.len() });
        }
    }
    Ok(())
}

/// `T_Û V̂`, returned as base-direction components.
pub fn oneill_t(spec: &WarpedProductSpec, pair: &VerticalPair, mode: TMode) -> Result<Vec<f64>> {
    check_pair(spec, &pair.point, &pair.u, &pair.v)?;
    let (b, f) = spec.split(&pair.point);
    match mode {
        TMode::ClosedForm => {
            let gf = spec.fiber.metric_at(f)?;
            let scale = (2.0 * spec.alpha.value(b, f)).exp() * inner(&gf, &pair.u, &pair.v);
            Ok(spec.base_gradient_alpha(b, f)?.into_iter().map(|c| scale * c).collect())
        }
        TMode::Numeric => {
            let chart = spec.assemble().without_analytic();
            let gamma = chart.christoffel(&pair.point)?;
            let u = lift_vertical(spec, &pair.u);
            let v = lift_vertical(spec, &pair.v);
            // ∇_U V = U(V) + Γ(U, V); the constant-coefficient lifts have U(V) = 0.
            let mut w = gamma.contract(&u, &v);
            w.truncate(spec.base_dim());
            Ok(w)
        }
    }
}

/// Which kind of plane to test in [`oneill_relation_check`]. Vectors are
/// given in base (horizontal) or fiber (vertical) components only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PlanePair {
    Horizontal { x: Vec<f64>, y: Vec<f64> },
    Vertical { v: Vec<f64>, w: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneillResidual {
    /// Sectional curvature of the plane in the total space.
    pub total: f64,
    /// Sectional curvature of the projected plane in the base (horizontal
    /// case) or of the plane in the fiber (vertical case).
    pub reference: f64,
    /// `(g(T_V V, T_W W) - g(T_V W, T_V W)) / area`, zero for horizontal planes.
    pub t_term: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Checks O'Neill's curvature relations on a warped or twisted product.
///
/// Horizontal planes: `K̂(X, Y) = K_*(π_* X, π_* Y)`, since `A = 0`.
/// Vertical planes: `K̂(V, W) = K^⊥(V, W) - (g(T_V V, T_W W) - g(T_V W, T_V W)) / area`.
/// The residual is the absolute difference of the two sides.
pub fn oneill_relation_check(
    spec: &WarpedProductSpec,
    point: &[f64],
    pair: &PlanePair,
    tol: f64,
) -> Result<OneillResidual> {
    if point.len() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: point.len() });
    }
    let total_chart = spec.assemble();
    let (b, f) = spec.split(point);
    let (total, reference, t_term) = match pair {
        PlanePair::Horizontal { x, y } => {
            for w in [x, y] {
                if w.len() != spec.base_dim() {
                    return Err(Error::DimensionMismatch { expected: spec.base_dim(), got: w.len() });
                }
            }
            let total = sectional(&total_chart, point, &lift_horizontal(spec, x), &lift_horizontal(spec, y))?;
            let reference = sectional(&spec.base.negated(), b, x, y)?;
            (total, reference, 0.0)
        }
        PlanePair::Vertical { v, w } => {
            check_pair(spec, point, v, w)?;
            let total = sectional(&total_chart, point, &lift_vertical(spec, v), &lift_vertical(spec, w))?;
            let slice = spec.fiber_slice(b);
            let reference = sectional(&slice, f, v, w)?;
            let t = |a: &[f64], c: &[f64]| oneill_t(spec, &VerticalPair::new(point.to_vec(), a.to_vec(), c.to_vec()), TMode::Numeric);
            let tvv = t(v, v)?;
            let tww = t(w, w)?;
            let tvw = t(v, w)?;
            // horizontal part of the total metric is -g_B
            let gh = -spec.base.metric_at(b)?;
            let area = area_form(&slice.metric_at(f)?, v, w);
            let t_term = (inner(&gh, &tvv, &tww) - inner(&gh, &tvw, &tvw)) / area;
            (total, reference, t_term)
        }
    };
    let residual = (total - reference + t_term).abs();
    Ok(OneillResidual { total, reference, t_term, residual, tolerance: tol, passed: residual <= tol })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaseCurvatureReport {
    /// `R >= k` on `(B, -g_B)`, which is `K_B <= -k` for Riemannian `g_B`.
    pub report: CurvatureReport,
    /// Largest sampled sectional curvature of `(B, g_B)`.
    pub max_sectional: f64,
    pub passed: bool,
}

/// Verifies that the base `(B, g_B)` has sectional curvature at most `-k`.
///
/// Flipping the sign of the metric flips every sectional curvature, so this
/// is `R >= k` for `-g_B`, checked with [`check_r_ge_k`] on the same sample
/// stream that produces the reported maximum.
pub fn base_curvature_bound_check(
    spec: &WarpedProductSpec,
    k: f64,
    config: &SamplingConfig,
) -> Result<BaseCurvatureReport> {
    let negated = spec.base.negated();
    let report = check_r_ge_k(&negated, &BoxSampler, k, config)?;
    let mut max_sectional = f64::NEG_INFINITY;
    for i in 0..config.n_samples {
        let mut rng = crate::chart::certify::sample_rng(config.seed, i as u64);
        let pair = BoxSampler.sample(&spec.base, &mut rng);
        match sectional(&spec.base, &pair.base_point, &pair.u, &pair.v) {
            Ok(s) => max_sectional = max_sectional.max(s),
            Err(Error::DegeneratePlane { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let passed = report.passed;
    Ok(BaseCurvatureReport { report, max_sectional, passed })
}
