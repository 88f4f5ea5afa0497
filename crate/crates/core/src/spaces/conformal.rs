//! Scalar curvature of conformally flat tori `(T^l, e^{2α} g_flat)`.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::chart::{scalar_curvature, ChartMetric, Signature};
use crate::error::{Error, Result};

/// A smooth periodic function on the torus, in angle coordinates.
pub type TorusFunction = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    /// `e^{-2α} (2(l-1) Δα - (l-2)(l-1) |dα|^2)` with derivatives of `α` by
    /// central differences.
    Formula,
    /// Contraction of the finite-difference Riemann tensor of `e^{2α} I`.
    Numeric,
}

const ALPHA_FD_STEP: f64 = 1e-4;

/// Scalar curvature of `e^{2α} g_flat` on `T^l` at `x`.
///
/// `Δ = -Σ ∂_i^2` is the nonnegative (geometer's) Laplacian, the sign for
/// which the formula agrees with the curvature of the metric.
pub fn conformal_scalar_torus(l: usize, alpha: &TorusFunction, x: &[f64], mode: ScalarMode) -> Result<f64> {
    if l < 2 {
        return Err(Error::ParameterDomain(format!("torus dimension must be at least 2, got {l}")));
    }
    if x.len() != l {
        return Err(Error::DimensionMismatch { expected: l, got: x.len() });
    }
    match mode {
        ScalarMode::Formula => {
            let h = ALPHA_FD_STEP;
            let a0 = alpha(x);
            let mut lap = 0.0;
            let mut grad_sq = 0.0;
            let mut y = x.to_vec();
            for i in 0..l {
                y[i] = x[i] + h;
                let ap = alpha(&y);
                y[i] = x[i] - h;
                let am = alpha(&y);
                y[i] = x[i];
                lap -= (ap - 2.0 * a0 + am) / (h * h);
                let d = (ap - am) / (2.0 * h);
                grad_sq += d * d;
            }
            let lf = l as f64;
            Ok((-2.0 * a0).exp() * (2.0 * (lf - 1.0) * lap - (lf - 2.0) * (lf - 1.0) * grad_sq))
        }
        ScalarMode::Numeric => {
            let a = alpha.clone();
            let chart = ChartMetric::new(format!("conformal_torus({l})"), l, Signature::riemannian(l), move |y| {
                DMatrix::identity(y.len(), y.len()) * (2.0 * a(y)).exp()
            });
            scalar_curvature(&chart, x)
        }
    }
}
