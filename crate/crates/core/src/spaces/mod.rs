//! Model spaces and semi-Riemannian products.
//!
//! Hyperbolic space uses the upper half-space model (last coordinate
//! positive), the sphere uses stereographic coordinates restricted to
//! `|x| < 10`, and the flat torus is `R^m` with angle coordinates.

mod conformal;
mod oneill;
mod parse;
mod warped;

use crate::chart::{conformally_flat, flat, ChartMetric};
#[cfg(test)]
use crate::chart::Signature;

pub use conformal::{conformal_scalar_torus, ScalarMode, TorusFunction};
pub use oneill::{
    base_curvature_bound_check, oneill_relation_check, oneill_t, BaseCurvatureReport, OneillResidual, PlanePair,
    TMode, VerticalPair,
};
pub use parse::{build_space, AlphaExpr, SpaceSpec};
pub use warped::{BusemannField, ProductKind, WarpFunction, WarpedProductSpec};

/// Hyperbolic space `H^l` in the upper half-space model,
/// `g = (dx_1^2 + ... + dx_l^2) / x_l^2`.
pub fn hyperbolic(l: usize) -> ChartMetric {
    assert!(l >= 1);
    let last = l - 1;
    let mut sample_box = vec![(-1.0, 1.0); l];
    sample_box[last] = (0.5, 2.0);
    conformally_flat(
        format!("hyperbolic({l})"),
        l,
        move |x| -x[last].ln(),
        move |x| {
            let mut d = vec![0.0; l];
            d[last] = -1.0 / x[last];
            d
        },
    )
    .with_domain(move |x| x[last] > 0.0)
    .with_sample_box(sample_box)
}

/// Unit sphere `S^m` in stereographic coordinates, `g = 4 δ / (1 + |x|^2)^2`.
pub fn sphere(m: usize) -> ChartMetric {
    assert!(m >= 1);
    conformally_flat(
        format!("sphere({m})"),
        m,
        |x| 2f64.ln() - (1.0 + x.iter().map(|c| c * c).sum::<f64>()).ln(),
        |x| {
            let s = 1.0 + x.iter().map(|c| c * c).sum::<f64>();
            x.iter().map(|c| -2.0 * c / s).collect()
        },
    )
    .with_domain(|x| x.iter().map(|c| c * c).sum::<f64>() < 100.0)
    .with_sample_box(vec![(-1.5, 1.5); m])
}

/// Flat torus `T^m`, identity metric in angle coordinates.
pub fn flat_torus(m: usize) -> ChartMetric {
    flat(format!("torus({m})"), m, 0).with_sample_box(vec![(0.0, std::f64::consts::TAU); m])
}

pub fn euclidean(n: usize) -> ChartMetric {
    flat(format!("euclidean({n})"), n, 0)
}

/// `diag(+1 x p, -1 x q)`.
pub fn minkowski(p: usize, q: usize) -> ChartMetric {
    flat(format!("minkowski({p},{q})"), p, q)
}
