//! Semi-Riemannian warped and twisted products `(B x F, -g_B + e^{2α} g_F)`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::chart::{invert_metric, ChartMetric, Christoffel, Signature};
use crate::error::{Error, Result};

type ValueFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;
type DiffFn = Arc<dyn Fn(&[f64], &[f64]) -> (Vec<f64>, Vec<f64>) + Send + Sync>;

/// The warping exponent `α`, evaluated as `α(b, f)`. Warped products are the
/// case where `α` ignores the fiber point.
#[derive(Clone)]
pub enum WarpFunction {
    Zero,
    Constant(f64),
    /// `α(b) = scale * log b_l`, a multiple of the Busemann function of the
    /// upper half-space whose last coordinate is `b_l`.
    Busemann { scale: f64 },
    Custom {
        name: String,
        value: ValueFn,
        /// Coordinate differentials `(∂α/∂b, ∂α/∂f)`.
        differential: DiffFn,
        fiber_dependent: bool,
    },
}

impl fmt::Debug for WarpFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "0"),
            Self::Constant(c) => write!(f, "{c}"),
            Self::Busemann { scale } => write!(f, "{scale}*busemann"),
            Self::Custom { name, .. } => write!(f, "{name}"),
        }
    }
}

impl WarpFunction {
    pub fn custom<V, D>(name: impl Into<String>, fiber_dependent: bool, value: V, differential: D) -> Self
    where
        V: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
        D: Fn(&[f64], &[f64]) -> (Vec<f64>, Vec<f64>) + Send + Sync + 'static,
    {
        Self::Custom { name: name.into(), value: Arc::new(value), differential: Arc::new(differential), fiber_dependent }
    }

    pub fn value(&self, b: &[f64], f: &[f64]) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Constant(c) => *c,
            Self::Busemann { scale } => scale * b[b.len() - 1].ln(),
            Self::Custom { value, .. } => value(b, f),
        }
    }

    /// `(∂α/∂b, ∂α/∂f)` in coordinates.
    pub fn differential(&self, b: &[f64], f: &[f64]) -> (Vec<f64>, Vec<f64>) {
        match self {
            Self::Zero | Self::Constant(_) => (vec![0.0; b.len()], vec![0.0; f.len()]),
            Self::Busemann { scale } => {
                let mut db = vec![0.0; b.len()];
                let last = b.len() - 1;
                db[last] = scale / b[last];
                (db, vec![0.0; f.len()])
            }
            Self::Custom { differential, .. } => differential(b, f),
        }
    }

    pub fn is_fiber_dependent(&self) -> bool {
        matches!(self, Self::Custom { fiber_dependent: true, .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ProductKind {
    Plain,
    Warped,
    Twisted,
}

/// Base `(B, g_B)`, fiber `(F, g_F)` and warping exponent `α`. The assembled
/// metric is `diag(-g_B(b), e^{2α(b,f)} g_F(f))` in coordinates `(b, f)`.
#[derive(Debug, Clone)]
pub struct WarpedProductSpec {
    pub base: ChartMetric,
    pub fiber: ChartMetric,
    pub alpha: WarpFunction,
}

impl WarpedProductSpec {
    pub fn new(base: ChartMetric, fiber: ChartMetric, alpha: WarpFunction) -> Self {
        Self { base, fiber, alpha }
    }

    pub fn plain(base: ChartMetric, fiber: ChartMetric) -> Self {
        Self::new(base, fiber, WarpFunction::Zero)
    }

    pub fn kind(&self) -> ProductKind {
        match self.alpha {
            WarpFunction::Zero => ProductKind::Plain,
            _ if self.alpha.is_fiber_dependent() => ProductKind::Twisted,
            _ => ProductKind::Warped,
        }
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber.dim()
    }

    pub fn dim(&self) -> usize {
        self.base_dim() + self.fiber_dim()
    }

    pub fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        x.split_at(self.base_dim())
    }

    pub fn join(&self, b: &[f64], f: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        x.extend_from_slice(f);
        x
    }

    /// The metric of the whole product as a chart on `B x F`.
    pub fn assemble(&self) -> ChartMetric {
        let nb = self.base_dim();
        let nf = self.fiber_dim();
        let n = nb + nf;
        let bs = self.base.signature();
        let fs = self.fiber.signature();
        let signature = Signature::new(fs.positive + bs.negative, bs.positive + fs.negative);
        let name = match self.kind() {
            ProductKind::Plain => format!("product:{}*{}", self.base.name(), self.fiber.name()),
            _ => format!("warped:{}*{}:alpha={:?}", self.base.name(), self.fiber.name(), self.alpha),
        };

        let me = self.clone();
        let metric = move |x: &[f64]| {
            let (b, f) = x.split_at(nb);
            let gb = me.base.metric_at(b).unwrap_or_else(|_| nan_matrix(nb));
            let gf = me.fiber.metric_at(f).unwrap_or_else(|_| nan_matrix(nf));
            let w = (2.0 * me.alpha.value(b, f)).exp();
            let mut g = DMatrix::zeros(n, n);
            g.view_mut((0, 0), (nb, nb)).copy_from(&(-gb));
            g.view_mut((nb, nb), (nf, nf)).copy_from(&(gf * w));
            g
        };
        let mut sample_box = self.base.sample_box().to_vec();
        sample_box.extend_from_slice(self.fiber.sample_box());
        let dom = self.clone();
        let mut chart = ChartMetric::new(name, n, signature, metric)
            .with_domain(move |x| {
                let (b, f) = x.split_at(nb);
                dom.base.in_domain(b) && dom.fiber.in_domain(f)
            })
            .with_sample_box(sample_box);

        if self.base.has_analytic_christoffel() && self.fiber.has_analytic_christoffel() {
            let me = self.clone();
            chart = chart.with_christoffel(move |x| me.analytic_christoffel(x));
        }
        chart
    }

    /// Christoffel symbols of the product built from the factors' symbols
    /// and the differential of `α`, with no finite differencing.
    fn analytic_christoffel(&self, x: &[f64]) -> Result<Christoffel> {
        let nb = self.base_dim();
        let nf = self.fiber_dim();
        let n = nb + nf;
        let (b, f) = x.split_at(nb);
        let gb = self.base.metric_at(b)?;
        let gf = self.fiber.metric_at(f)?;
        let dgb = self.base.christoffel(b)?.metric_derivatives(&gb);
        let dgf = self.fiber.christoffel(f)?.metric_derivatives(&gf);
        let alpha = self.alpha.value(b, f);
        let (da_b, da_f) = self.alpha.differential(b, f);
        let w = (2.0 * alpha).exp();

        let mut g = DMatrix::zeros(n, n);
        g.view_mut((0, 0), (nb, nb)).copy_from(&(-&gb));
        g.view_mut((nb, nb), (nf, nf)).copy_from(&(&gf * w));

        let mut dg = Vec::with_capacity(n);
        for c in 0..nb {
            let mut m = DMatrix::zeros(n, n);
            m.view_mut((0, 0), (nb, nb)).copy_from(&(-&dgb[c]));
            m.view_mut((nb, nb), (nf, nf)).copy_from(&(&gf * (2.0 * da_b[c] * w)));
            dg.push(m);
        }
        for r in 0..nf {
            let mut m = DMatrix::zeros(n, n);
            let block = &gf * (2.0 * da_f[r] * w) + &dgf[r] * w;
            m.view_mut((nb, nb), (nf, nf)).copy_from(&block);
            dg.push(m);
        }
        let ginv = invert_metric(&g).ok_or_else(|| Error::SingularMetric {
            chart: "warped product".into(),
            point: x.to_vec(),
        })?;
        Ok(Christoffel::from_metric_derivatives(&ginv, &dg))
    }

    /// The fiber through base point `b` with its induced metric
    /// `e^{2α(b, ·)} g_F`.
    pub fn fiber_slice(&self, b: &[f64]) -> ChartMetric {
        let nf = self.fiber_dim();
        let b = b.to_vec();
        let me = self.clone();
        let bb = b.clone();
        let metric = move |f: &[f64]| {
            let gf = me.fiber.metric_at(f).unwrap_or_else(|_| nan_matrix(nf));
            gf * (2.0 * me.alpha.value(&bb, f)).exp()
        };
        let dom = self.fiber.clone();
        let chart = ChartMetric::new(format!("fiber@{b:?}"), nf, self.fiber.signature(), metric)
            .with_domain(move |f| dom.in_domain(f))
            .with_sample_box(self.fiber.sample_box().to_vec());
        if !self.fiber.has_analytic_christoffel() {
            return chart;
        }
        let me = self.clone();
        chart.with_christoffel(move |f| {
            let gf = me.fiber.metric_at(f)?;
            let dgf = me.fiber.christoffel(f)?.metric_derivatives(&gf);
            let w = (2.0 * me.alpha.value(&b, f)).exp();
            let (_, da_f) = me.alpha.differential(&b, f);
            let g = &gf * w;
            let dg: Vec<_> = (0..nf).map(|r| &gf * (2.0 * da_f[r] * w) + &dgf[r] * w).collect();
            let ginv = invert_metric(&g).ok_or_else(|| Error::SingularMetric {
                chart: "fiber slice".into(),
                point: f.to_vec(),
            })?;
            Ok(Christoffel::from_metric_derivatives(&ginv, &dg))
        })
    }

    /// `∇^B α`, the gradient of `α` with respect to `g_B` (base directions).
    pub fn base_gradient_alpha(&self, b: &[f64], f: &[f64]) -> Result<Vec<f64>> {
        let ginv = self.base.inverse_metric_at(b)?;
        let (da_b, _) = self.alpha.differential(b, f);
        Ok((0..self.base_dim()).map(|a| (0..self.base_dim()).map(|c| ginv[(a, c)] * da_b[c]).sum()).collect())
    }
}

fn nan_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_element(n, n, f64::NAN)
}

/// Busemann function `b(x) = log x_l` of the upper half-space `H^l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BusemannField {
    pub dim: usize,
}

impl BusemannField {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    pub fn chart(&self) -> ChartMetric {
        super::hyperbolic(self.dim)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        x[self.dim - 1].ln()
    }

    /// `∇b = g_H^{-1} db = (0, ..., 0, x_l)`.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        v[self.dim - 1] = x[self.dim - 1];
        v
    }

    /// The warping exponent `scale * b`.
    pub fn warp(&self, scale: f64) -> WarpFunction {
        WarpFunction::Busemann { scale }
    }
}
