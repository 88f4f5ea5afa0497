//! Coordinate-chart tensor calculus for semi-Riemannian metrics.
//!
//! A [`ChartMetric`] describes a metric on an open subset of `R^n` through a
//! matrix-valued evaluator. Christoffel symbols come from an analytic
//! evaluator when the chart provides one, otherwise from central differences
//! of the metric entries. The Riemann tensor is always obtained by
//! differentiating the Christoffel symbols.
//!
//! Curvature convention: `R(X,Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_[X,Y] Z`, stored as
//! `R^i_{jkl}` with `R(∂_k, ∂_l)∂_j = R^i_{jkl} ∂_i`. With this convention the
//! unit sphere has sectional curvature `+1`.

pub(crate) mod certify;
pub(crate) mod curvature;
mod tensor;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use certify::{check_r_ge_k, BoxSampler, CurvatureReport, SamplingConfig, TangentPair, TangentSampler};
pub use curvature::{area_form, curvature_quadform, ricci, scalar_curvature, sectional};
pub use tensor::{Christoffel, Riemann};

/// Relative step for central differences of metric entries.
pub const METRIC_FD_STEP: f64 = 1e-5;
/// Relative base step for differentiating Christoffel symbols.
pub const CHRISTOFFEL_FD_STEP: f64 = 1e-4;
/// Metrics with `|det g| <= DEGENERACY_RATIO * ∏ max_j |g_ij|` count as singular.
pub const DEGENERACY_RATIO: f64 = 1e-10;

pub type MetricFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;
pub type ChristoffelFn = Arc<dyn Fn(&[f64]) -> Result<Christoffel> + Send + Sync>;
pub type DomainFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Number of positive and negative directions of a nondegenerate metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize) -> Self {
        Self { positive, negative }
    }

    pub fn riemannian(dim: usize) -> Self {
        Self::new(dim, 0)
    }

    /// Signature of `-g`.
    pub fn flipped(self) -> Self {
        Self::new(self.negative, self.positive)
    }

    pub fn dim(self) -> usize {
        self.positive + self.negative
    }
}

/// A semi-Riemannian metric on a single coordinate chart.
#[derive(Clone)]
pub struct ChartMetric {
    name: String,
    dim: usize,
    signature: Signature,
    metric: MetricFn,
    christoffel: Option<ChristoffelFn>,
    domain: DomainFn,
    sample_box: Vec<(f64, f64)>,
}

impl fmt::Debug for ChartMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartMetric")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("signature", &self.signature)
            .field("analytic_christoffel", &self.christoffel.is_some())
            .field("sample_box", &self.sample_box)
            .finish()
    }
}

impl ChartMetric {
    /// Creates a chart on all of `R^dim` with the given metric evaluator.
    ///
    /// Only the upper triangle of the returned matrix is read; the lower
    /// triangle is filled in by reflection, so `metric_at` is symmetric by
    /// construction.
    pub fn new<F>(name: impl Into<String>, dim: usize, signature: Signature, metric: F) -> Self
    where
        F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        assert_eq!(signature.dim(), dim, "signature does not match dimension");
        Self {
            name: name.into(),
            dim,
            signature,
            metric: Arc::new(metric),
            christoffel: None,
            domain: Arc::new(|_| true),
            sample_box: vec![(-1.0, 1.0); dim],
        }
    }

    pub fn with_domain<F>(mut self, domain: F) -> Self
    where
        F: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        self.domain = Arc::new(domain);
        self
    }

    pub fn with_christoffel<F>(mut self, christoffel: F) -> Self
    where
        F: Fn(&[f64]) -> Result<Christoffel> + Send + Sync + 'static,
    {
        self.christoffel = Some(Arc::new(christoffel));
        self
    }

    /// Compact box (one interval per coordinate) used by default samplers.
    pub fn with_sample_box(mut self, sample_box: Vec<(f64, f64)>) -> Self {
        assert_eq!(sample_box.len(), self.dim);
        self.sample_box = sample_box;
        self
    }

    /// Same metric with the analytic Christoffel evaluator removed, forcing
    /// the finite-difference path.
    pub fn without_analytic(mut self) -> Self {
        self.christoffel = None;
        self
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The chart of `-g`. Christoffel symbols are unchanged by a constant
    /// rescaling, so an analytic evaluator carries over.
    pub fn negated(&self) -> Self {
        let metric = self.metric.clone();
        Self {
            name: format!("-({})", self.name),
            dim: self.dim,
            signature: self.signature.flipped(),
            metric: Arc::new(move |x| -metric(x)),
            christoffel: self.christoffel.clone(),
            domain: self.domain.clone(),
            sample_box: self.sample_box.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn sample_box(&self) -> &[(f64, f64)] {
        &self.sample_box
    }

    pub fn has_analytic_christoffel(&self) -> bool {
        self.christoffel.is_some()
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        x.len() == self.dim && x.iter().all(|c| c.is_finite()) && (self.domain)(x)
    }

    fn domain_error(&self, x: &[f64]) -> Error {
        Error::Domain { chart: self.name.clone(), point: x.to_vec() }
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if !self.in_domain(x) {
            return Err(self.domain_error(x));
        }
        Ok(())
    }

    /// Metric matrix at `x`, symmetric by construction.
    pub fn metric_at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_point(x)?;
        Ok(self.metric_unchecked(x))
    }

    fn metric_unchecked(&self, x: &[f64]) -> DMatrix<f64> {
        let mut g = (self.metric)(x);
        for i in 0..self.dim {
            for j in 0..i {
                g[(i, j)] = g[(j, i)];
            }
        }
        g
    }

    pub fn inverse_metric_at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let g = self.metric_at(x)?;
        self.invert(&g, x)
    }

    fn invert(&self, g: &DMatrix<f64>, x: &[f64]) -> Result<DMatrix<f64>> {
        invert_metric(g).ok_or_else(|| Error::SingularMetric { chart: self.name.clone(), point: x.to_vec() })
    }

    /// Checks the nondegeneracy and signature invariants at `x`.
    pub fn validate_at(&self, x: &[f64]) -> Result<()> {
        let g = self.metric_at(x)?;
        if is_degenerate(&g) {
            return Err(Error::SingularMetric { chart: self.name.clone(), point: x.to_vec() });
        }
        let eig = g.symmetric_eigen();
        let positive = eig.eigenvalues.iter().filter(|&&l| l > 0.0).count();
        let negative = eig.eigenvalues.iter().filter(|&&l| l < 0.0).count();
        if Signature::new(positive, negative) != self.signature {
            return Err(Error::InvalidConfig(format!(
                "chart `{}` has signature ({positive},{negative}) at {x:?}, declared ({},{})",
                self.name, self.signature.positive, self.signature.negative
            )));
        }
        Ok(())
    }

    /// Christoffel symbols `Γ^i_{jk}` at `x`.
    pub fn christoffel(&self, x: &[f64]) -> Result<Christoffel> {
        self.check_point(x)?;
        match &self.christoffel {
            Some(analytic) => analytic(x),
            None => self.christoffel_fd(x),
        }
    }

    /// Christoffel symbols from central differences of the metric with step
    /// `1e-5 * max(1, |x|)`.
    pub fn christoffel_fd(&self, x: &[f64]) -> Result<Christoffel> {
        self.check_point(x)?;
        let h = METRIC_FD_STEP * norm(x).max(1.0);
        let mut dg = Vec::with_capacity(self.dim);
        let mut probe = x.to_vec();
        for k in 0..self.dim {
            probe[k] = x[k] + h;
            if !self.in_domain(&probe) {
                return Err(self.domain_error(&probe));
            }
            let plus = self.metric_unchecked(&probe);
            probe[k] = x[k] - h;
            if !self.in_domain(&probe) {
                return Err(self.domain_error(&probe));
            }
            let minus = self.metric_unchecked(&probe);
            probe[k] = x[k];
            dg.push((plus - minus) / (2.0 * h));
        }
        let g = self.metric_unchecked(x);
        let ginv = self.invert(&g, x)?;
        Ok(Christoffel::from_metric_derivatives(&ginv, &dg))
    }

    /// Riemann tensor `R^i_{jkl}` at `x`.
    ///
    /// Derivatives of the Christoffel symbols use a Richardson-extrapolated
    /// central difference on the stencil `x ± h e_k`, `x ± h/2 e_k` with
    /// `h = 1e-4 * max(1, |x|)`. Antisymmetry in `(k, l)` is imposed exactly.
    pub fn riemann(&self, x: &[f64]) -> Result<Riemann> {
        self.check_point(x)?;
        let n = self.dim;
        let h = CHRISTOFFEL_FD_STEP * norm(x).max(1.0);
        let gamma = self.christoffel(x)?;
        // dgamma[k] = ∂_k Γ
        let mut dgamma = Vec::with_capacity(n);
        let mut probe = x.to_vec();
        for k in 0..n {
            let mut eval = |offset: f64| -> Result<Christoffel> {
                probe[k] = x[k] + offset;
                let out = self.christoffel(&probe);
                probe[k] = x[k];
                out
            };
            let p1 = eval(h)?;
            let m1 = eval(-h)?;
            let p2 = eval(0.5 * h)?;
            let m2 = eval(-0.5 * h)?;
            let d = Christoffel::from_fn(n, |i, j, l| {
                let wide = (p1.get(i, j, l) - m1.get(i, j, l)) / (2.0 * h);
                let narrow = (p2.get(i, j, l) - m2.get(i, j, l)) / h;
                (4.0 * narrow - wide) / 3.0
            });
            dgamma.push(d);
        }
        Ok(Riemann::from_christoffel(&gamma, &dgamma))
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}


/// Copy of `g` with each row divided by its largest entry, together with
/// those scales, or `None` if a row is zero or not finite.
fn row_normalise(g: &DMatrix<f64>) -> Option<(DMatrix<f64>, Vec<f64>)> {
    let mut scaled = g.clone();
    let mut norms = Vec::with_capacity(g.nrows());
    for mut row in scaled.row_iter_mut() {
        let n = row.amax();
        if !(n > 0.0 && n.is_finite()) {
            return None;
        }
        row /= n;
        norms.push(n);
    }
    Some((scaled, norms))
}

/// `|det g|` relative to the product of the row scales, so the test does not
/// depend on the overall scale of the metric.
fn is_degenerate(g: &DMatrix<f64>) -> bool {
    row_normalise(g).is_none_or(|(scaled, _)| scaled.determinant().abs() <= DEGENERACY_RATIO)
}

/// Inverse of a nondegenerate symmetric matrix, computed on the row-normalised
/// matrix so entries far from unit size neither overflow nor underflow.
pub(crate) fn invert_metric(g: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let (scaled, norms) = row_normalise(g)?;
    if scaled.determinant().abs() <= DEGENERACY_RATIO {
        return None;
    }
    // g = D S, so g^{-1} = S^{-1} D^{-1}.
    let mut inv = scaled.try_inverse()?;
    for (mut col, n) in inv.column_iter_mut().zip(&norms) {
        col /= *n;
    }
    Some(inv)
}

/// Flat metric `diag(+1 x positive, -1 x negative)` on `R^n`.
pub fn flat(name: impl Into<String>, positive: usize, negative: usize) -> ChartMetric {
    let dim = positive + negative;
    ChartMetric::new(name, dim, Signature::new(positive, negative), move |_| {
        let mut g = DMatrix::identity(dim, dim);
        for i in positive..dim {
            g[(i, i)] = -1.0;
        }
        g
    })
    .with_christoffel(move |_| Ok(Christoffel::zeros(dim)))
}

/// Conformally flat Riemannian metric `e^{2φ} δ` with analytic Christoffels
/// `Γ^i_{jk} = δ^i_j ∂_kφ + δ^i_k ∂_jφ - δ_{jk} ∂_iφ`.
pub fn conformally_flat<P, G>(name: impl Into<String>, dim: usize, phi: P, grad_phi: G) -> ChartMetric
where
    P: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
{
    ChartMetric::new(name, dim, Signature::riemannian(dim), move |x| {
        DMatrix::identity(dim, dim) * (2.0 * phi(x)).exp()
    })
    .with_christoffel(move |x| {
        let dphi = grad_phi(x);
        Ok(Christoffel::from_fn(dim, |i, j, k| {
            let mut value = 0.0;
            if i == j {
                value += dphi[k];
            }
            if i == k {
                value += dphi[j];
            }
            if j == k {
                value -= dphi[i];
            }
            value
        }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn half_plane() -> ChartMetric {
        conformally_flat("H2", 2, |x| -x[1].ln(), |x| vec![0.0, -1.0 / x[1]]).with_domain(|x| x[1] > 0.0)
    }

    #[test]
    fn euclidean_christoffels_vanish() {
        let chart = flat("E2", 2, 0);
        let gamma = chart.christoffel(&[0.3, -2.0]).unwrap();
        assert!(gamma.max_abs() == 0.0);
        let fd = chart.christoffel_fd(&[0.3, -2.0]).unwrap();
        assert!(fd.max_abs() == 0.0);
    }

    #[test]
    fn half_plane_christoffels_match_hand_values() {
        let gamma = half_plane().christoffel(&[0.0, 1.0]).unwrap();
        // Γ^x_{xy} = -1/y, Γ^y_{xx} = 1/y, Γ^y_{yy} = -1/y
        assert_abs_diff_eq!(gamma.get(0, 0, 1), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gamma.get(0, 1, 0), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gamma.get(1, 0, 0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gamma.get(1, 1, 1), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gamma.get(0, 0, 0), 0.0, epsilon = 1e-15);

        let fd = half_plane().without_analytic().christoffel(&[0.0, 1.0]).unwrap();
        assert!(fd.max_diff(&gamma) < 1e-8);
    }

    #[test]
    fn metric_is_symmetric_by_construction() {
        let chart = ChartMetric::new("lopsided", 2, Signature::riemannian(2), |_| {
            DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 99.0, 3.0])
        });
        let g = chart.metric_at(&[0.0, 0.0]).unwrap();
        assert_eq!(g[(1, 0)], g[(0, 1)]);
    }

    #[test]
    fn domain_and_singularity_errors() {
        let chart = half_plane();
        assert!(matches!(chart.christoffel(&[0.0, -1.0]), Err(Error::Domain { .. })));
        // stencil crosses y = 0
        let fd = chart.clone().without_analytic();
        assert!(matches!(fd.christoffel(&[0.0, 1e-7]), Err(Error::Domain { .. })));

        let degenerate = ChartMetric::new("deg", 2, Signature::riemannian(2), |_| {
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0])
        });
        assert!(matches!(degenerate.christoffel_fd(&[0.0, 0.0]), Err(Error::SingularMetric { .. })));
    }

    #[test]
    fn validate_detects_wrong_signature() {
        let lying = ChartMetric::new("lying", 2, Signature::riemannian(2), |_| {
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]))
        });
        assert!(lying.validate_at(&[0.0, 0.0]).is_err());
        assert!(flat("M", 1, 1).validate_at(&[0.0, 0.0]).is_ok());
    }

    #[test]
    fn negated_flips_signature_and_metric() {
        let chart = half_plane();
        let neg = chart.negated();
        assert_eq!(neg.signature(), Signature::new(0, 2));
        let x = [0.1, 2.0];
        assert_eq!(neg.metric_at(&x).unwrap(), -chart.metric_at(&x).unwrap());
        assert!(neg.christoffel(&x).unwrap().max_diff(&chart.christoffel(&x).unwrap()) == 0.0);
    }
}
