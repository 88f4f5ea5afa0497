//! Sampled certification of the curvature condition `R >= k`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::curvature::{area_form, quadform_with};
use super::ChartMetric;
use crate::error::{Error, Result};

/// A base point with two tangent vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentPair {
    pub base_point: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// Draws tangent pairs for [`check_r_ge_k`]. Implementations must produce
/// in-domain base points and must be deterministic given the RNG state.
pub trait TangentSampler: Sync {
    fn sample(&self, chart: &ChartMetric, rng: &mut ChaCha8Rng) -> TangentPair;
}

/// Uniform base points in the chart's sample box, i.i.d. standard normal
/// tangent components.
#[derive(Debug, Clone, Copy, Default)]
pub struct BoxSampler;

impl TangentSampler for BoxSampler {
    fn sample(&self, chart: &ChartMetric, rng: &mut ChaCha8Rng) -> TangentPair {
        let base_point = chart.sample_box().iter().map(|&(lo, hi)| rng.random_range(lo..=hi)).collect();
        let n = chart.dim();
        let u = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let v = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        TangentPair { base_point, u, v }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplingConfig {
    pub n_samples: usize,
    pub seed: u64,
    /// Relative tolerance: a sample fails when `margin < -tol * scale`.
    pub tol: f64,
    pub workers: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self { n_samples: 1000, seed: 0, tol: 1e-9, workers: 1 }
    }
}

/// RNG for sample `index`: every sample owns an independent ChaCha stream, so
/// the sample stream does not depend on how work is split across threads.
pub(crate) fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub(crate) fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub chart: String,
    pub k: f64,
    pub seed: u64,
    /// Number of evaluated `(u, v)` pairs, random and stress pairs together.
    pub samples: usize,
    pub tolerance: f64,
    /// Minimum of `g(R(u,v)v,u) - k * area(u,v)` over all evaluated pairs.
    pub min_margin: f64,
    pub witness: Option<TangentPair>,
    /// Minimum of `margin / max(1, |lhs|, |k area|)`.
    pub min_scaled_margin: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
struct Evaluated {
    index: u64,
    margin: f64,
    scaled: f64,
    pair: TangentPair,
}

fn better(a: &Evaluated, b: &Evaluated, key: fn(&Evaluated) -> f64) -> bool {
    key(a).total_cmp(&key(b)).then(a.index.cmp(&b.index)).is_lt()
}

/// Evaluates `margin = g(R(u,v)v,u) - k (g(u,u)g(v,v) - g(u,v)^2)` on
/// `n_samples` pseudorandom tangent pairs plus, at each sampled point, every
/// pair of distinct coordinate basis vectors.
///
/// The check passes iff `margin >= -tol * max(1, |lhs|, |k area|)` for all
/// pairs. Reports are identical for any worker count.
pub fn check_r_ge_k(
    chart: &ChartMetric,
    sampler: &dyn TangentSampler,
    k: f64,
    config: &SamplingConfig,
) -> Result<CurvatureReport> {
    if config.n_samples == 0 {
        return Err(Error::EmptySample);
    }
    if !k.is_finite() {
        return Err(Error::ParameterDomain(format!("k must be finite, got {k}")));
    }
    let n = chart.dim();
    let per_point = 1 + n * (n - 1) / 2;

    let evaluate = |sample: usize| -> Result<(Evaluated, Evaluated)> {
        let mut rng = sample_rng(config.seed, sample as u64);
        let pair = sampler.sample(chart, &mut rng);
        let riemann = chart.riemann(&pair.base_point)?;
        let g = chart.metric_at(&pair.base_point)?;
        let mut worst_raw: Option<Evaluated> = None;
        let mut worst_scaled: Option<Evaluated> = None;
        let mut consider = |offset: usize, u: Vec<f64>, v: Vec<f64>| {
            let lhs = quadform_with(&riemann, &g, &u, &v);
            let rhs = k * area_form(&g, &u, &v);
            let margin = lhs - rhs;
            let scale = 1f64.max(lhs.abs()).max(rhs.abs());
            let cand = Evaluated {
                index: (sample * per_point + offset) as u64,
                margin,
                scaled: margin / scale,
                pair: TangentPair { base_point: pair.base_point.clone(), u, v },
            };
            if worst_raw.as_ref().is_none_or(|w| better(&cand, w, |e| e.margin)) {
                worst_raw = Some(cand.clone());
            }
            if worst_scaled.as_ref().is_none_or(|w| better(&cand, w, |e| e.scaled)) {
                worst_scaled = Some(cand);
            }
        };
        consider(0, pair.u.clone(), pair.v.clone());
        let mut offset = 1;
        for i in 0..n {
            for j in (i + 1)..n {
                let mut u = vec![0.0; n];
                let mut v = vec![0.0; n];
                u[i] = 1.0;
                v[j] = 1.0;
                consider(offset, u, v);
                offset += 1;
            }
        }
        Ok((worst_raw.expect("at least one pair"), worst_scaled.expect("at least one pair")))
    };

    let results: Vec<Result<(Evaluated, Evaluated)>> =
        with_workers(config.workers, || (0..config.n_samples).into_par_iter().map(evaluate).collect());

    let mut worst_raw: Option<Evaluated> = None;
    let mut worst_scaled: Option<Evaluated> = None;
    for r in results {
        let (raw, scaled) = r?;
        if worst_raw.as_ref().is_none_or(|w| better(&raw, w, |e| e.margin)) {
            worst_raw = Some(raw);
        }
        if worst_scaled.as_ref().is_none_or(|w| better(&scaled, w, |e| e.scaled)) {
            worst_scaled = Some(scaled);
        }
    }
    let worst_raw = worst_raw.expect("n_samples >= 1");
    let worst_scaled = worst_scaled.expect("n_samples >= 1");
    Ok(CurvatureReport {
        chart: chart.name().to_string(),
        k,
        seed: config.seed,
        samples: config.n_samples * per_point,
        tolerance: config.tol,
        min_margin: worst_raw.margin,
        witness: Some(worst_raw.pair),
        min_scaled_margin: worst_scaled.scaled,
        passed: worst_scaled.scaled >= -config.tol,
    })
}
