//! Scans of the `(t, k)` plane and sampled curvature margins.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::algebra::AlgebraElement;
use super::model::{feasibility_of, lower_bound, rational, xyz_and_gram, ModelParams, QuarticTerms};
use crate::chart::certify::{sample_rng, with_workers};
use crate::error::{Error, Result};

/// A random tangent pair with `a1 = 0` and the other coordinates i.i.d.
/// standard normal.
pub fn random_tangent_pair<R: Rng>(rng: &mut R) -> (AlgebraElement<f64>, AlgebraElement<f64>) {
    let mut draw = || {
        let mut c = [0.0; 8];
        for v in c.iter_mut().skip(1) {
            *v = rng.sample(StandardNormal);
        }
        AlgebraElement::new(c)
    };
    let x = draw();
    let y = draw();
    (x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleConfig {
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { samples: 1000, seed: 0, workers: 1 }
    }
}

fn sample_terms(config: &SampleConfig) -> Vec<(QuarticTerms<f64>, AlgebraElement<f64>, AlgebraElement<f64>)> {
    with_workers(config.workers, || {
        (0..config.samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample_rng(config.seed, i as u64);
                let (x, y) = random_tangent_pair(&mut rng);
                let terms = QuarticTerms::new(&x, &y).expect("sampled pairs are tangent");
                (terms, x, y)
            })
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginReport {
    pub t: f64,
    pub k: f64,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Minimum of `(R(X,Y)Y,X) - k((X,X)(Y,Y) - (X,Y)²)` over the sample.
    pub min_margin: f64,
    /// Minimum of the margin divided by `max(1, |quartic|, |k gram|)`.
    pub min_scaled_margin: f64,
    /// The pair attaining `min_margin`, as `a1,...,b4` strings.
    pub witness: Option<(String, String)>,
    /// Minimum of `(margin - lower bound) / scale`; nonnegative when the
    /// quadratic lower bound holds.
    pub min_lower_bound_gap: f64,
    pub passed: bool,
}

/// Samples `(R(X,Y)Y,X) - k((X,X)(Y,Y) - (X,Y)²)` on random tangent pairs.
/// Passes iff every scaled margin is at least `-tol`.
pub fn sampled_margin(params: &ModelParams, config: &SampleConfig, tol: f64) -> Result<MarginReport> {
    if config.samples == 0 {
        return Err(Error::EmptySample);
    }
    let (t, k) = (params.t_f64(), params.k_f64());
    let terms = sample_terms(config);
    let mut min_margin = f64::INFINITY;
    let mut min_scaled = f64::INFINITY;
    let mut min_gap = f64::INFINITY;
    let mut witness = None;
    for (terms, x, y) in &terms {
        let quartic = terms.quartic(&t);
        let kg = k * terms.gram(&t);
        let margin = quartic - kg;
        let scale = 1f64.max(quartic.abs()).max(kg.abs());
        if margin < min_margin {
            min_margin = margin;
            witness = Some((x.to_string(), y.to_string()));
        }
        min_scaled = min_scaled.min(margin / scale);
        let (xyz, _) = xyz_and_gram(x, y, &t)?;
        min_gap = min_gap.min((margin - lower_bound(&xyz, t, k)) / scale);
    }
    Ok(MarginReport {
        t,
        k,
        samples: config.samples,
        seed: config.seed,
        tolerance: tol,
        min_margin,
        min_scaled_margin: min_scaled,
        witness,
        min_lower_bound_gap: min_gap,
        passed: min_scaled >= -tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityCell {
    pub t: f64,
    pub k: f64,
    pub ineq: [bool; 4],
    pub feasible: bool,
    pub min_margin: Option<f64>,
}

/// The feasible `k`-interval of one `t` row, endpoints located by bisection
/// on the exact predicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowInterval {
    pub t: f64,
    pub k_lower: f64,
    pub k_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityGrid {
    pub t_values: Vec<f64>,
    pub k_values: Vec<f64>,
    /// Row-major: all `k` for the first `t`, then the next `t`.
    pub cells: Vec<FeasibilityCell>,
    pub rows: Vec<RowInterval>,
}

impl FeasibilityGrid {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,k,ineq1,ineq2,ineq3,ineq4,feasible,min_margin\n");
        for c in &self.cells {
            let m = c.min_margin.map(|m| format!("{m:e}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                c.t, c.k, c.ineq[0], c.ineq[1], c.ineq[2], c.ineq[3], c.feasible, m
            ));
        }
        out
    }

    /// Smallest and largest `t` with at least one feasible cell.
    pub fn feasible_t_range(&self) -> Option<(f64, f64)> {
        let ts = self.cells.iter().filter(|c| c.feasible).map(|c| c.t);
        ts.fold(None, |acc, t| match acc {
            None => Some((t, t)),
            Some((lo, hi)) => Some((lo.min(t), hi.max(t))),
        })
    }
}

/// `start, start + step, ...` up to and including `stop`, in exact arithmetic.
pub fn grid_axis(start: &BigRational, stop: &BigRational, step: &BigRational) -> Result<Vec<BigRational>> {
    if !step.is_positive() {
        return Err(Error::InvalidConfig(format!("grid step must be positive, got {step}")));
    }
    let mut out = Vec::new();
    let mut v = start.clone();
    while &v <= stop {
        out.push(v.clone());
        v += step;
    }
    if out.is_empty() {
        return Err(Error::InvalidConfig(format!("empty grid from {start} to {stop}")));
    }
    Ok(out)
}

fn feasible_exact(t: &BigRational, k: f64) -> bool {
    k > 0.0 && feasibility_of(t, &rational(k)).feasible
}

/// Bisects between an infeasible and a feasible `k` until the bracket is
/// as tight as `f64` allows.
fn bisect(t: &BigRational, mut bad: f64, mut good: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (bad + good);
        if mid == bad || mid == good {
            break;
        }
        if feasible_exact(t, mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

fn row_interval(t: &BigRational, ks: &[f64], feasible: &[bool]) -> Option<RowInterval> {
    let first = feasible.iter().position(|&f| f)?;
    let last = feasible.iter().rposition(|&f| f)?;
    let lower_bad = if first == 0 { 0.0 } else { ks[first - 1] };
    let k_lower = bisect(t, lower_bad, ks[first]);
    let mut upper_bad = ks.get(last + 1).copied().unwrap_or(ks[last] * 2.0);
    while feasible_exact(t, upper_bad) {
        upper_bad *= 2.0;
    }
    let k_upper = bisect(t, upper_bad, ks[last]);
    Some(RowInterval { t: t.to_f64().unwrap_or(f64::NAN), k_lower, k_upper })
}

/// Evaluates the four inequalities on the grid `t_grid x k_grid` (exactly),
/// and with `config.samples > 0` the sampled minimum curvature margin per
/// cell. The same sample of pairs is used for every cell.
pub fn scan_region(t_grid: &[BigRational], k_grid: &[BigRational], config: &SampleConfig) -> Result<FeasibilityGrid> {
    if t_grid.is_empty() || k_grid.is_empty() {
        return Err(Error::InvalidConfig("scan grid is empty".into()));
    }
    let minus_one = -BigRational::from_integer(1.into());
    if let Some(t) = t_grid.iter().find(|t| **t <= minus_one) {
        return Err(Error::ParameterDomain(format!("t must exceed -1, got {t}")));
    }
    if let Some(k) = k_grid.iter().find(|k| !k.is_positive()) {
        return Err(Error::ParameterDomain(format!("k must be positive, got {k}")));
    }
    let to_f = |v: &BigRational| v.to_f64().unwrap_or(f64::NAN);
    let t_values: Vec<f64> = t_grid.iter().map(to_f).collect();
    let k_values: Vec<f64> = k_grid.iter().map(to_f).collect();
    let samples = if config.samples > 0 { sample_terms(config) } else { Vec::new() };

    let cells: Vec<FeasibilityCell> = with_workers(config.workers, || {
        (0..t_grid.len() * k_grid.len())
            .into_par_iter()
            .map(|idx| {
                let (ti, ki) = (idx / k_grid.len(), idx % k_grid.len());
                let f = feasibility_of(&t_grid[ti], &k_grid[ki]);
                let (t, k) = (t_values[ti], k_values[ki]);
                let min_margin = (!samples.is_empty())
                    .then(|| samples.iter().map(|(terms, _, _)| terms.margin(&t, &k)).fold(f64::INFINITY, f64::min));
                FeasibilityCell { t, k, ineq: f.ineq, feasible: f.feasible, min_margin }
            })
            .collect()
    });

    let rows = t_grid
        .iter()
        .enumerate()
        .filter_map(|(ti, t)| {
            let flags: Vec<bool> = cells[ti * k_grid.len()..(ti + 1) * k_grid.len()].iter().map(|c| c.feasible).collect();
            row_interval(t, &k_values, &flags)
        })
        .collect();
    Ok(FeasibilityGrid { t_values, k_values, cells, rows })
}

/// `true` iff the exact predicate holds at this `t` for some `k > 0`; used
/// for sanity checks of scans.
pub fn has_feasible_k(t: &BigRational) -> bool {
    let tf = t.to_f64().unwrap_or(f64::NAN);
    if tf <= -1.0 {
        return false;
    }
    let lo = (1.0 + tf) / 8.0;
    match super::model::eta(tf) {
        Ok(eta) if eta > lo => feasible_exact(t, 0.5 * (lo + eta)),
        _ => false,
    }
}
