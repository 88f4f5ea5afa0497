//! Exact checks of the algebraic facts the curvature computation rests on:
//! bracket containments between the blocks `h0, h1, h2`, the Jacobi identity,
//! `Ad`-invariance of `B`, and the determinant expansion of
//! `B([X,Y]_2, [X,Y]_2)` on random rational pairs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::algebra::{AlgebraElement, Exact};
use super::model::{curvature_quartic, curvature_quartic_expanded, det_four_squares_check, det_identity_check};
use crate::chart::certify::{sample_rng, with_workers};
use crate::error::Result;

/// Block index of basis vector `i`: 0 for `e1`, 1 for `e2..e4`, 2 for `f1..f4`.
pub fn block_of(i: usize) -> usize {
    match i {
        0 => 0,
        1..=3 => 1,
        _ => 2,
    }
}

/// Blocks allowed to contain `[h_a, h_b]`.
///
/// `[h1,h1] ⊂ h1`, `[h1,h2] ⊂ h2` and `[h2,h2] ⊂ h0 + h1`; `h0` spans the
/// centre of `h0 + h1` and brackets `h_b` into itself.
pub fn allowed_blocks(a: usize, b: usize) -> &'static [usize] {
    match (a.min(b), a.max(b)) {
        (0, 0) => &[],
        (0, 1) | (1, 1) => &[1],
        (0, 2) | (1, 2) => &[2],
        (2, 2) => &[0, 1],
        _ => unreachable!("blocks are 0, 1, 2"),
    }
}

fn basis_name(i: usize) -> String {
    if i < 4 {
        format!("e{}", i + 1)
    } else {
        format!("f{}", i - 3)
    }
}

fn block_support(x: &Exact) -> Vec<usize> {
    let mut out: Vec<usize> = (0..8).filter(|&i| !x.coords()[i].is_zero()).map(block_of).collect();
    out.dedup();
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentCheck {
    pub left: String,
    pub right: String,
    pub bracket: String,
    pub allowed_blocks: Vec<usize>,
    pub holds: bool,
    /// The structure-constant bracket equals the matrix commutator.
    pub matches_matrix: bool,
}

/// All 36 unordered basis pairs `(i <= j)`.
pub fn bracket_containments() -> Result<Vec<ContainmentCheck>> {
    let mut out = Vec::with_capacity(36);
    for i in 0..8 {
        for j in i..8 {
            let (x, y) = (Exact::basis(i), Exact::basis(j));
            let c = x.bracket(&y);
            let allowed = allowed_blocks(block_of(i), block_of(j));
            let holds = block_support(&c).iter().all(|b| allowed.contains(b));
            let matches_matrix = x.matrix_bracket(&y)? == c;
            out.push(ContainmentCheck {
                left: basis_name(i),
                right: basis_name(j),
                bracket: c.to_string(),
                allowed_blocks: allowed.to_vec(),
                holds,
                matches_matrix,
            });
        }
    }
    Ok(out)
}

/// Basis triples `(i, j, k)` where `[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] != 0`.
pub fn jacobi_failures() -> Vec<(usize, usize, usize)> {
    triples()
        .filter(|&(i, j, k)| {
            let (x, y, z) = (Exact::basis(i), Exact::basis(j), Exact::basis(k));
            let s = x.bracket(&y.bracket(&z)) + y.bracket(&z.bracket(&x)) + z.bracket(&x.bracket(&y));
            !s.is_zero()
        })
        .collect()
}

/// Basis triples `(z, x, y)` where `B([Z,X],Y) + B(X,[Z,Y]) != 0`.
pub fn ad_invariance_failures() -> Vec<(usize, usize, usize)> {
    triples()
        .filter(|&(i, j, k)| {
            let (z, x, y) = (Exact::basis(i), Exact::basis(j), Exact::basis(k));
            !(z.bracket(&x).form_b(&y) + x.form_b(&z.bracket(&y))).is_zero()
        })
        .collect()
}

fn triples() -> impl Iterator<Item = (usize, usize, usize)> {
    (0..8).flat_map(|i| (0..8).flat_map(move |j| (0..8).map(move |k| (i, j, k))))
}

/// Tangent element (zero `e1` coordinate) with coordinates `p/q`,
/// `|p| <= 20`, `1 <= q <= 12`, about one in five set to zero.
pub fn random_rational_tangent<R: Rng>(rng: &mut R) -> Exact {
    let mut coords: [BigRational; 8] = std::array::from_fn(|_| BigRational::zero());
    for c in coords.iter_mut().skip(1) {
        if rng.random_range(0..5) == 0 {
            continue;
        }
        let p: i64 = rng.random_range(-20..=20);
        let q: i64 = rng.random_range(1..=12);
        *c = BigRational::new(BigInt::from(p), BigInt::from(q));
    }
    AlgebraElement::new(coords)
}

#[derive(Debug, Clone, Serialize)]
pub struct RationalPairFailure {
    pub index: usize,
    pub x: String,
    pub y: String,
    pub det_residual: String,
    pub four_squares_residual: String,
    pub quartic_forms_difference: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeterminantReport {
    pub pairs: usize,
    pub seed: u64,
    /// Rational `t` used for the comparison of the two quartic forms.
    pub t: String,
    pub failures: Vec<RationalPairFailure>,
    pub passed: bool,
}

/// Checks on `pairs` random rational tangent pairs that
/// `det_identity_check`, `det_four_squares_check` and the difference of the
/// two quartic forms all vanish exactly.
pub fn determinant_identity_random(pairs: usize, seed: u64, t: &BigRational, workers: usize) -> Result<DeterminantReport> {
    let results = with_workers(workers, || {
        (0..pairs)
            .into_par_iter()
            .map(|index| -> Result<Option<RationalPairFailure>> {
                let mut rng = sample_rng(seed, index as u64);
                let x = random_rational_tangent(&mut rng);
                let y = random_rational_tangent(&mut rng);
                let det = det_identity_check(&x, &y)?;
                let four = det_four_squares_check(&x, &y)?;
                let forms = curvature_quartic(&x, &y, t)? - curvature_quartic_expanded(&x, &y, t)?;
                if det.is_zero() && four.is_zero() && forms.is_zero() {
                    return Ok(None);
                }
                Ok(Some(RationalPairFailure {
                    index,
                    x: x.to_string(),
                    y: y.to_string(),
                    det_residual: det.to_string(),
                    four_squares_residual: four.to_string(),
                    quartic_forms_difference: forms.to_string(),
                }))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let failures: Vec<_> = results.into_iter().flatten().collect();
    let passed = failures.is_empty();
    Ok(DeterminantReport { pairs, seed, t: t.to_string(), failures, passed })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactSuite {
    pub containments: usize,
    pub containment_failures: Vec<ContainmentCheck>,
    pub jacobi_triples: usize,
    pub jacobi_failures: Vec<(usize, usize, usize)>,
    pub ad_invariance_triples: usize,
    pub ad_invariance_failures: Vec<(usize, usize, usize)>,
    pub determinant: DeterminantReport,
    pub passed: bool,
}

/// Runs every exact check; all residuals are rational and must be zero.
pub fn exact_suite(pairs: usize, seed: u64, t: &BigRational, workers: usize) -> Result<ExactSuite> {
    let checks = bracket_containments()?;
    let containments = checks.len();
    let containment_failures: Vec<_> = checks.into_iter().filter(|c| !(c.holds && c.matches_matrix)).collect();
    let jacobi = jacobi_failures();
    let ad = ad_invariance_failures();
    let determinant = determinant_identity_random(pairs, seed, t, workers)?;
    let passed = containment_failures.is_empty() && jacobi.is_empty() && ad.is_empty() && determinant.passed;
    Ok(ExactSuite {
        containments,
        containment_failures,
        jacobi_triples: 512,
        jacobi_failures: jacobi,
        ad_invariance_triples: 512,
        ad_invariance_failures: ad,
        determinant,
        passed,
    })
}
