//! The metric `(X, Y) = (1+t) B(X1, Y1) + B(X2, Y2)` on `g/h0`, its curvature
//! quartic and the inequalities in `(t, k)` that certify `R >= k`.

use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::algebra::{int, parse_rational, AlgebraElement, Scalar};
use crate::error::{Error, Result};

/// Parameters `t > -1` and `k > 0`, held exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    t: BigRational,
    k: BigRational,
}

impl ModelParams {
    pub fn new(t: BigRational, k: BigRational) -> Result<Self> {
        if t <= -BigRational::one() {
            return Err(Error::ParameterDomain(format!("t must exceed -1, got {t}")));
        }
        if !k.is_positive() {
            return Err(Error::ParameterDomain(format!("k must be positive, got {k}")));
        }
        Ok(Self { t, k })
    }

    /// Uses the exact binary values of `t` and `k`.
    pub fn from_f64(t: f64, k: f64) -> Result<Self> {
        let conv = |v: f64, name: &str| {
            BigRational::from_float(v).ok_or_else(|| Error::ParameterDomain(format!("{name} must be finite, got {v}")))
        };
        Self::new(conv(t, "t")?, conv(k, "k")?)
    }

    /// Parses decimal or `p/q` strings exactly, so `"-0.8"` is `-4/5`.
    pub fn parse(t: &str, k: &str) -> Result<Self> {
        Self::new(parse_rational(t)?, parse_rational(k)?)
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    pub fn k(&self) -> &BigRational {
        &self.k
    }

    pub fn t_f64(&self) -> f64 {
        self.t.to_f64().unwrap_or(f64::NAN)
    }

    pub fn k_f64(&self) -> f64 {
        self.k.to_f64().unwrap_or(f64::NAN)
    }
}

fn half<T: Scalar>() -> T {
    T::one() / int(2)
}

/// `(X, Y) = (1+t) B(X1, Y1) + B(X2, Y2)`; the `e1` coordinate is ignored.
pub fn metric_t<T: Scalar>(x: &AlgebraElement<T>, y: &AlgebraElement<T>, t: &T) -> T {
    (T::one() + t.clone()) * x.project(1).form_b(&y.project(1)) + x.project(2).form_b(&y.project(2))
}

/// The `t`-independent ingredients of the curvature quartic and the Gram
/// determinant for one pair `(X, Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarticTerms<T> {
    /// `B([X1,Y1], [X1,Y1])`.
    pub p2: T,
    /// `B([X2,Y2]_1, [X2,Y2]_1)`.
    pub q2: T,
    /// `B([X1,Y1], [X2,Y2]_1)`.
    pub pq: T,
    /// `B([X,Y]_2, [X,Y]_2)`.
    pub w: T,
    /// `B([X,Y]_0, [X,Y]_0)`.
    pub v: T,
    pub x2: T,
    pub y2: T,
    pub z2: T,
}

/// `det [[a_i, c_i], [b_j, d_j]] = a_i d_j - c_i b_j` for `i` in `2..=4`, `j` in `1..=4`.
fn mixed_det<T: Scalar>(x: &AlgebraElement<T>, y: &AlgebraElement<T>, i: usize, j: usize) -> T {
    let (a, c) = (&x.coords()[i - 1], &y.coords()[i - 1]);
    let (b, d) = (&x.coords()[j + 3], &y.coords()[j + 3]);
    a.clone() * d.clone() - c.clone() * b.clone()
}

fn sum_sq_minors<T: Scalar>(x: &AlgebraElement<T>, y: &AlgebraElement<T>, range: std::ops::Range<usize>) -> T {
    let mut acc = T::zero();
    for i in range.clone() {
        for j in (i + 1)..range.end {
            let d = x.coords()[i].clone() * y.coords()[j].clone() - x.coords()[j].clone() * y.coords()[i].clone();
            acc = acc + d.clone() * d;
        }
    }
    acc
}

impl<T: Scalar> QuarticTerms<T> {
    pub fn new(x: &AlgebraElement<T>, y: &AlgebraElement<T>) -> Result<Self> {
        x.ensure_tangent()?;
        y.ensure_tangent()?;
        let (x1, y1, x2, y2) = (x.project(1), y.project(1), x.project(2), y.project(2));
        let p = x1.bracket(&y1);
        let q = x2.bracket(&y2).project(1);
        let c = x.bracket(y);
        let (c0, c2) = (c.project(0), c.project(2));
        let mut z2 = T::zero();
        for i in 2..=4 {
            for j in 1..=4 {
                let d = mixed_det(x, y, i, j);
                z2 = z2 + d.clone() * d;
            }
        }
        Ok(Self {
            p2: p.form_b(&p),
            q2: q.form_b(&q),
            pq: p.form_b(&q),
            w: c2.form_b(&c2),
            v: c0.form_b(&c0),
            x2: sum_sq_minors(x, y, 1..4),
            y2: sum_sq_minors(x, y, 4..8),
            z2,
        })
    }

    /// `(R(X,Y)Y, X)` in the form
    /// `(1+t)/4 P² + (1-3t)/4 Q² + (1-t-2t²)/2 PQ + (1+t)²/4 W + V`.
    pub fn quartic(&self, t: &T) -> T {
        let one = T::one();
        let quarter = one.clone() / int(4);
        let s = one.clone() + t.clone();
        s.clone() * quarter.clone() * self.p2.clone()
            + (one.clone() - int::<T>(3) * t.clone()) * quarter.clone() * self.q2.clone()
            + (one - t.clone() - int::<T>(2) * t.clone() * t.clone()) * half::<T>() * self.pq.clone()
            + s.clone() * s * quarter * self.w.clone()
            + self.v.clone()
    }

    /// `4(1+t)² x² + 4y² - 4(1+t) z²`.
    pub fn gram(&self, t: &T) -> T {
        let s = T::one() + t.clone();
        let four = int::<T>(4);
        four.clone() * s.clone() * s.clone() * self.x2.clone() + four.clone() * self.y2.clone()
            - four * s * self.z2.clone()
    }

    pub fn margin(&self, t: &T, k: &T) -> T {
        self.quartic(t) - k.clone() * self.gram(t)
    }
}

/// `(R(X,Y)Y, X)` for `X, Y` in `h1 + h2`.
pub fn curvature_quartic<T: Scalar>(x: &AlgebraElement<T>, y: &AlgebraElement<T>, t: &T) -> Result<T> {
    Ok(QuarticTerms::new(x, y)?.quartic(t))
}

/// The same curvature in its other displayed form,
/// `(1-3t)/4 B([X,Y]_1,[X,Y]_1) + (t-t²) B([X1,Y1],[X,Y]) + t² B([X1,Y1],[X1,Y1])
///  + (1+t)²/4 B([X,Y]_2,[X,Y]_2) + B([X,Y]_0,[X,Y]_0)`.
pub fn curvature_quartic_expanded<T: Scalar>(x: &AlgebraElement<T>, y: &AlgebraElement<T>, t: &T) -> Result<T> {
    x.ensure_tangent()?;
    y.ensure_tangent()?;
    let c = x.bracket(y);
    let (c0, c1, c2) = (c.project(0), c.project(1), c.project(2));
    let p = x.project(1).bracket(&y.project(1));
    let one = T::one();
    let quarter = one.clone() / int(4);
    let s = one.clone() + t.clone();
    Ok((one - int::<T>(3) * t.clone()) * quarter.clone() * c1.form_b(&c1)
        + (t.clone() - t.clone() * t.clone()) * p.form_b(&c)
        + t.clone() * t.clone() * p.form_b(&p)
        + s.clone() * s * quarter * c2.form_b(&c2)
        + c0.form_b(&c0))
}

/// Square roots of the sums of squared `2x2` minors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Xyz {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// `(x, y, z)` and the Gram determinant `(X,X)(Y,Y) - (X,Y)²` computed as
/// `4(1+t)² x² + 4y² - 4(1+t) z²`.
pub fn xyz_and_gram<T: Scalar + ToPrimitive>(x: &AlgebraElement<T>, y: &AlgebraElement<T>, t: &T) -> Result<(Xyz, T)> {
    let terms = QuarticTerms::new(x, y)?;
    let root = |v: &T| v.to_f64().unwrap_or(f64::NAN).sqrt();
    Ok((Xyz { x: root(&terms.x2), y: root(&terms.y2), z: root(&terms.z2) }, terms.gram(t)))
}

/// `(X,X)(Y,Y) - (X,Y)²` directly from [`metric_t`].
pub fn gram_direct<T: Scalar>(x: &AlgebraElement<T>, y: &AlgebraElement<T>, t: &T) -> T {
    let xy = metric_t(x, y, t);
    metric_t(x, x, t) * metric_t(y, y, t) - xy.clone() * xy
}

/// Residual of `B([X,Y]_2, [X,Y]_2) = -2 Σ_{i,j} det² + B([X1,Y1], [X2,Y2]_1)`.
pub fn det_identity_check<T: Scalar>(x: &AlgebraElement<T>, y: &AlgebraElement<T>) -> Result<T> {
    let terms = QuarticTerms::new(x, y)?;
    Ok(terms.w - (terms.pq - int::<T>(2) * terms.z2))
}

/// Residual of `B([X,Y]_2, [X,Y]_2) = -2 (S1² + S2² + S3² + S4²)`, the
/// four-square expansion in the minors `D(i,j) = a_i d_j - c_i b_j`.
pub fn det_four_squares_check<T: Scalar>(x: &AlgebraElement<T>, y: &AlgebraElement<T>) -> Result<T> {
    let terms = QuarticTerms::new(x, y)?;
    let d = |i, j| mixed_det(x, y, i, j);
    let s = [
        d(3, 2) - d(2, 3) - d(4, 4),
        d(2, 4) - d(3, 1) - d(4, 3),
        d(2, 1) + d(3, 4) + d(4, 2),
        d(2, 2) + d(3, 3) - d(4, 1),
    ];
    let sum = s.into_iter().fold(T::zero(), |acc, v| acc + v.clone() * v);
    Ok(terms.w + int::<T>(2) * sum)
}

/// `{2(1+t) - 4k(1+t)²} x² - 3|1-t²| xy + {(1-3t)/2 - 4k} y² + {4k(1+t) - (1+t)²/2} z²`,
/// a lower bound for `(R(X,Y)Y,X) - k((X,X)(Y,Y) - (X,Y)²)`.
pub fn lower_bound(xyz: &Xyz, t: f64, k: f64) -> f64 {
    let s = 1.0 + t;
    let Xyz { x, y, z } = *xyz;
    (2.0 * s - 4.0 * k * s * s) * x * x - 3.0 * (1.0 - t * t).abs() * x * y
        + ((1.0 - 3.0 * t) / 2.0 - 4.0 * k) * y * y
        + (4.0 * k * s - s * s / 2.0) * z * z
}

/// `η(t) = (-3t² - 2t + 5 - sqrt(45t⁴ + 12t³ - 50t² + 12t + 45)) / (16(t+1))`,
/// the smaller root in `k` of the left side of the fourth inequality.
pub fn eta(t: f64) -> Result<f64> {
    if !(t > -1.0) || !t.is_finite() {
        return Err(Error::ParameterDomain(format!("eta needs t > -1, got {t}")));
    }
    let disc = (((45.0 * t + 12.0) * t - 50.0) * t + 12.0) * t + 45.0;
    if disc < 0.0 {
        return Err(Error::ParameterDomain(format!("eta discriminant is negative at t = {t}")));
    }
    Ok((-3.0 * t * t - 2.0 * t + 5.0 - disc.sqrt()) / (16.0 * (t + 1.0)))
}

/// Left side of the fourth inequality,
/// `{2(1+t) - 4k(1+t)²}((1-3t)/2 - 4k) - 9/4 (1-t²)²`.
pub fn ineq4_lhs<T: Scalar>(t: &T, k: &T) -> T {
    let one = T::one();
    let s = one.clone() + t.clone();
    let four = int::<T>(4);
    let a = int::<T>(2) * s.clone() - four.clone() * k.clone() * s.clone() * s;
    let b = (one.clone() - int::<T>(3) * t.clone()) * half::<T>() - four.clone() * k.clone();
    let u = one - t.clone() * t.clone();
    a * b - int::<T>(9) / four * u.clone() * u
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Feasibility {
    /// The strict inequalities `k > (1+t)/8`, `k < 1/(2(1+t))`, `k < (1-3t)/8`
    /// and the fourth, product inequality.
    pub ineq: [bool; 4],
    pub feasible: bool,
}

/// Evaluates the four strict inequalities at `(t, k)`. With rational
/// scalars the comparison is exact. Requires `t > -1`.
pub fn feasibility_of<T: Scalar + PartialOrd>(t: &T, k: &T) -> Feasibility {
    let one = T::one();
    let eight = int::<T>(8);
    let s = one.clone() + t.clone();
    let ineq = [
        *k > s.clone() / eight.clone(),
        k.clone() * int::<T>(2) * s < one.clone(),
        *k < (one - int::<T>(3) * t.clone()) / eight,
        ineq4_lhs(t, k) > T::zero(),
    ];
    Feasibility { ineq, feasible: ineq.iter().all(|&b| b) }
}

pub fn feasible(params: &ModelParams) -> Feasibility {
    feasibility_of(params.t(), params.k())
}

pub(crate) fn rational(v: f64) -> BigRational {
    BigRational::from_f64(v).unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su21::algebra::Exact;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn tangent() -> impl Strategy<Value = Exact> {
        prop::array::uniform7((-9i64..=9, 1i64..=4)).prop_map(|c| {
            let mut coords: [BigRational; 8] = std::array::from_fn(|_| q(0, 1));
            for (i, (p, d)) in c.into_iter().enumerate() {
                coords[i + 1] = q(p, d);
            }
            Exact::new(coords)
        })
    }

    #[test]
    fn params_domain() {
        assert!(ModelParams::parse("-1", "0.1").is_err());
        assert!(ModelParams::parse("-0.8", "0").is_err());
        let p = ModelParams::parse("-0.8", "0.1").unwrap();
        assert_eq!(p.t(), &q(-4, 5));
        assert!(ModelParams::from_f64(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn metric_examples() {
        let t = q(-1, 2);
        assert_eq!(metric_t(&Exact::e(2), &Exact::e(2), &t), q(1, 1));
        assert_eq!(metric_t(&Exact::f(1), &Exact::f(1), &t), q(-2, 1));
        assert_eq!(metric_t(&Exact::e(2), &Exact::f(1), &t), q(0, 1));
        assert_eq!(metric_t(&Exact::e(1), &Exact::e(1), &t), q(0, 1));
    }

    #[test]
    fn quartic_examples() {
        let t = q(-4, 5);
        let one = q(1, 1);
        let ff = curvature_quartic(&Exact::f(1), &Exact::f(2), &t).unwrap();
        assert_eq!(ff, (one.clone() - q(3, 1) * t.clone()) / q(2, 1));
        let ee = curvature_quartic(&Exact::e(2), &Exact::e(3), &t).unwrap();
        assert_eq!(ee, q(2, 1) * (one + t.clone()));
        assert!(curvature_quartic(&Exact::f(2), &Exact::f(2), &t).unwrap().is_zero());
        assert_eq!(curvature_quartic(&Exact::e(1), &Exact::f(2), &t), Err(Error::NonTangent));
    }

    #[test]
    fn xyz_examples() {
        let t = q(-4, 5);
        let (xyz, gram) = xyz_and_gram(&Exact::f(1), &Exact::f(2), &t).unwrap();
        assert_eq!(xyz, Xyz { x: 0.0, y: 1.0, z: 0.0 });
        assert_eq!(gram, q(4, 1));
        let (xyz, gram) = xyz_and_gram(&Exact::e(2), &Exact::e(3), &t).unwrap();
        assert_eq!(xyz, Xyz { x: 1.0, y: 0.0, z: 0.0 });
        assert_eq!(gram, q(4, 1) * q(1, 5) * q(1, 5));
    }

    #[test]
    fn remarked_norms() {
        // B([X1,Y1],[X1,Y1]) = 8x², B([X2,Y2]_1,[X2,Y2]_1) = 2y²
        let x: Exact = "0,1,2,-1,3,1/2,0,1".parse().unwrap();
        let y: Exact = "0,-2,1,1/3,1,-1,2,0".parse().unwrap();
        let terms = QuarticTerms::new(&x, &y).unwrap();
        assert_eq!(terms.p2, q(8, 1) * terms.x2.clone());
        assert_eq!(terms.q2, q(2, 1) * terms.y2.clone());
    }

    #[test]
    fn eta_values() {
        assert!((eta(-0.8).unwrap() - 0.2247475005074722).abs() < 1e-14);
        assert!((eta(-0.8).unwrap() - 0.22466).abs() < 1e-4);
        assert!((eta(0.0).unwrap() - (5.0 - 45f64.sqrt()) / 16.0).abs() < 1e-15);
        assert!((eta(-0.6).unwrap() - 0.05).abs() < 1e-15);
        for t in [-0.9, -0.8, -0.7] {
            assert!((1.0 + t) / 8.0 < eta(t).unwrap());
        }
        assert!((1.0 - 0.5) / 8.0 >= eta(-0.5).unwrap());
        assert!(eta(-1.0).is_err());
    }

    #[test]
    fn eta_is_a_root_of_ineq4() {
        for i in 0..=90 {
            let t = -0.99 + 0.01 * i as f64;
            let k = eta(t).unwrap();
            let scale = 1f64.max(((1.0 - t * t) * (1.0 - t * t) * 2.25).abs());
            assert!(ineq4_lhs(&t, &k).abs() <= 1e-9 * scale, "t={t}");
        }
    }

    #[test]
    fn feasibility_examples() {
        let f = feasible(&ModelParams::parse("-0.8", "0.1").unwrap());
        assert_eq!(f.ineq, [true; 4]);
        assert!(f.feasible);
        let f = feasible(&ModelParams::parse("-0.5", "0.2").unwrap());
        assert!(!f.ineq[3] && !f.feasible);
        let f = feasible(&ModelParams::parse("-0.8", "0.5").unwrap());
        assert!(!f.ineq[2]);
        // boundary k = (1+t)/8 is infeasible
        let f = feasible(&ModelParams::parse("-0.8", "0.025").unwrap());
        assert!(!f.ineq[0]);
    }

    #[test]
    fn witness_margin_at_infeasible_cell() {
        let (t, k) = (q(-4, 5), q(1, 2));
        let terms = QuarticTerms::new(&Exact::f(1), &Exact::f(2)).unwrap();
        assert_eq!(terms.margin(&t, &k), q(-3, 10));
    }

    proptest! {
        #[test]
        fn determinant_identities_hold_exactly(x in tangent(), y in tangent()) {
            prop_assert!(det_identity_check(&x, &y).unwrap().is_zero());
            prop_assert!(det_four_squares_check(&x, &y).unwrap().is_zero());
        }

        #[test]
        fn gram_formula_matches_metric(x in tangent(), y in tangent(), tn in -9i64..20) {
            let t = q(tn, 10);
            let (_, gram) = xyz_and_gram(&x, &y, &t).unwrap();
            prop_assert_eq!(gram, gram_direct(&x, &y, &t));
        }

        #[test]
        fn quartic_forms_agree(x in tangent(), y in tangent(), tn in -9i64..20) {
            let t = q(tn, 10);
            prop_assert_eq!(curvature_quartic(&x, &y, &t).unwrap(), curvature_quartic_expanded(&x, &y, &t).unwrap());
        }

        #[test]
        fn margin_dominates_lower_bound(x in tangent(), y in tangent()) {
            let (t, k) = (-0.8, 0.1);
            let (xf, yf) = (x.to_f64(), y.to_f64());
            let terms = QuarticTerms::new(&xf, &yf).unwrap();
            let margin = terms.margin(&t, &k);
            let (xyz, _) = xyz_and_gram(&xf, &yf, &t).unwrap();
            let lb = lower_bound(&xyz, t, k);
            let scale = 1f64.max(margin.abs()).max(lb.abs());
            prop_assert!(margin - lb >= -1e-9 * scale);
            prop_assert!(lb >= -1e-9 * scale);
        }
    }
}
