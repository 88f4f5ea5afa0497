//! `su(2,1)` over the basis `e1..e4, f1..f4`.
//!
//! `h0 = span(e1)`, `h1 = span(e2, e3, e4)`, `h2 = span(f1, ..., f4)`.
//! Elements are generic over the scalar type so the same code runs in exact
//! rational arithmetic and in `f64`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Scalars usable as algebra coefficients.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Num + Neg<Output = Self> + FromPrimitive + Send + Sync {}

impl<T> Scalar for T where T: Clone + PartialEq + fmt::Debug + Num + Neg<Output = T> + FromPrimitive + Send + Sync {}

pub(crate) fn int<T: Scalar>(n: i64) -> T {
    T::from_i64(n).expect("small integers are representable")
}

pub type Mat3<T> = [[Complex<T>; 3]; 3];

/// Coordinates `(a1, a2, a3, a4, b1, b2, b3, b4)` against `e1..e4, f1..f4`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<T> {
    coords: [T; 8],
}

pub type Exact = AlgebraElement<BigRational>;

/// `B(e_i, e_i)` for the basis, which is `B`-orthogonal.
const FORM_B_DIAGONAL: [i64; 8] = [6, 2, 2, 2, -2, -2, -2, -2];

const NAMES: [&str; 8] = ["e1", "e2", "e3", "e4", "f1", "f2", "f3", "f4"];

impl<T: Scalar> AlgebraElement<T> {
    pub fn new(coords: [T; 8]) -> Self {
        Self { coords }
    }

    pub fn zero() -> Self {
        Self { coords: std::array::from_fn(|_| T::zero()) }
    }

    /// Basis vector by index `0..8` in the order `e1..e4, f1..f4`.
    pub fn basis(index: usize) -> Self {
        let mut x = Self::zero();
        x.coords[index] = T::one();
        x
    }

    /// `e_i` for `i` in `1..=4`.
    pub fn e(i: usize) -> Self {
        assert!((1..=4).contains(&i));
        Self::basis(i - 1)
    }

    /// `f_i` for `i` in `1..=4`.
    pub fn f(i: usize) -> Self {
        assert!((1..=4).contains(&i));
        Self::basis(i + 3)
    }

    pub fn coords(&self) -> &[T; 8] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// True when the `h0` (`e1`) coefficient vanishes, i.e. the element
    /// represents a tangent vector of `G/H`.
    pub fn is_tangent(&self) -> bool {
        self.coords[0].is_zero()
    }

    pub fn ensure_tangent(&self) -> Result<()> {
        if self.is_tangent() {
            Ok(())
        } else {
            Err(Error::NonTangent)
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self { coords: std::array::from_fn(|i| self.coords[i].clone() * c.clone()) }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> AlgebraElement<U> {
        AlgebraElement { coords: std::array::from_fn(|i| f(&self.coords[i])) }
    }

    /// Component in `h_j`, `j` in `{0, 1, 2}`.
    pub fn project(&self, j: usize) -> Self {
        let range = match j {
            0 => 0..1,
            1 => 1..4,
            2 => 4..8,
            _ => panic!("projection index must be 0, 1 or 2, got {j}"),
        };
        let mut x = Self::zero();
        for i in range {
            x.coords[i] = self.coords[i].clone();
        }
        x
    }

    /// The 3x3 complex matrix of the element.
    pub fn to_matrix(&self) -> Mat3<T> {
        let [a1, a2, a3, a4, b1, b2, b3, b4] = self.coords.clone();
        let z = T::zero;
        let c = |re: T, im: T| Complex::new(re, im);
        [
            [c(z(), a1.clone() + a2.clone()), c(a3.clone(), a4.clone()), c(b1.clone(), b3.clone())],
            [c(-a3, a4), c(z(), a1.clone() - a2), c(b2.clone(), b4.clone())],
            [c(b1, -b3), c(b2, -b4), c(z(), -(a1.clone() + a1))],
        ]
    }

    /// Inverse of [`Self::to_matrix`]. Fails unless the matrix lies exactly in
    /// the span of the basis.
    pub fn from_matrix(m: &Mat3<T>) -> Result<Self> {
        let two = int::<T>(2);
        let a1 = -m[2][2].im.clone() / two;
        let a2 = m[0][0].im.clone() - a1.clone();
        let x = Self::new([
            a1,
            a2,
            m[0][1].re.clone(),
            m[0][1].im.clone(),
            m[0][2].re.clone(),
            m[1][2].re.clone(),
            m[0][2].im.clone(),
            m[1][2].im.clone(),
        ]);
        if &x.to_matrix() == m {
            Ok(x)
        } else {
            Err(Error::BasisDecomposition(format!("{m:?}")))
        }
    }

    /// `[X, Y]` from the structure constants of the basis.
    pub fn bracket(&self, other: &Self) -> Self {
        let table = structure_constants();
        let mut out = Self::zero();
        for i in 0..8 {
            if self.coords[i].is_zero() {
                continue;
            }
            for j in 0..8 {
                if other.coords[j].is_zero() {
                    continue;
                }
                let xy = self.coords[i].clone() * other.coords[j].clone();
                for &(k, c) in &table[i][j] {
                    out.coords[k] = out.coords[k].clone() + xy.clone() * int::<T>(c);
                }
            }
        }
        out
    }

    /// `[X, Y]` as the matrix commutator `XY - YX`, re-expressed in the basis.
    pub fn matrix_bracket(&self, other: &Self) -> Result<Self> {
        let (x, y) = (self.to_matrix(), other.to_matrix());
        let xy = matmul(&x, &y);
        let yx = matmul(&y, &x);
        let m: Mat3<T> = std::array::from_fn(|i| std::array::from_fn(|j| xy[i][j].clone() - yx[i][j].clone()));
        Self::from_matrix(&m)
    }

    /// `B(X, Y) = -Re tr(XY)`, evaluated on coordinates.
    pub fn form_b(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for i in 0..8 {
            acc = acc + int::<T>(FORM_B_DIAGONAL[i]) * self.coords[i].clone() * other.coords[i].clone();
        }
        acc
    }

    /// `B(X, Y) = -Re tr(XY)` computed from the matrices.
    pub fn form_b_matrix(&self, other: &Self) -> T {
        let p = matmul(&self.to_matrix(), &other.to_matrix());
        -(p[0][0].re.clone() + p[1][1].re.clone() + p[2][2].re.clone())
    }
}

impl AlgebraElement<BigRational> {
    pub fn to_f64(&self) -> AlgebraElement<f64> {
        self.map(|c| c.to_f64().unwrap_or(f64::NAN))
    }
}

fn matmul<T: Scalar>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..3 {
                acc = acc + a[i][k].clone() * b[k][j].clone();
            }
            acc
        })
    })
}

type Table = [[Vec<(usize, i64)>; 8]; 8];

/// `[basis_i, basis_j] = Σ_k c_k basis_k`, from exact matrix commutators.
/// All structure constants of this basis are integers.
fn structure_constants() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let c = Exact::basis(i).matrix_bracket(&Exact::basis(j)).expect("basis commutators decompose");
                c.coords
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, v)| {
                        assert!(v.is_integer(), "non-integer structure constant");
                        (k, v.to_integer().to_i64().expect("small structure constant"))
                    })
                    .collect()
            })
        })
    })
}

impl<T: Scalar> Add for AlgebraElement<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { coords: std::array::from_fn(|i| self.coords[i].clone() + rhs.coords[i].clone()) }
    }
}

impl<T: Scalar> Sub for AlgebraElement<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { coords: std::array::from_fn(|i| self.coords[i].clone() - rhs.coords[i].clone()) }
    }
}

impl<T: Scalar> Neg for AlgebraElement<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|c| -c.clone())
    }
}

/// Human-readable form such as `e2 + 3/2*f1`.
pub fn pretty<T: Scalar + fmt::Display>(x: &AlgebraElement<T>) -> String {
    let terms: Vec<String> = x
        .coords
        .iter()
        .zip(NAMES)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, n)| if c.is_one() { n.to_string() } else { format!("{c}*{n}") })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Comma-separated coordinates `a1,a2,a3,a4,b1,b2,b3,b4`.
impl<T: fmt::Display> fmt::Display for AlgebraElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for AlgebraElement<BigRational> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 8 {
            return Err(Error::DimensionMismatch { expected: 8, got: parts.len() });
        }
        let mut coords: [BigRational; 8] = std::array::from_fn(|_| BigRational::zero());
        for (c, p) in coords.iter_mut().zip(parts) {
            *c = parse_rational(p)?;
        }
        Ok(Self::new(coords))
    }
}

/// Parses `p/q`, an integer, or a decimal such as `-0.8` or `1.5e-3`, exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidConfig(format!("not a rational number: `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(all);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}
