//! Space specification strings.
//!
//! ```text
//! space  := atom | "product:" atom "*" atom | "warped:" atom "*" atom ":alpha=" expr
//! atom   := hyperbolic(l) | sphere(m) | torus(m) | flat_torus(m) | euclidean(n) | minkowski(p,q)
//! expr   := busemann | sqrtk*busemann | NUM*busemann | NUM
//! ```

use std::fmt;
use std::str::FromStr;

use super::warped::{WarpFunction, WarpedProductSpec};
use crate::chart::ChartMetric;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaExpr {
    Constant(f64),
    /// `c * busemann`.
    Busemann(f64),
    /// `sqrt(k) * busemann`, resolved against the curvature bound `k`.
    SqrtKBusemann,
}

impl AlphaExpr {
    pub fn resolve(&self, k: Option<f64>) -> Result<WarpFunction> {
        Ok(match *self {
            Self::Constant(c) if c == 0.0 => WarpFunction::Zero,
            Self::Constant(c) => WarpFunction::Constant(c),
            Self::Busemann(scale) => WarpFunction::Busemann { scale },
            Self::SqrtKBusemann => {
                let k = k.ok_or_else(|| Error::InvalidConfig("alpha=sqrtk*busemann needs a value of k".into()))?;
                if !(k >= 0.0) {
                    return Err(Error::ParameterDomain(format!("sqrtk needs k >= 0, got {k}")));
                }
                WarpFunction::Busemann { scale: k.sqrt() }
            }
        })
    }
}

impl fmt::Display for AlphaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "{c}"),
            Self::Busemann(c) if *c == 1.0 => write!(f, "busemann"),
            Self::Busemann(c) => write!(f, "{c}*busemann"),
            Self::SqrtKBusemann => write!(f, "sqrtk*busemann"),
        }
    }
}

impl FromStr for AlphaExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnsupportedSpace(format!("bad alpha expression `{s}`"));
        if s == "busemann" {
            return Ok(Self::Busemann(1.0));
        }
        if let Some(coef) = s.strip_suffix("*busemann") {
            let coef = coef.trim();
            if coef == "sqrtk" {
                return Ok(Self::SqrtKBusemann);
            }
            return coef.parse::<f64>().ok().filter(|c| c.is_finite()).map(Self::Busemann).ok_or_else(bad);
        }
        s.parse::<f64>().ok().filter(|c| c.is_finite()).map(Self::Constant).ok_or_else(bad)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceSpec {
    Hyperbolic(usize),
    Sphere(usize),
    FlatTorus(usize),
    Euclidean(usize),
    Minkowski(usize, usize),
    /// `(B x F, -g_B + g_F)`.
    Product(Box<SpaceSpec>, Box<SpaceSpec>),
    /// `(B x F, -g_B + e^{2α} g_F)`.
    Warped { base: Box<SpaceSpec>, fiber: Box<SpaceSpec>, alpha: AlphaExpr },
}

impl SpaceSpec {
    fn atom_chart(&self) -> Result<ChartMetric> {
        Ok(match *self {
            Self::Hyperbolic(l) => super::hyperbolic(l),
            Self::Sphere(m) => super::sphere(m),
            Self::FlatTorus(m) => super::flat_torus(m),
            Self::Euclidean(n) => super::euclidean(n),
            Self::Minkowski(p, q) => super::minkowski(p, q),
            _ => return Err(Error::UnsupportedSpace(format!("{self} is not an atom"))),
        })
    }

    /// The product structure, if this is a product or warped spec.
    pub fn warped_spec(&self, k: Option<f64>) -> Result<Option<WarpedProductSpec>> {
        match self {
            Self::Product(b, f) => Ok(Some(WarpedProductSpec::plain(b.atom_chart()?, f.atom_chart()?))),
            Self::Warped { base, fiber, alpha } => {
                let warp = alpha.resolve(k)?;
                if matches!(warp, WarpFunction::Busemann { .. }) && !matches!(**base, Self::Hyperbolic(_)) {
                    return Err(Error::UnsupportedSpace(format!("busemann warping needs a hyperbolic base, got {base}")));
                }
                Ok(Some(WarpedProductSpec::new(base.atom_chart()?, fiber.atom_chart()?, warp)))
            }
            _ => Ok(None),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Hyperbolic(l) => write!(f, "hyperbolic({l})"),
            Self::Sphere(m) => write!(f, "sphere({m})"),
            Self::FlatTorus(m) => write!(f, "torus({m})"),
            Self::Euclidean(n) => write!(f, "euclidean({n})"),
            Self::Minkowski(p, q) => write!(f, "minkowski({p},{q})"),
            Self::Product(b, g) => write!(f, "product:{b}*{g}"),
            Self::Warped { base, fiber, alpha } => write!(f, "warped:{base}*{fiber}:alpha={alpha}"),
        }
    }
}

fn parse_atom(s: &str) -> Result<SpaceSpec> {
    let s = s.trim();
    let bad = || Error::UnsupportedSpace(s.to_string());
    let (name, rest) = s.split_once('(').ok_or_else(bad)?;
    let args = rest.strip_suffix(')').ok_or_else(bad)?;
    let dims: Vec<usize> = args
        .split(',')
        .map(|a| a.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let one = || match dims[..] {
        [d] if d >= 1 => Ok(d),
        _ => Err(bad()),
    };
    match name.trim() {
        "hyperbolic" => one().map(SpaceSpec::Hyperbolic),
        "sphere" => one().map(SpaceSpec::Sphere),
        "torus" | "flat_torus" => one().map(SpaceSpec::FlatTorus),
        "euclidean" => one().map(SpaceSpec::Euclidean),
        "minkowski" => match dims[..] {
            [p, q] if p + q >= 1 => Ok(SpaceSpec::Minkowski(p, q)),
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

fn parse_pair(s: &str) -> Result<(Box<SpaceSpec>, Box<SpaceSpec>)> {
    let (a, b) = s.split_once('*').ok_or_else(|| Error::UnsupportedSpace(format!("expected A*B, got `{s}`")))?;
    Ok((Box::new(parse_atom(a)?), Box::new(parse_atom(b)?)))
}

impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("product:") {
            let (b, f) = parse_pair(rest)?;
            return Ok(Self::Product(b, f));
        }
        if let Some(rest) = s.strip_prefix("warped:") {
            let (pair, alpha) = rest
                .split_once(":alpha=")
                .ok_or_else(|| Error::UnsupportedSpace(format!("warped spec needs `:alpha=`, got `{s}`")))?;
            let (base, fiber) = parse_pair(pair)?;
            return Ok(Self::Warped { base, fiber, alpha: alpha.parse()? });
        }
        parse_atom(s)
    }
}

/// Builds the chart of a parsed space. `k` resolves `sqrtk` in warping
/// expressions.
pub fn build_space(spec: &SpaceSpec, k: Option<f64>) -> Result<ChartMetric> {
    match spec.warped_spec(k)? {
        Some(w) => Ok(w.assemble()),
        None => spec.atom_chart(),
    }
}
