//! Computational toolkit for semi-Riemannian submersions with curvature
//! bounded below in the sense `g(R(u,v)v,u) >= k (g(u,u)g(v,v) - g(u,v)^2)`.
//!
//! The crate is split into four layers:
//!
//! * [`chart`]: coordinate-chart tensor calculus (Christoffel symbols, Riemann
//!   tensor, sectional curvature) and sampled certification of `R >= k`.
//! * [`spaces`]: model spaces (hyperbolic, sphere, torus, flat), semi-Riemannian
//!   warped/twisted products, O'Neill tensor checks and conformal scalar curvature.
//! * [`su21`]: exact Lie-algebra engine for the homogeneous space `SU(2,1)/S^1`,
//!   its curvature quartic, the feasibility region in `(t, k)` and the
//!   Euler–Arnold right-hand side.
//! * [`geodesic`]: ODE integration with blow-up detection, geodesic flows,
//!   parallel transport, Riccati comparison and the incompleteness constructions.

pub mod chart;
pub mod error;
pub mod geodesic;
pub mod spaces;
pub mod su21;

pub use error::{Error, Result};
