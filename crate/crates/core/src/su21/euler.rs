//! Euler–Arnold equation `φ(Γ') = [φ(Γ), Γ]` of the left-invariant metric,
//! where `φ` scales `h1` by `1+t`.

use serde::Serialize;

use super::algebra::{AlgebraElement, Exact, Scalar};
use crate::error::{Error, Result};

/// `φ(X0 + X1 + X2) = X0 + (1+t) X1 + X2`.
pub fn phi<T: Scalar>(x: &AlgebraElement<T>, t: &T) -> AlgebraElement<T> {
    x.project(0) + x.project(1).scale(&(T::one() + t.clone())) + x.project(2)
}

/// `Γ'` for `Γ` in `h1 + h2`: the `h1` part is constant and `Γ2' = t [Γ1, Γ2]`.
pub fn euler_arnold_rhs<T: Scalar>(gamma: &AlgebraElement<T>, t: &T) -> Result<AlgebraElement<T>> {
    gamma.ensure_tangent()?;
    Ok(gamma.project(1).bracket(&gamma.project(2)).scale(t))
}

/// `Γ' = φ⁻¹([φ(Γ), Γ])`, the equation before splitting into components.
pub fn euler_arnold_phi_form<T: Scalar>(gamma: &AlgebraElement<T>, t: &T) -> Result<AlgebraElement<T>> {
    gamma.ensure_tangent()?;
    let s = T::one() + t.clone();
    if s.is_zero() {
        return Err(Error::ParameterDomain("phi is not invertible at t = -1".into()));
    }
    let r = phi(gamma, t).bracket(gamma);
    Ok(r.project(0) + r.project(1).scale(&(T::one() / s)) + r.project(2))
}

/// Difference between the component form and the `φ` form of the equation.
pub fn euler_arnold_residual<T: Scalar>(gamma: &AlgebraElement<T>, t: &T) -> Result<AlgebraElement<T>> {
    Ok(euler_arnold_rhs(gamma, t)? - euler_arnold_phi_form(gamma, t)?)
}

/// A horizontal pair whose bracket has a nonzero vertical part.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonIntegrabilityWitness {
    pub x: String,
    pub y: String,
    /// `h0 + h1` component of `[x, y]`.
    pub vertical: String,
}

/// `(f1, f2)`: both lie in `h2`, the horizontal space of `G/H -> G/K`, and
/// `[f1, f2] = e3` lies in `h1`, so the horizontal distribution is not integrable.
pub fn nonintegrability_witness() -> NonIntegrabilityWitness {
    let (x, y) = (Exact::f(1), Exact::f(2));
    let c = x.bracket(&y);
    let vertical = c.project(0) + c.project(1);
    debug_assert!(!vertical.is_zero());
    NonIntegrabilityWitness { x: x.to_string(), y: y.to_string(), vertical: vertical.to_string() }
}
