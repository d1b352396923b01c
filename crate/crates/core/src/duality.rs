//! The symplectic duality map `Ψ(z) = B(z,z)^{-1/4} z` from the bounded
//! domain onto the whole ambient space, and its inverse
//! `Ψ⁻¹(u) = B(u,−u)^{-1/4} u`.
//!
//! Three routes compute the same map:
//!
//! * [`DualityRoute::BergmanQuarter`] takes the `−1/4` power of the Bergman
//!   operator;
//! * [`DualityRoute::BoxHalf`] takes `(id − z□z)^{-1/2}`, which agrees with
//!   the former because `B(z,z) = (id − z□z)²` on the span of a frame;
//! * [`DualityRoute::Spectral`] rescales spectral values,
//!   `λ ↦ λ/√(1 − λ²)`.

use serde::{Deserialize, Serialize};

use crate::error::{HjtsError, Result};
use crate::jts::{bergman_operator, box_operator, embed, isotropy_action, restrict, Element, IsotropyParams, JtsKind};
use crate::linalg::{hermitian_power, CMatrix};
use crate::spectral::spectral_decompose;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DualityRoute {
    BergmanQuarter,
    #[default]
    BoxHalf,
    Spectral,
}

impl DualityRoute {
    pub const ALL: [DualityRoute; 3] = [Self::BergmanQuarter, Self::BoxHalf, Self::Spectral];
}

/// Routes disagreeing by more than this (relative) signal a bug.
const ROUTE_CONSISTENCY: f64 = 1e-7;

fn require_in_domain(z: &Element) -> Result<()> {
    let l1 = crate::spectral::spectral_radius(z)?;
    if l1 >= 1.0 {
        return Err(HjtsError::domain(format!("point outside the domain (λ₁ = {l1})")));
    }
    Ok(())
}

fn apply_power(op: &CMatrix, t: f64, z: &Element) -> Result<Element> {
    let p = hermitian_power(op, t)?;
    Ok(Element::from_parts(z.kind(), p.mul_vec(z.coords())))
}

/// `Ψ(z)` along one route; `z` must lie in the domain.
pub fn psi(z: &Element, route: DualityRoute) -> Result<Element> {
    require_in_domain(z)?;
    match route {
        DualityRoute::BergmanQuarter => apply_power(bergman_operator(z, z)?.matrix(), -0.25, z),
        DualityRoute::BoxHalf => {
            let op = &CMatrix::identity(z.dim()) - box_operator(z).matrix();
            apply_power(&op, -0.5, z)
        }
        DualityRoute::Spectral => Ok(spectral_decompose(z)?.map(|l| l / (1.0 - l * l).sqrt())),
    }
}

/// `Ψ⁻¹(u)` along one route; defined on the whole space.
pub fn psi_inverse(u: &Element, route: DualityRoute) -> Result<Element> {
    match route {
        DualityRoute::BergmanQuarter => apply_power(bergman_operator(u, &u.scale_real(-1.0))?.matrix(), -0.25, u),
        DualityRoute::BoxHalf => {
            let op = &CMatrix::identity(u.dim()) + box_operator(u).matrix();
            apply_power(&op, -0.5, u)
        }
        DualityRoute::Spectral => Ok(spectral_decompose(u)?.map(|m| m / (1.0 + m * m).sqrt())),
    }
}

/// Evaluates all routes and returns the default one, failing with an
/// internal-consistency error if any pair disagrees by more than `1e-7`
/// relative to `max(1, ‖result‖)`.
pub fn psi_checked(z: &Element) -> Result<Element> {
    cross_check(z, psi, "Ψ")
}

pub fn psi_inverse_checked(u: &Element) -> Result<Element> {
    cross_check(u, psi_inverse, "Ψ⁻¹")
}

fn cross_check(z: &Element, f: impl Fn(&Element, DualityRoute) -> Result<Element>, name: &str) -> Result<Element> {
    let values = DualityRoute::ALL.iter().map(|&r| f(z, r)).collect::<Result<Vec<_>>>()?;
    let spread = route_spread(&values);
    let scale = values[1].norm().max(1.0);
    if spread > ROUTE_CONSISTENCY * scale {
        return Err(HjtsError::InternalConsistency(format!(
            "{name} routes disagree by {spread:.3e} at {:?}",
            z.coords()
        )));
    }
    Ok(values.into_iter().nth(1).expect("three routes"))
}

/// Largest pairwise distance among route results.
pub fn route_spread(values: &[Element]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            worst = worst.max(values[i].distance(&values[j]));
        }
    }
    worst
}

/// `‖Ψ(τz) − τΨ(z)‖` for the isotropy element `τ`.
pub fn check_equivariance(kind: &JtsKind, params: &IsotropyParams, z: &Element) -> Result<f64> {
    let route = DualityRoute::default();
    let tz = isotropy_action(kind, params, z)?;
    let lhs = psi(&tz, route)?;
    let rhs = isotropy_action(kind, params, &psi(z, route)?)?;
    Ok(lhs.distance(&rhs))
}

/// Residuals of the hereditary property for `z ∈ sub ↪ sup`:
/// `(‖Ψ_sup(ιz) − ι Ψ_sub(z)‖, distance of Ψ_sup(ιz) from ι(sub))`.
pub fn check_hereditary(sub: &JtsKind, sup: &JtsKind, z: &Element) -> Result<(f64, f64)> {
    let route = DualityRoute::default();
    let image = psi(&embed(sub, sup, z)?, route)?;
    let expect = embed(sub, sup, &psi(z, route)?)?;
    let (_, containment) = restrict(sub, sup, &image)?;
    Ok((image.distance(&expect), containment))
}
