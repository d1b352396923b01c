//! Hermitian positive Jordan triple systems of the classical Cartan domains,
//! the symplectic duality map `Ψ(z) = B(z,z)^{-1/4} z` between a bounded
//! symmetric domain and its ambient space, and numerical verification of its
//! geometric properties.

pub mod duality;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod jts;
pub mod linalg;
pub mod spectral;

pub use duality::{psi, psi_checked, psi_inverse, psi_inverse_checked, DualityRoute};
pub use error::{HjtsError, Result};
pub use jts::{Element, JtsKind};
pub use linalg::{CMatrix, C64};
pub use spectral::{spectral_decompose, SpectralDecomposition};
