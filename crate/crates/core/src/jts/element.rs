use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use super::JtsKind;
use crate::error::{HjtsError, Result};
use crate::linalg::{inner, vec_norm, CMatrix, C64, ZERO};

/// A point of the ambient space, stored as coordinates in the kind's fixed
/// m₁-orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Element {
    kind: JtsKind,
    #[serde(with = "complex_pairs")]
    coords: Vec<C64>,
}

impl Element {
    pub fn new(kind: &JtsKind, coords: Vec<C64>) -> Result<Self> {
        if coords.len() != kind.ambient_dim() {
            return Err(HjtsError::contract(format!(
                "{} coordinates supplied for kind {kind} of dimension {}",
                coords.len(),
                kind.ambient_dim()
            )));
        }
        if coords.iter().any(|z| !z.is_finite()) {
            return Err(HjtsError::contract("element coordinates must be finite"));
        }
        Ok(Self { kind: kind.clone(), coords })
    }

    pub(crate) fn from_parts(kind: &JtsKind, coords: Vec<C64>) -> Self {
        debug_assert_eq!(coords.len(), kind.ambient_dim());
        Self { kind: kind.clone(), coords }
    }

    pub fn from_real(kind: &JtsKind, coords: &[f64]) -> Result<Self> {
        Self::new(kind, coords.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zero(kind: &JtsKind) -> Self {
        Self { kind: kind.clone(), coords: vec![ZERO; kind.ambient_dim()] }
    }

    /// The `k`-th basis vector.
    pub fn basis(kind: &JtsKind, k: usize) -> Self {
        let mut e = Self::zero(kind);
        e.coords[k] = C64::new(1.0, 0.0);
        e
    }

    /// Element of a simple matrix-family kind (I, II, III) from its matrix.
    /// Types II/III take the (anti)symmetric part.
    pub fn from_matrix(kind: &JtsKind, m: &CMatrix) -> Result<Self> {
        match kind.matrix_shape() {
            Some(shape) if shape == (m.rows(), m.cols()) => Self::new(kind, kind.matrix_to_coords(m)),
            Some(shape) => Err(HjtsError::contract(format!(
                "expected a {}x{} matrix for {kind}, got {}x{}",
                shape.0,
                shape.1,
                m.rows(),
                m.cols()
            ))),
            None => Err(HjtsError::contract(format!("{kind} has no matrix representation"))),
        }
    }

    /// Matrix representation for kinds I, II, III.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        match self.kind.matrix_shape() {
            Some(_) => Ok(self.kind.coords_to_matrix(&self.coords)),
            None => Err(HjtsError::contract(format!("{} has no matrix representation", self.kind))),
        }
    }

    pub fn kind(&self) -> &JtsKind {
        &self.kind
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn into_coords(self) -> Vec<C64> {
        self.coords
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { kind: self.kind.clone(), coords: self.coords.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: C64, other: &Self) -> Self {
        debug_assert_eq!(self.kind, other.kind);
        Self {
            kind: self.kind.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + s * b).collect(),
        }
    }

    /// `m₁(self, self)^{1/2}`.
    pub fn norm(&self) -> f64 {
        vec_norm(&self.coords)
    }

    /// `m₁(self, other)`, complex-linear in `self`.
    pub fn m1(&self, other: &Self) -> C64 {
        inner(&self.coords, &other.coords)
    }

    /// Distance in the m₁ norm.
    pub fn distance(&self, other: &Self) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// Components on each simple factor.
    pub fn split(&self) -> Vec<Element> {
        self.kind.factors().into_iter().map(|(k, r)| Element::from_parts(k, self.coords[r].to_vec())).collect()
    }

    /// Reassembles an element of `kind` from factor components.
    pub fn join(kind: &JtsKind, parts: &[Element]) -> Self {
        let coords: Vec<C64> = parts.iter().flat_map(|p| p.coords.iter().copied()).collect();
        Self::from_parts(kind, coords)
    }

    pub(crate) fn check_same_kind(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind {
            return Err(HjtsError::contract(format!("kind mismatch: {} vs {}", self.kind, other.kind)));
        }
        Ok(())
    }
}

impl Add for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        self.axpy(C64::new(1.0, 0.0), rhs)
    }
}

impl Sub for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        self.axpy(C64::new(-1.0, 0.0), rhs)
    }
}

/// Complex vectors as `[[re, im], ...]` in JSON.
pub mod complex_pairs {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::linalg::C64;

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}
