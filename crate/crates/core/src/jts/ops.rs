use super::{Element, JtsKind};
use crate::error::{HjtsError, Result};
use crate::linalg::{inner, CMatrix, C64, ZERO};

/// Complex-linear endomorphism of the ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    kind: JtsKind,
    matrix: CMatrix,
}

/// Conjugate-linear endomorphism `v ↦ A·conj(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOperator {
    kind: JtsKind,
    matrix: CMatrix,
}

impl LinearOperator {
    pub fn new(kind: &JtsKind, matrix: CMatrix) -> Result<Self> {
        let d = kind.ambient_dim();
        if matrix.rows() != d || matrix.cols() != d || !matrix.is_finite() {
            return Err(HjtsError::contract(format!("operator matrix must be finite and {d}x{d}")));
        }
        Ok(Self { kind: kind.clone(), matrix })
    }

    pub fn identity(kind: &JtsKind) -> Self {
        Self { kind: kind.clone(), matrix: CMatrix::identity(kind.ambient_dim()) }
    }

    pub fn kind(&self) -> &JtsKind {
        &self.kind
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn apply(&self, v: &Element) -> Element {
        debug_assert_eq!(&self.kind, v.kind());
        Element::from_parts(&self.kind, self.matrix.mul_vec(v.coords()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { kind: self.kind.clone(), matrix: self.matrix.matmul(&other.matrix) }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }
}

impl AntilinearOperator {
    pub fn kind(&self) -> &JtsKind {
        &self.kind
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &Element) -> Element {
        let conj: Vec<C64> = v.coords().iter().map(|z| z.conj()).collect();
        Element::from_parts(&self.kind, self.matrix.mul_vec(&conj))
    }

    /// `self ∘ other`, which is complex-linear.
    pub fn compose(&self, other: &Self) -> LinearOperator {
        LinearOperator { kind: self.kind.clone(), matrix: self.matrix.matmul(&other.matrix.conj()) }
    }
}

/// `{u, v, w}` on raw coordinate slices of a single kind.
pub(crate) fn triple_raw(kind: &JtsKind, u: &[C64], v: &[C64], w: &[C64]) -> Vec<C64> {
    match kind {
        JtsKind::TypeI { .. } | JtsKind::TypeII { .. } | JtsKind::TypeIII { .. } => {
            // {U,V,W} = UV*W + WV*U, leaving the (anti)symmetric subspaces invariant.
            let um = kind.coords_to_matrix(u);
            let vs = kind.coords_to_matrix(v).adjoint();
            let wm = kind.coords_to_matrix(w);
            let uvw = um.matmul(&vs).matmul(&wm);
            let wvu = wm.matmul(&vs).matmul(&um);
            kind.matrix_to_coords(&(&uvw + &wvu))
        }
        JtsKind::TypeIV { .. } => {
            // In the e_j/√2 basis the spin-factor product
            // 2[⟨x,y⟩z + ⟨z,y⟩x − (x·z)ȳ] becomes ⟨u,v⟩w + ⟨w,v⟩u − (u·w)v̄.
            let uv = inner(u, v);
            let wv = inner(w, v);
            let uw: C64 = u.iter().zip(w).map(|(a, b)| a * b).sum();
            (0..u.len()).map(|j| uv * w[j] + wv * u[j] - uw * v[j].conj()).collect()
        }
        JtsKind::Product(_) => {
            let mut out = Vec::with_capacity(u.len());
            for (f, r) in kind.factors() {
                out.extend(triple_raw(f, &u[r.clone()], &v[r.clone()], &w[r]));
            }
            out
        }
    }
}

/// The triple product `{u, v, w}`: complex-bilinear symmetric in `(u, w)`,
/// conjugate-linear in `v`.
pub fn triple_product(u: &Element, v: &Element, w: &Element) -> Result<Element> {
    u.check_same_kind(v)?;
    u.check_same_kind(w)?;
    Ok(Element::from_parts(u.kind(), triple_raw(u.kind(), u.coords(), v.coords(), w.coords())))
}

/// `w ↦ {u, v, w}`, assembled block-diagonally over simple factors.
pub fn d_operator(u: &Element, v: &Element) -> Result<LinearOperator> {
    u.check_same_kind(v)?;
    let kind = u.kind();
    let d = kind.ambient_dim();
    let mut m = CMatrix::zeros(d, d);
    for (f, r) in kind.factors() {
        let (uf, vf) = (&u.coords()[r.clone()], &v.coords()[r.clone()]);
        let mut e = vec![ZERO; r.len()];
        for k in 0..r.len() {
            e[k] = C64::new(1.0, 0.0);
            let col = triple_raw(f, uf, vf, &e);
            e[k] = ZERO;
            for (i, c) in col.into_iter().enumerate() {
                m[(r.start + i, r.start + k)] = c;
            }
        }
    }
    Ok(LinearOperator { kind: kind.clone(), matrix: m })
}

/// `z□z = ½ D(z, z)`.
pub fn box_operator(z: &Element) -> LinearOperator {
    let d = d_operator(z, z).expect("same element");
    LinearOperator { kind: d.kind, matrix: d.matrix.scale_real(0.5) }
}

/// Quadratic representation `Q(u)v = ½{u, v, u}`.
pub fn q_operator(u: &Element) -> AntilinearOperator {
    let kind = u.kind();
    let d = kind.ambient_dim();
    let mut m = CMatrix::zeros(d, d);
    for (f, r) in kind.factors() {
        let uf = &u.coords()[r.clone()];
        let mut e = vec![ZERO; r.len()];
        for k in 0..r.len() {
            e[k] = C64::new(1.0, 0.0);
            let col = triple_raw(f, uf, &e, uf);
            e[k] = ZERO;
            for (i, c) in col.into_iter().enumerate() {
                m[(r.start + i, r.start + k)] = c * 0.5;
            }
        }
    }
    AntilinearOperator { kind: kind.clone(), matrix: m }
}

/// Bergman operator `B(u, v) = id − D(u, v) + Q(u)Q(v)`.
pub fn bergman_operator(u: &Element, v: &Element) -> Result<LinearOperator> {
    let d = d_operator(u, v)?;
    let qq = q_operator(u).compose(&q_operator(v));
    let id = CMatrix::identity(u.dim());
    let matrix = &(&id - &d.matrix) + &qq.matrix;
    Ok(LinearOperator { kind: u.kind().clone(), matrix })
}

/// The generic trace m₁, a Hermitian form linear in `x`. The coordinate basis
/// is m₁-orthonormal, so this is the standard inner product of coordinates.
pub fn m1_form(x: &Element, y: &Element) -> Result<C64> {
    x.check_same_kind(y)?;
    Ok(x.m1(y))
}

/// Genus of each simple factor, from `tr D(c, c) = g·m₁(c, c)` on a
/// primitive tripotent.
pub fn genus(kind: &JtsKind) -> Result<Vec<u32>> {
    kind.factors()
        .into_iter()
        .map(|(f, _)| {
            let c = Element::from_parts(f, f.standard_frame().swap_remove(0));
            let tr = d_operator(&c, &c)?.trace();
            let g = tr.re / c.m1(&c).re;
            let rounded = g.round();
            if (g - rounded).abs() > 1e-8 || tr.im.abs() > 1e-8 || rounded < 1.0 {
                return Err(HjtsError::InternalConsistency(format!("non-integer genus {g} for {f}")));
            }
            Ok(rounded as u32)
        })
        .collect()
}
