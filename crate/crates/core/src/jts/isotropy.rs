use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Element, JtsKind};
use crate::error::{HjtsError, Result};
use crate::linalg::{inner, vec_norm, CMatrix, C64};

const UNITARY_TOL: f64 = 1e-10;

/// Parameters of an element of the linear isotropy group at the origin.
#[derive(Debug, Clone)]
pub enum IsotropyParams {
    /// `Z ↦ U Z Vᴴ` on `p×q` matrices.
    TypeI {
        u: CMatrix,
        v: CMatrix,
    },
    /// `Z ↦ U Z Uᵀ` on (anti)symmetric matrices.
    Congruence {
        u: CMatrix,
    },
    /// `x ↦ e^{iθ} O x` with `O` real orthogonal, stored row-major.
    Spin {
        theta: f64,
        o: Vec<f64>,
    },
    Product(Vec<IsotropyParams>),
}

impl IsotropyParams {
    pub fn identity(kind: &JtsKind) -> Self {
        match *kind {
            JtsKind::TypeI { p, q } => Self::TypeI { u: CMatrix::identity(p), v: CMatrix::identity(q) },
            JtsKind::TypeII { n } | JtsKind::TypeIII { n } => Self::Congruence { u: CMatrix::identity(n) },
            JtsKind::TypeIV { n } => {
                let mut o = vec![0.0; n * n];
                for i in 0..n {
                    o[i * n + i] = 1.0;
                }
                Self::Spin { theta: 0.0, o }
            }
            JtsKind::Product(ref fs) => Self::Product(fs.iter().map(Self::identity).collect()),
        }
    }

    /// Haar-distributed parameters.
    pub fn random<R: Rng + ?Sized>(kind: &JtsKind, rng: &mut R) -> Self {
        match *kind {
            JtsKind::TypeI { p, q } => Self::TypeI { u: random_unitary(rng, p), v: random_unitary(rng, q) },
            JtsKind::TypeII { n } | JtsKind::TypeIII { n } => Self::Congruence { u: random_unitary(rng, n) },
            JtsKind::TypeIV { n } => {
                let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                Self::Spin { theta, o: random_orthogonal(rng, n) }
            }
            JtsKind::Product(ref fs) => Self::Product(fs.iter().map(|f| Self::random(f, rng)).collect()),
        }
    }

    fn validate(&self, kind: &JtsKind) -> Result<()> {
        let unitary = |m: &CMatrix, n: usize, what: &str| -> Result<()> {
            if m.rows() != n || m.cols() != n {
                return Err(HjtsError::contract(format!("{what} must be {n}x{n} for {kind}")));
            }
            let defect = m.unitarity_defect();
            if defect > UNITARY_TOL {
                return Err(HjtsError::contract(format!("{what} is not unitary (defect {defect:.3e})")));
            }
            Ok(())
        };
        match (self, kind) {
            (Self::TypeI { u, v }, &JtsKind::TypeI { p, q }) => {
                unitary(u, p, "U")?;
                unitary(v, q, "V")
            }
            (Self::Congruence { u }, &JtsKind::TypeII { n } | &JtsKind::TypeIII { n }) => unitary(u, n, "U"),
            (Self::Spin { theta, o }, &JtsKind::TypeIV { n }) => {
                if o.len() != n * n || !theta.is_finite() {
                    return Err(HjtsError::contract(format!("spin parameters must hold a {n}x{n} matrix")));
                }
                let om = CMatrix::from_real(n, n, o);
                let defect = om.unitarity_defect();
                if defect > UNITARY_TOL {
                    return Err(HjtsError::contract(format!("O is not orthogonal (defect {defect:.3e})")));
                }
                Ok(())
            }
            (Self::Product(ps), JtsKind::Product(fs)) if ps.len() == fs.len() => {
                ps.iter().zip(fs).try_for_each(|(p, f)| p.validate(f))
            }
            _ => Err(HjtsError::contract(format!("isotropy parameters do not match kind {kind}"))),
        }
    }
}

fn act_simple(params: &IsotropyParams, kind: &JtsKind, z: &[C64]) -> Vec<C64> {
    match params {
        IsotropyParams::TypeI { u, v } => {
            let m = kind.coords_to_matrix(z);
            kind.matrix_to_coords(&u.matmul(&m).matmul(&v.adjoint()))
        }
        IsotropyParams::Congruence { u } => {
            let m = kind.coords_to_matrix(z);
            kind.matrix_to_coords(&u.matmul(&m).matmul(&u.transpose()))
        }
        IsotropyParams::Spin { theta, o } => {
            let n = z.len();
            let phase = C64::from_polar(1.0, *theta);
            (0..n).map(|i| phase * (0..n).map(|j| z[j] * o[i * n + j]).sum::<C64>()).collect()
        }
        IsotropyParams::Product(_) => unreachable!("products are split by the caller"),
    }
}

/// Applies the isotropy element `τ` described by `params` to `z`.
pub fn isotropy_action(kind: &JtsKind, params: &IsotropyParams, z: &Element) -> Result<Element> {
    if z.kind() != kind {
        return Err(HjtsError::contract(format!("element of {} passed for kind {kind}", z.kind())));
    }
    params.validate(kind)?;
    let coords = match (params, kind) {
        (IsotropyParams::Product(ps), JtsKind::Product(_)) => {
            let mut out = Vec::with_capacity(z.dim());
            for (p, (f, r)) in ps.iter().zip(kind.factors()) {
                out.extend(act_simple(p, f, &z.coords()[r]));
            }
            out
        }
        _ => act_simple(params, kind, z.coords()),
    };
    Ok(Element::from_parts(kind, coords))
}

/// Gram-Schmidt orthonormalization of complex Gaussian columns (Haar measure).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                C64::new(re, im)
            })
            .collect();
        for _ in 0..2 {
            for c in &cols {
                let p = inner(&v, c);
                v.iter_mut().zip(c).for_each(|(x, y)| *x -= p * y);
            }
        }
        let nv = vec_norm(&v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            cols.push(v);
        }
    }
    CMatrix::from_columns(n, &cols)
}

/// Random real orthogonal matrix, row-major.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let p: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(c).for_each(|(x, y)| *x -= p * y);
            }
        }
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            cols.push(v);
        }
    }
    let mut o = vec![0.0; n * n];
    for (j, c) in cols.iter().enumerate() {
        for (i, &x) in c.iter().enumerate() {
            o[i * n + j] = x;
        }
    }
    o
}
