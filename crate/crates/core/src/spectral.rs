//! Spectral decomposition `z = Σ λ_j c_j` over a frame of mutually
//! orthogonal tripotents, and the quantities derived from it: generic norms,
//! the quasi-inverse and odd powers.

use std::cmp::Ordering;

use crate::error::{HjtsError, Result};
use crate::jts::{box_operator, q_operator, Element, JtsKind};
use crate::linalg::{complete_orthonormal, hermitian_function, inner, svd, takagi, vec_norm, CMatrix, C64, ZERO};

/// Spectral values below this (relative to the largest) are treated as zero
/// and their frame is completed from an orthogonal complement.
const NEGLIGIBLE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub kind: JtsKind,
    /// `λ₁ ≥ … ≥ λ_r ≥ 0`, `r = rank(kind)`.
    pub values: Vec<f64>,
    /// Tripotents `c_j`, one per value.
    pub frame: Vec<Element>,
}

impl SpectralDecomposition {
    /// `Σ f(λ_j) c_j`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Element {
        let mut out = Element::zero(&self.kind);
        for (&l, c) in self.values.iter().zip(&self.frame) {
            out = out.axpy(C64::new(f(l), 0.0), c);
        }
        out
    }

    pub fn reconstruct(&self) -> Element {
        self.map(|l| l)
    }

    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

pub fn spectral_decompose(z: &Element) -> Result<SpectralDecomposition> {
    let kind = z.kind();
    let mut pairs: Vec<(f64, Element)> = Vec::with_capacity(kind.rank());
    for (f, range) in kind.factors() {
        let local = &z.coords()[range.clone()];
        for (value, c) in decompose_simple(f, local)? {
            let mut coords = vec![ZERO; kind.ambient_dim()];
            coords[range.clone()].copy_from_slice(&c);
            pairs.push((value, Element::from_parts(kind, coords)));
        }
    }
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));
    let (values, frame) = pairs.into_iter().unzip();
    Ok(SpectralDecomposition { kind: kind.clone(), values, frame })
}

/// Largest spectral value `λ₁(z)`.
pub fn spectral_radius(z: &Element) -> Result<f64> {
    Ok(spectral_decompose(z)?.largest())
}

fn decompose_simple(kind: &JtsKind, z: &[C64]) -> Result<Vec<(f64, Vec<C64>)>> {
    match *kind {
        JtsKind::TypeI { .. } => {
            let m = kind.coords_to_matrix(z);
            let f = svd(&m)?;
            Ok((0..kind.rank())
                .map(|j| {
                    let (u, v) = (f.u.column(j), f.v.column(j));
                    let c = CMatrix::from_fn(m.rows(), m.cols(), |a, b| u[a] * v[b].conj());
                    (f.sigma[j], kind.matrix_to_coords(&c))
                })
                .collect())
        }
        JtsKind::TypeIII { .. } => {
            let m = kind.coords_to_matrix(z);
            let t = takagi(&m)?;
            Ok((0..kind.rank())
                .map(|j| {
                    let u = t.u.column(j);
                    let c = CMatrix::from_fn(m.rows(), m.cols(), |a, b| u[a] * u[b]);
                    (t.sigma[j], kind.matrix_to_coords(&c))
                })
                .collect())
        }
        JtsKind::TypeII { n } => decompose_antisymmetric(kind, n, z),
        JtsKind::TypeIV { .. } => Ok(decompose_spin(z)),
        JtsKind::Product(_) => unreachable!("products are split by the caller"),
    }
}

/// `c = u vᵀ − v uᵀ` for orthonormal `u`, `v`.
fn antisymmetric_tripotent(kind: &JtsKind, n: usize, u: &[C64], v: &[C64]) -> Vec<C64> {
    let c = CMatrix::from_fn(n, n, |a, b| u[a] * v[b] - v[a] * u[b]);
    kind.matrix_to_coords(&c)
}

fn orthogonalize(v: &mut [C64], against: &[Vec<C64>]) {
    for _ in 0..2 {
        for b in against {
            let p = inner(v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
    }
}

/// Canonical form `Z = Σ σ_j (u_j v_jᵀ − v_j u_jᵀ)`.
///
/// Left singular vectors of `Z` come in pairs with equal singular value; on
/// each such eigenspace of `ZZᴴ` the map `u ↦ conj(Zᴴu)/σ` is an antiunitary
/// involution up to sign, so any `u` orthogonal to the pairs already taken
/// produces a partner `v` that is orthogonal to them as well.
fn decompose_antisymmetric(kind: &JtsKind, n: usize, z: &[C64]) -> Result<Vec<(f64, Vec<C64>)>> {
    let m = kind.coords_to_matrix(z);
    let mh = m.adjoint();
    let f = svd(&m)?;
    let smax = f.sigma.first().copied().unwrap_or(0.0);
    let pairs_wanted = n / 2;
    let cluster_tol = 1e-9 * smax.max(1.0);

    let mut used: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(pairs_wanted);
    let mut start = 0;
    while start < n && out.len() < pairs_wanted {
        if f.sigma[start] <= NEGLIGIBLE * smax || smax == 0.0 {
            break;
        }
        let mut end = start + 1;
        while end < n && f.sigma[end - 1] - f.sigma[end] <= cluster_tol {
            end += 1;
        }
        let mut candidates: Vec<Vec<C64>> = (start..end).map(|j| f.u.column(j)).collect();
        loop {
            if out.len() == pairs_wanted {
                break;
            }
            candidates.iter_mut().for_each(|c| orthogonalize(c, &used));
            let best = candidates.iter().enumerate().map(|(i, c)| (i, vec_norm(c))).max_by(|a, b| a.1.total_cmp(&b.1));
            let Some((bi, bn)) = best else { break };
            if bn < 0.1 {
                break;
            }
            let mut u = candidates.swap_remove(bi);
            u.iter_mut().for_each(|x| *x /= bn);
            let zu = mh.mul_vec(&u);
            let lambda = vec_norm(&zu);
            if lambda <= NEGLIGIBLE * smax {
                break;
            }
            let mut v: Vec<C64> = zu.iter().map(|x| x.conj() / lambda).collect();
            let mut basis = used.clone();
            basis.push(u.clone());
            orthogonalize(&mut v, &basis);
            let vn = vec_norm(&v);
            v.iter_mut().for_each(|x| *x /= vn);
            // Z = λ(u vᵀ − v uᵀ) + …, read the coefficient back for sign/phase
            // safety: it is real positive up to roundoff.
            let c = antisymmetric_tripotent(kind, n, &u, &v);
            let coeff = inner(z, &c).re;
            out.push((coeff, c));
            used.push(u);
            used.push(v);
        }
        start = end;
    }

    // Complete the frame over the orthogonal complement.
    if out.len() < pairs_wanted {
        let taken = used.len();
        complete_orthonormal(&mut used, n, n);
        let extra = &used[taken..];
        for pair in extra.chunks_exact(2) {
            if out.len() == pairs_wanted {
                break;
            }
            out.push((0.0, antisymmetric_tripotent(kind, n, &pair[0], &pair[1])));
        }
    }
    Ok(out)
}

/// Closed form for the spin factor.
///
/// With `w = e^{-iθ}x = a + ib` (raw coordinates, `θ = ½ arg Σx_j²`), `a ⊥ b`
/// real and `|a| ≥ |b|`; then `λ₁ = |a| + |b|`, `λ₁λ₂ = |Σx_j²|` and
/// `c_± = e^{iθ}(â ± i b̂)/2`.
fn decompose_spin(z: &[C64]) -> Vec<(f64, Vec<C64>)> {
    let n = z.len();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x: Vec<C64> = z.iter().map(|c| c * s).collect();
    let norm = vec_norm(&x);
    let mut a_hat = vec![0.0; n];
    let mut b_hat = vec![0.0; n];
    let (mut theta, l1, l2);
    if norm == 0.0 {
        theta = 0.0;
        a_hat[0] = 1.0;
        b_hat[1] = 1.0;
        l1 = 0.0;
        l2 = 0.0;
    } else {
        let q: C64 = x.iter().map(|c| c * c).sum();
        theta = 0.5 * q.arg();
        let rot = C64::from_polar(1.0, -theta);
        let mut w: Vec<C64> = x.iter().map(|c| c * rot).collect();
        let mut a: Vec<f64> = w.iter().map(|c| c.re).collect();
        let mut b: Vec<f64> = w.iter().map(|c| c.im).collect();
        let na = a.iter().map(|t| t * t).sum::<f64>().sqrt();
        let nb = b.iter().map(|t| t * t).sum::<f64>().sqrt();
        if nb > na {
            theta += std::f64::consts::FRAC_PI_2;
            w = w.iter().map(|c| c * C64::new(0.0, -1.0)).collect();
            a = w.iter().map(|c| c.re).collect();
            b = w.iter().map(|c| c.im).collect();
        }
        let na = a.iter().map(|t| t * t).sum::<f64>().sqrt();
        let nb = b.iter().map(|t| t * t).sum::<f64>().sqrt();
        l1 = na + nb;
        l2 = (q.norm() / l1).min(l1);
        a_hat.iter_mut().zip(&a).for_each(|(h, t)| *h = t / na);
        // b ⊥ a in exact arithmetic; re-orthogonalize, or pick any real unit
        // vector orthogonal to â when b vanishes.
        let mut bb = b.clone();
        if nb > 1e-8 * na {
            let p: f64 = bb.iter().zip(&a_hat).map(|(x, y)| x * y).sum();
            bb.iter_mut().zip(&a_hat).for_each(|(x, y)| *x -= p * y);
        } else {
            let k = (0..n).min_by(|&i, &j| a_hat[i].abs().total_cmp(&a_hat[j].abs())).unwrap();
            bb = vec![0.0; n];
            bb[k] = 1.0;
            let p = a_hat[k];
            bb.iter_mut().zip(&a_hat).for_each(|(x, y)| *x -= p * y);
        }
        let nbb = bb.iter().map(|t| t * t).sum::<f64>().sqrt();
        b_hat.iter_mut().zip(&bb).for_each(|(h, t)| *h = t / nbb);
    }
    let phase = C64::from_polar(s, theta); // coords = √2·raw, raw = e^{iθ}(â ± ib̂)/2
    let make =
        |sign: f64| -> Vec<C64> { a_hat.iter().zip(&b_hat).map(|(&a, &b)| phase * C64::new(a, sign * b)).collect() };
    vec![(l1, make(1.0)), (l2, make(-1.0))]
}

/// `(𝒩(z), 𝒩*(z)) = (Π(1 − λ_j²), Π(1 + λ_j²))`.
pub fn generic_norms(z: &Element) -> Result<(f64, f64)> {
    let s = spectral_decompose(z)?;
    Ok(norms_from_values(&s.values))
}

pub(crate) fn norms_from_values(values: &[f64]) -> (f64, f64) {
    values.iter().fold((1.0, 1.0), |(n, ns), &l| {
        let l2 = l * l;
        (n * (1.0 - l2), ns * (1.0 + l2))
    })
}

/// Per simple factor `(𝒩_i, 𝒩*_i)`, in factor order.
pub fn factor_norms(z: &Element) -> Result<Vec<(f64, f64)>> {
    z.split().iter().map(generic_norms).collect()
}

/// Quasi-inverse `z^z = (id − z□z)^{-1} z = Σ λ_j/(1 − λ_j²) c_j`.
pub fn quasi_inverse(z: &Element) -> Result<Element> {
    let s = spectral_decompose(z)?;
    if s.values.iter().any(|&l| (1.0 - l * l).abs() <= 1e-12) {
        return Err(HjtsError::domain("id − z□z is singular (spectral value 1)"));
    }
    Ok(s.map(|l| l / (1.0 - l * l)))
}

/// `z^{-z} = (id + z□z)^{-1} z = Σ λ_j/(1 + λ_j²) c_j`, defined everywhere.
pub fn dual_quasi_inverse(z: &Element) -> Result<Element> {
    Ok(spectral_decompose(z)?.map(|l| l / (1.0 + l * l)))
}

/// Quasi-inverse by inverting the operator `id − σ·z□z` directly (`σ = ±1`).
pub fn quasi_inverse_by_operator(z: &Element, sign: f64) -> Result<Element> {
    let bx = box_operator(z);
    let op = &CMatrix::identity(z.dim()) - &bx.matrix().scale_real(sign);
    let eig = crate::linalg::hermitian_eigen(&op)?;
    if eig.values.iter().any(|l| l.abs() <= 1e-12) {
        return Err(HjtsError::domain("id − z□z is singular (spectral value 1)"));
    }
    let inv = hermitian_function(&op, |l| 1.0 / l)?;
    Ok(Element::from_parts(z.kind(), inv.mul_vec(z.coords())))
}

/// Odd power `z^{(2j+1)}` by the recursion `z^{(2j+1)} = Q(z) z^{(2j−1)}`.
pub fn odd_power(z: &Element, j: usize) -> Element {
    let q = q_operator(z);
    let mut p = z.clone();
    for _ in 0..j {
        p = q.apply(&p);
    }
    p
}

/// Odd power through `(z□z)^j z`.
pub fn odd_power_by_box(z: &Element, j: usize) -> Element {
    let b = box_operator(z);
    let mut p = z.clone();
    for _ in 0..j {
        p = b.apply(&p);
    }
    p
}
