//! Kähler potentials, their (1,1)-forms sampled by finite differences, real
//! Jacobians of maps of the ambient space, and checks of the symplectic
//! duality identities together with the supporting trace identities.
//!
//! Forms use the convention `ω(u, v) = −(1/π)·Im Σ H_jk u_j conj(v_k)` with
//! `H_jk = ∂²φ/∂z_j∂z̄_k`, i.e. `ω = (i/2π) ∂∂̄φ`. The three potentials are
//!
//! * hyperbolic: `φ = −log 𝒩`,
//! * dual Fubini–Study: `φ = log 𝒩*`,
//! * flat: `φ = m₁(z, z)`, whose form is `H = I` in m₁-orthonormal coordinates.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::duality::{psi, DualityRoute};
use crate::error::{HjtsError, Result};
use crate::jts::{box_operator, d_operator, genus, Element, LinearOperator};
use crate::linalg::{det, hermitian_function, CMatrix, C64};
use crate::spectral::{dual_quasi_inverse, quasi_inverse, spectral_decompose};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PotentialId {
    /// `−log 𝒩`, defined on the domain.
    Hyperbolic,
    /// `log 𝒩*`, defined everywhere.
    DualFs,
    /// `m₁(z, z)`.
    Flat,
}

/// Finite-difference steps, scaled by `max(1, ‖z‖)` at the point of use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdSteps {
    /// Step for first derivatives (central differences).
    pub first: f64,
    /// Base step for second derivatives (central differences with one
    /// Richardson extrapolation).
    pub second: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        Self { first: 1e-5, second: 1e-3 }
    }
}

impl FdSteps {
    pub fn from_first(first: f64) -> Self {
        Self { first, second: Self::default().second }
    }
}

fn scaled(h: f64, z: &Element) -> f64 {
    h * z.norm().max(1.0)
}

fn check_step(h: f64) -> Result<()> {
    if !(h.is_finite() && (1e-12..=1e-1).contains(&h)) {
        return Err(HjtsError::contract(format!("finite-difference step {h:e} outside [1e-12, 1e-1]")));
    }
    Ok(())
}

pub fn potential(id: PotentialId, z: &Element) -> Result<f64> {
    match id {
        PotentialId::Flat => Ok(z.coords().iter().map(|c| c.norm_sqr()).sum()),
        PotentialId::Hyperbolic => {
            let s = spectral_decompose(z)?;
            if s.largest() >= 1.0 {
                return Err(HjtsError::domain(format!(
                    "hyperbolic potential outside the domain (λ₁ = {})",
                    s.largest()
                )));
            }
            Ok(-s.values.iter().map(|&l| (-l * l).ln_1p()).sum::<f64>())
        }
        PotentialId::DualFs => Ok(spectral_decompose(z)?.values.iter().map(|&l| (l * l).ln_1p()).sum()),
    }
}

/// The real vector of a complex tangent vector, `(Re v₀, Im v₀, Re v₁, …)`.
pub fn to_real(v: &[C64]) -> Vec<f64> {
    v.iter().flat_map(|c| [c.re, c.im]).collect()
}

pub fn from_real(x: &[f64]) -> Vec<C64> {
    x.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect()
}

/// `z + t·e_a` for the real basis direction `a`.
fn shift(z: &Element, a: usize, t: f64) -> Element {
    let mut c = z.coords().to_vec();
    if a.is_multiple_of(2) {
        c[a / 2].re += t;
    } else {
        c[a / 2].im += t;
    }
    Element::from_parts(z.kind(), c)
}

fn shift2(z: &Element, a: usize, s: f64, b: usize, t: f64) -> Element {
    shift(&shift(z, a, s), b, t)
}

/// Real Hessian by central second differences at step `h`.
fn real_hessian(f: &dyn Fn(&Element) -> Result<f64>, z: &Element, h: f64) -> Result<Vec<f64>> {
    let n = 2 * z.dim();
    let f0 = f(z)?;
    let mut hess = vec![0.0; n * n];
    for a in 0..n {
        let fp = f(&shift(z, a, h))?;
        let fm = f(&shift(z, a, -h))?;
        hess[a * n + a] = (fp - 2.0 * f0 + fm) / (h * h);
        for b in a + 1..n {
            let pp = f(&shift2(z, a, h, b, h))?;
            let pm = f(&shift2(z, a, h, b, -h))?;
            let mp = f(&shift2(z, a, -h, b, h))?;
            let mm = f(&shift2(z, a, -h, b, -h))?;
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            hess[a * n + b] = v;
            hess[b * n + a] = v;
        }
    }
    Ok(hess)
}

/// Complex Hessian `H_jk = ∂²f/∂z_j∂z̄_k` of a real function, from real second
/// differences with one Richardson step, symmetrized to Hermitian.
pub fn complex_hessian(f: &dyn Fn(&Element) -> Result<f64>, z: &Element, h: f64) -> Result<CMatrix> {
    check_step(h)?;
    let coarse = real_hessian(f, z, h)?;
    let fine = real_hessian(f, z, h / 2.0)?;
    let n = z.dim();
    let m = 2 * n;
    let r = |a: usize, b: usize| (4.0 * fine[a * m + b] - coarse[a * m + b]) / 3.0;
    let raw = CMatrix::from_fn(n, n, |j, k| {
        let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
        C64::new(0.25 * (r(xj, xk) + r(yj, yk)), 0.25 * (r(xj, yk) - r(yj, xk)))
    });
    Ok((&raw + &raw.adjoint()).scale_real(0.5))
}

/// A (1,1)-form sampled at a point.
#[derive(Debug, Clone)]
pub struct TwoFormSample {
    pub point: Element,
    /// `H_jk ≈ ∂²φ/∂z_j∂z̄_k`, Hermitian.
    pub hessian: CMatrix,
}

impl TwoFormSample {
    /// `ω(u, v) = −(1/π)·Im Σ H_jk u_j conj(v_k)`.
    pub fn eval(&self, u: &[C64], v: &[C64]) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for (j, uj) in u.iter().enumerate() {
            for (k, vk) in v.iter().enumerate() {
                acc += self.hessian[(j, k)] * uj * vk.conj();
            }
        }
        -acc.im / PI
    }

    /// `2N×2N` real antisymmetric matrix `Ω_ab = ω(e_a, e_b)` over the real
    /// basis `(e₀, i·e₀, e₁, i·e₁, …)`.
    pub fn real_matrix(&self) -> Vec<f64> {
        let m = 2 * self.point.dim();
        let basis: Vec<Vec<C64>> = (0..m)
            .map(|a| {
                let mut x = vec![0.0; m];
                x[a] = 1.0;
                from_real(&x)
            })
            .collect();
        let mut out = vec![0.0; m * m];
        for a in 0..m {
            for b in 0..m {
                out[a * m + b] = self.eval(&basis[a], &basis[b]);
            }
        }
        out
    }
}

/// Samples the form of a potential at `z`. The flat form is returned exactly.
pub fn kahler_matrix(id: PotentialId, z: &Element, h: f64) -> Result<TwoFormSample> {
    check_step(h)?;
    let hh = scaled(h, z);
    let hessian = match id {
        PotentialId::Flat => CMatrix::identity(z.dim()),
        PotentialId::Hyperbolic => {
            let l1 = spectral_decompose(z)?.largest();
            if 1.0 - l1 <= 10.0 * hh {
                return Err(HjtsError::domain(format!("point too close to the boundary for step {hh:e} (λ₁ = {l1})")));
            }
            complex_hessian(&|x| potential(id, x), z, hh)?
        }
        PotentialId::DualFs => complex_hessian(&|x| potential(id, x), z, hh)?,
    };
    Ok(TwoFormSample { point: z.clone(), hessian })
}

/// Differential of a map of the ambient space in real coordinates.
#[derive(Debug, Clone)]
pub struct RealJacobian {
    pub point: Element,
    dim: usize,
    /// Row-major `dim × dim`, `dim = 2N`.
    data: Vec<f64>,
}

impl RealJacobian {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Pushes a complex tangent vector forward.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let x = to_real(v);
        let y: Vec<f64> = (0..self.dim).map(|i| (0..self.dim).map(|j| self.entry(i, j) * x[j]).sum()).collect();
        from_real(&y)
    }
}

/// Column `k` is `(f(z + h e_k) − f(z − h e_k))/2h` over the `2N` real
/// directions, with `h` scaled by `max(1, ‖z‖)`.
pub fn real_jacobian(f: &dyn Fn(&Element) -> Result<Element>, z: &Element, h: f64) -> Result<RealJacobian> {
    check_step(h)?;
    let h = scaled(h, z);
    let m = 2 * z.dim();
    let mut data = vec![0.0; m * m];
    for k in 0..m {
        let fp = to_real(f(&shift(z, k, h))?.coords());
        let fm = to_real(f(&shift(z, k, -h))?.coords());
        for i in 0..m {
            data[i * m + k] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(RealJacobian { point: z.clone(), dim: m, data })
}

/// `(f*ω)(u, v) = ω(J u, J v)` where `ω` is sampled at `f(z)`.
pub fn pullback_eval(omega: &TwoFormSample, jac: &RealJacobian, u: &[C64], v: &[C64]) -> f64 {
    omega.eval(&jac.apply(u), &jac.apply(v))
}

fn psi_map(x: &Element) -> Result<Element> {
    psi(x, DualityRoute::BoxHalf)
}

/// Residuals of `Ψ*ω_B* = ω₀` and `Ψ*ω₀ = ω_B` at `z` over the given
/// tangent pairs, returned as `(err₁, err₂)` (max absolute differences).
pub fn check_symplectic_duality(z: &Element, pairs: &[(Vec<C64>, Vec<C64>)], steps: FdSteps) -> Result<(f64, f64)> {
    let jac = real_jacobian(&psi_map, z, steps.first)?;
    let w = psi_map(z)?;
    let omega_b = kahler_matrix(PotentialId::Hyperbolic, z, steps.second)?;
    let omega_dual = kahler_matrix(PotentialId::DualFs, &w, steps.second)?;
    let flat_z = kahler_matrix(PotentialId::Flat, z, steps.second)?;
    let flat_w = kahler_matrix(PotentialId::Flat, &w, steps.second)?;
    let (mut err1, mut err2) = (0.0f64, 0.0f64);
    for (u, v) in pairs {
        err1 = err1.max((pullback_eval(&omega_dual, &jac, u, v) - flat_z.eval(u, v)).abs());
        err2 = err2.max((pullback_eval(&flat_w, &jac, u, v) - omega_b.eval(u, v)).abs());
    }
    Ok((err1, err2))
}

fn real_det(m: &[f64], n: usize) -> Result<f64> {
    Ok(det(&CMatrix::from_real(n, n, m))?.re)
}

/// `JᵀΩJ`.
fn pull_matrix(omega: &[f64], jac: &RealJacobian) -> Vec<f64> {
    let n = jac.dim();
    let mut tmp = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            tmp[a * n + b] = (0..n).map(|c| omega[a * n + c] * jac.entry(c, b)).sum();
        }
    }
    let mut out = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            out[a * n + b] = (0..n).map(|c| jac.entry(c, a) * tmp[c * n + b]).sum();
        }
    }
    out
}

/// Relative residuals of the top-degree identities `Ψ*(ω₀ⁿ) = ω_Bⁿ` and
/// `Ψ*((ω_B*)ⁿ) = ω₀ⁿ`, compared through determinants of the real
/// antisymmetric matrices (squares of Pfaffians).
pub fn check_volume_duality(z: &Element, steps: FdSteps) -> Result<(f64, f64)> {
    let n = 2 * z.dim();
    let jac = real_jacobian(&psi_map, z, steps.first)?;
    let w = psi_map(z)?;
    let flat_w = kahler_matrix(PotentialId::Flat, &w, steps.second)?.real_matrix();
    let flat_z = kahler_matrix(PotentialId::Flat, z, steps.second)?.real_matrix();
    let omega_b = kahler_matrix(PotentialId::Hyperbolic, z, steps.second)?.real_matrix();
    let omega_dual = kahler_matrix(PotentialId::DualFs, &w, steps.second)?.real_matrix();

    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
    let pulled_flat = real_det(&pull_matrix(&flat_w, &jac), n)?;
    let hyper = real_det(&omega_b, n)?;
    let pulled_dual = real_det(&pull_matrix(&omega_dual, &jac), n)?;
    let flat = real_det(&flat_z, n)?;
    Ok((rel(pulled_flat, hyper), rel(pulled_dual, flat)))
}

/// Real directional derivative `d/dt f(z + t·w)` by central differences.
fn directional(f: &dyn Fn(&Element) -> Result<f64>, z: &Element, w: &[C64], h: f64) -> Result<f64> {
    let dir = Element::from_parts(z.kind(), w.to_vec());
    let fp = f(&z.axpy(C64::new(h, 0.0), &dir))?;
    let fm = f(&z.axpy(C64::new(-h, 0.0), &dir))?;
    Ok((fp - fm) / (2.0 * h))
}

/// `∂̄f(w) = ½[d_w f + i·d_{iw} f]` for real `f`; this is `Σ ∂f/∂z̄_j conj(w_j)`.
pub fn dbar(f: &dyn Fn(&Element) -> Result<f64>, z: &Element, w: &[C64], h: f64) -> Result<C64> {
    let iw: Vec<C64> = w.iter().map(|c| c * C64::new(0.0, 1.0)).collect();
    let a = directional(f, z, w, h)?;
    let b = directional(f, z, &iw, h)?;
    Ok(C64::new(0.5 * a, 0.5 * b))
}

fn norm_n(x: &Element) -> Result<f64> {
    Ok(crate::spectral::generic_norms(x)?.0)
}

fn norm_n_star(x: &Element) -> Result<f64> {
    Ok(crate::spectral::generic_norms(x)?.1)
}

/// Residuals of `∂̄𝒩/𝒩 = −m₁(z^z, dz)` and `∂̄𝒩*/𝒩* = m₁(z^{-z}, dz)` along
/// the direction `w`.
pub fn check_lemma_a1(z: &Element, w: &[C64], h: f64) -> Result<(f64, f64)> {
    check_step(h)?;
    let h = scaled(h, z);
    let dir = Element::from_parts(z.kind(), w.to_vec());
    let lhs = dbar(&norm_n, z, w, h)? / norm_n(z)?;
    let rhs = -quasi_inverse(z)?.m1(&dir);
    let lhs_star = dbar(&norm_n_star, z, w, h)? / norm_n_star(z)?;
    let rhs_star = dual_quasi_inverse(z)?.m1(&dir);
    Ok(((lhs - rhs).norm(), (lhs_star - rhs_star).norm()))
}

/// `(d(z□z))(w) = ½(D(w, z) + D(z, w))`.
pub fn box_differential(z: &Element, w: &Element) -> Result<LinearOperator> {
    let a = d_operator(w, z)?;
    let b = d_operator(z, w)?;
    LinearOperator::new(z.kind(), (a.matrix() + b.matrix()).scale_real(0.5))
}

/// `G(t) = (1/t)∫₀ᵗ u/(1−u)² du`, continuous at 0 with `G(0) = 0`.
pub fn g_function(t: f64) -> f64 {
    if t.abs() < 0.1 {
        // Σ_{k≥1} k t^k/(k+1)
        let mut sum = 0.0;
        let mut pow = t;
        for k in 1..60 {
            let term = k as f64 * pow / (k + 1) as f64;
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
            pow *= t;
        }
        sum
    } else {
        (1.0 / (1.0 - t) + (-t).ln_1p() - 1.0) / t
    }
}

/// `G*(t) = (1/t)∫₀ᵗ u/(1+u)² du`, with `G*(0) = 0`.
pub fn g_star_function(t: f64) -> f64 {
    if t.abs() < 0.1 {
        let mut sum = 0.0;
        let mut pow = t;
        for k in 1..60 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let term = sign * k as f64 * pow / (k + 1) as f64;
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
            pow *= t;
        }
        sum
    } else {
        (t.ln_1p() + 1.0 / (1.0 + t) - 1.0) / t
    }
}

/// `β(w) = m₁((id − σ z□z)^{-2} z, (d(z□z))(w) z)` for `σ = ±1`.
fn beta(z: &Element, w: &Element, sign: f64) -> Result<C64> {
    let bx = box_operator(z);
    let op = &CMatrix::identity(z.dim()) - &bx.matrix().scale_real(sign);
    let inv2 = hermitian_function(&op, |l| 1.0 / (l * l))?;
    let left = Element::from_parts(z.kind(), inv2.mul_vec(z.coords()));
    let right = box_differential(z, w)?.apply(z);
    Ok(left.m1(&right))
}

/// `γ(z) = m₁(G(z□z) z, z)`, or with `G*` for the dual form.
fn gamma(z: &Element, dual: bool) -> Result<f64> {
    let bx = box_operator(z);
    let g = if dual {
        hermitian_function(bx.matrix(), g_star_function)?
    } else {
        hermitian_function(bx.matrix(), g_function)?
    };
    let gz = Element::from_parts(z.kind(), g.mul_vec(z.coords()));
    Ok(gz.m1(z).re)
}

/// Residuals of `β = dγ` and `β* = dγ*` along the real direction `w`.
pub fn check_beta_exactness(z: &Element, w: &[C64], h: f64) -> Result<(f64, f64)> {
    check_step(h)?;
    let h = scaled(h, z);
    let dir = Element::from_parts(z.kind(), w.to_vec());
    let b = beta(z, &dir, 1.0)?;
    let dg = directional(&|x| gamma(x, false), z, w, h)?;
    let bs = beta(z, &dir, -1.0)?;
    let dgs = directional(&|x| gamma(x, true), z, w, h)?;
    Ok(((b - dg).norm(), (bs - dgs).norm()))
}

fn matrix_power(m: &CMatrix, k: usize) -> CMatrix {
    let mut out = CMatrix::identity(m.rows());
    for _ in 0..k {
        out = out.matmul(m);
    }
    out
}

/// Residual of `m₁(f(z□z)z, (dF(z□z))z) = m₁(f(z□z)z, F′(z□z) d(z□z) z)` for
/// `f = t^p`, `F = t^k`, differentiating along `w`.
pub fn check_lemma_a2(z: &Element, w: &[C64], p: usize, k: usize, h: f64) -> Result<f64> {
    check_step(h)?;
    let h = scaled(h, z);
    let dir = Element::from_parts(z.kind(), w.to_vec());
    let bx = box_operator(z);
    let fz = Element::from_parts(z.kind(), matrix_power(bx.matrix(), p).mul_vec(z.coords()));

    let big_f = |x: &Element| matrix_power(box_operator(x).matrix(), k);
    let plus = big_f(&z.axpy(C64::new(h, 0.0), &dir));
    let minus = big_f(&z.axpy(C64::new(-h, 0.0), &dir));
    let dfz = (&plus - &minus).scale_real(1.0 / (2.0 * h)).mul_vec(z.coords());
    let lhs = fz.m1(&Element::from_parts(z.kind(), dfz));

    let rhs = if k == 0 {
        C64::new(0.0, 0.0)
    } else {
        let dbox = box_differential(z, &dir)?;
        let op = matrix_power(bx.matrix(), k - 1).matmul(dbox.matrix()).scale_real(k as f64);
        fz.m1(&Element::from_parts(z.kind(), op.mul_vec(z.coords())))
    };
    Ok((lhs - rhs).norm())
}

/// Residual of `Ψ*(∂̄p₁) = −∂̄𝒩/𝒩 + ½β` with `p₁ = m₁(z, z)`, along `w`.
/// The left side is `m₁(Ψ(z), dΨ(w))` with `dΨ` by central differences.
pub fn check_pullback_dbar_p1(z: &Element, w: &[C64], h: f64) -> Result<f64> {
    check_step(h)?;
    let h = scaled(h, z);
    let dir = Element::from_parts(z.kind(), w.to_vec());
    let plus = psi_map(&z.axpy(C64::new(h, 0.0), &dir))?;
    let minus = psi_map(&z.axpy(C64::new(-h, 0.0), &dir))?;
    let dpsi = (&plus - &minus).scale_real(1.0 / (2.0 * h));
    let lhs = psi_map(z)?.m1(&dpsi);
    let rhs = quasi_inverse(z)?.m1(&dir) + beta(z, &dir, 1.0)? * 0.5;
    Ok((lhs - rhs).norm())
}

/// Largest entry of `H_Berg − g·H_hyp` on each simple factor, where
/// `H_Berg` is the complex Hessian of `−log det B(z, z)`, relative to
/// `max(1, ‖g·H_hyp‖_F)`.
pub fn check_bergman_metric(z: &Element, h: f64) -> Result<f64> {
    check_step(h)?;
    let gens = genus(z.kind())?;
    let mut worst = 0.0f64;
    for (part, g) in z.split().iter().zip(gens) {
        let hh = scaled(h, part);
        let log_det_b = |x: &Element| -> Result<f64> {
            let d = det(crate::jts::bergman_operator(x, x)?.matrix())?;
            if d.re <= 0.0 {
                return Err(HjtsError::domain("Bergman operator is not positive definite"));
            }
            Ok(-d.re.ln())
        };
        let berg = complex_hessian(&log_det_b, part, hh)?;
        let hyp = kahler_matrix(PotentialId::Hyperbolic, part, h)?.hessian.scale_real(g as f64);
        let diff = (&berg - &hyp).max_abs() / hyp.frobenius_norm().max(1.0);
        worst = worst.max(diff);
    }
    Ok(worst)
}
