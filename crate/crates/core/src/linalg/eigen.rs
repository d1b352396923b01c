use super::matrix::{CMatrix, C64};
use crate::error::{HjtsError, Result};

const MAX_SWEEPS: usize = 60;

/// Eigendecomposition `A = V·diag(values)·Vᴴ` of a Hermitian matrix, values
/// sorted nonincreasing.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// `V·diag(f(λ))·Vᴴ`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, n, |i, j| (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * fl[k]).sum::<C64>())
    }
}

/// Cyclic two-sided Jacobi eigensolver for Hermitian matrices.
///
/// Only the Hermitian part of `a` is used; callers are expected to check the
/// defect themselves when it matters.
pub fn hermitian_eigen(a: &CMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(HjtsError::contract("eigendecomposition needs a square matrix"));
    }
    if !a.is_finite() {
        return Err(HjtsError::contract("eigendecomposition input is not finite"));
    }
    let n = a.rows();
    let mut m = (a + &a.adjoint()).scale_real(0.5);
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm();
    let tol = 1e-15 * scale.max(f64::MIN_POSITIVE);

    let off = |m: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off(&m) <= tol;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let g = apq.norm();
                if g <= 1e-300 {
                    continue;
                }
                let phase = apq / g;
                let alpha = m[(p, p)].re;
                let beta = m[(q, q)].re;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_pc = phase.conj() * s; // s·e^{-iφ}
                let s_p = phase * s; // s·e^{iφ}

                for k in 0..n {
                    let kp = m[(k, p)];
                    let kq = m[(k, q)];
                    m[(k, p)] = kp * c - s_pc * kq;
                    m[(k, q)] = s_p * kp + kq * c;
                }
                for k in 0..n {
                    let pk = m[(p, k)];
                    let qk = m[(q, k)];
                    m[(p, k)] = pk * c - s_p * qk;
                    m[(q, k)] = s_pc * pk + qk * c;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let kp = v[(k, p)];
                    let kq = v[(k, q)];
                    v[(k, p)] = kp * c - s_pc * kq;
                    v[(k, q)] = s_p * kp + kq * c;
                }
            }
        }
        converged = off(&m) <= tol;
    }
    if !converged {
        return Err(HjtsError::Numerical { routine: "hermitian_eigen", residual: off(&m) });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Rejects inputs that are not Hermitian to `1e-10` relative, then
/// decomposes their Hermitian part.
fn checked_hermitian_eigen(a: &CMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(HjtsError::contract("expected a square matrix"));
    }
    let defect = 0.5 * a.hermitian_defect();
    let scale = a.frobenius_norm();
    if defect > 1e-10 * scale {
        return Err(HjtsError::contract(format!("matrix is not Hermitian: defect {defect:.3e} at norm {scale:.3e}")));
    }
    hermitian_eigen(a)
}

/// `A^t` for Hermitian positive-definite `A`, on the positive real branch.
pub fn hermitian_power(a: &CMatrix, t: f64) -> Result<CMatrix> {
    let eig = checked_hermitian_eigen(a)?;
    if let Some(&min) = eig.values.last() {
        if min <= 0.0 {
            return Err(HjtsError::domain(format!(
                "operator is not positive definite (smallest eigenvalue {min:.3e})"
            )));
        }
    }
    Ok(eig.map(|l| l.powf(t)))
}

/// `f(A)` for Hermitian `A` via its spectral decomposition.
pub fn hermitian_function(a: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    Ok(checked_hermitian_eigen(a)?.map(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::testutil::{random_matrix, rng};

    fn random_pd(n: usize, seed: u64) -> CMatrix {
        let g = random_matrix(&mut rng(seed), n, n);
        &g.matmul(&g.adjoint()) + &CMatrix::identity(n).scale_real(0.1)
    }

    #[test]
    fn identity_is_fixed_by_quarter_power() {
        let p = hermitian_power(&CMatrix::identity(3), -0.25).unwrap();
        assert!((&p - &CMatrix::identity(3)).frobenius_norm() < 1e-15);
    }

    #[test]
    fn diagonal_square_root() {
        let p = hermitian_power(&CMatrix::diag_real(&[4.0, 0.25]), 0.5).unwrap();
        assert!((&p - &CMatrix::diag_real(&[2.0, 0.5])).frobenius_norm() < 1e-15);
    }

    #[test]
    fn square_root_squares_back() {
        for seed in 0..10 {
            let a = random_pd(5, seed);
            let r = hermitian_power(&a, 0.5).unwrap();
            assert!(r.hermitian_defect() < 1e-12);
            let back = r.matmul(&r);
            assert!((&back - &a).frobenius_norm() < 1e-10 * a.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn powers_compose_additively() {
        let a = random_pd(4, 7);
        for &(s, t) in &[(0.5, 0.5), (-0.25, 0.75), (1.0 / 3.0, -1.5)] {
            let lhs = hermitian_power(&a, s).unwrap().matmul(&hermitian_power(&a, t).unwrap());
            let rhs = hermitian_power(&a, s + t).unwrap();
            assert!((&lhs - &rhs).frobenius_norm() < 1e-9);
        }
    }

    #[test]
    fn nonpositive_spectrum_is_a_domain_error() {
        let a = CMatrix::diag_real(&[1.0, -0.5]);
        assert!(matches!(hermitian_power(&a, 0.5), Err(HjtsError::Domain(_))));
        let z = CMatrix::zeros(2, 2);
        assert!(matches!(hermitian_power(&z, -0.25), Err(HjtsError::Domain(_))));
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let mut a = CMatrix::identity(2);
        a[(0, 1)] = C64::new(0.3, 0.0);
        assert!(matches!(hermitian_power(&a, 0.5), Err(HjtsError::Contract(_))));
    }

    #[test]
    fn eigenpairs_reconstruct() {
        let g = random_matrix(&mut rng(3), 6, 6);
        let h = &g + &g.adjoint();
        let eig = hermitian_eigen(&h).unwrap();
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        assert!(eig.vectors.unitarity_defect() < 1e-12);
        let back = eig.map(|l| l);
        assert!((&back - &h).frobenius_norm() < 1e-12 * h.frobenius_norm());
    }
}
