use super::eigen::hermitian_eigen;
use super::matrix::{CMatrix, C64};
use super::svd::svd;
use crate::error::{HjtsError, Result};

/// Takagi factorization `A = U·diag(σ)·Uᵀ` of a complex symmetric matrix.
#[derive(Debug, Clone)]
pub struct Takagi {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
}

/// Golden-ratio weight for the simultaneous diagonalization of the real and
/// imaginary parts of a symmetric unitary block.
const MIX: f64 = 0.618_033_988_749_894_8;

/// Computes the factorization from an SVD `A = UΣVᴴ`.
///
/// For symmetric `A` the unitary `W = UᴴV̄` is block diagonal along clusters of
/// equal singular values and symmetric on each nonzero cluster. Taking the
/// symmetric square root `S` of each block gives `A = (US)Σ(US)ᵀ`.
pub fn takagi(a: &CMatrix) -> Result<Takagi> {
    if !a.is_square() {
        return Err(HjtsError::contract("takagi needs a square matrix"));
    }
    let defect = a.symmetric_defect();
    if defect > 1e-12 * a.frobenius_norm().max(1.0) {
        return Err(HjtsError::contract(format!("takagi input is not symmetric (defect {defect:.3e})")));
    }
    let n = a.rows();
    let f = svd(a)?;
    let w = f.u.adjoint().matmul(&f.v.conj());
    let smax = f.sigma.first().copied().unwrap_or(0.0);
    let cluster_tol = 1e-8 * smax;

    let mut s_full = CMatrix::identity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && f.sigma[end - 1] - f.sigma[end] <= cluster_tol {
            end += 1;
        }
        let zero_cluster = f.sigma[start] <= 1e-13 * smax || smax == 0.0;
        if !zero_cluster {
            let k = end - start;
            let wb = w.block(start, start, k, k);
            let sb = symmetric_unitary_sqrt(&wb)?;
            s_full.set_block(start, start, &sb);
        }
        start = end;
    }
    let u = f.u.matmul(&s_full);
    Ok(Takagi { u, sigma: f.sigma })
}

/// Symmetric square root of a (numerically) symmetric unitary matrix.
///
/// `W = X + iY` with `X`, `Y` real symmetric and commuting, so a real
/// orthogonal `O` diagonalizes both; `S = O·diag(√d)·Oᵀ`.
fn symmetric_unitary_sqrt(w: &CMatrix) -> Result<CMatrix> {
    let k = w.rows();
    if k == 1 {
        let d = w[(0, 0)];
        return Ok(CMatrix::diag(&[(d / d.norm()).sqrt()]));
    }
    let sym = (w + &w.transpose()).scale_real(0.5);
    let mixed = CMatrix::from_fn(k, k, |i, j| C64::new(sym[(i, j)].re + MIX * sym[(i, j)].im, 0.0));
    let o = hermitian_eigen(&mixed)?.vectors;
    // Strip any residual imaginary part so that O stays real orthogonal.
    let o = CMatrix::from_fn(k, k, |i, j| C64::new(o[(i, j)].re, 0.0));
    let d = o.transpose().matmul(&sym).matmul(&o);
    let roots: Vec<C64> = (0..k)
        .map(|i| {
            let z = d[(i, i)];
            (z / z.norm()).sqrt()
        })
        .collect();
    Ok(o.matmul(&CMatrix::diag(&roots)).matmul(&o.transpose()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::testutil::{random_matrix, rng};

    fn residual(a: &CMatrix, t: &Takagi) -> f64 {
        let s: Vec<C64> = t.sigma.iter().map(|&x| C64::new(x, 0.0)).collect();
        let back = t.u.matmul(&CMatrix::diag(&s)).matmul(&t.u.transpose());
        (&back - a).frobenius_norm()
    }

    fn random_symmetric(n: usize, seed: u64) -> CMatrix {
        let g = random_matrix(&mut rng(seed), n, n);
        (&g + &g.transpose()).scale_real(0.5)
    }

    #[test]
    fn real_diagonal() {
        let a = CMatrix::diag_real(&[0.4, 0.1]);
        let t = takagi(&a).unwrap();
        assert_eq!(t.sigma, vec![0.4, 0.1]);
        assert!((&t.u - &CMatrix::identity(2)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn imaginary_identity_has_degenerate_values() {
        let a = CMatrix::identity(2).scale(C64::new(0.0, 1.0));
        let t = takagi(&a).unwrap();
        assert!((t.sigma[0] - 1.0).abs() < 1e-14 && (t.sigma[1] - 1.0).abs() < 1e-14);
        let uut = t.u.matmul(&t.u.transpose());
        assert!((&uut - &a).frobenius_norm() < 1e-12);
        assert!(t.u.unitarity_defect() < 1e-10);
    }

    #[test]
    fn random_symmetric_reconstructs() {
        for seed in 0..20 {
            let n = 2 + (seed as usize % 4);
            let a = random_symmetric(n, seed);
            let t = takagi(&a).unwrap();
            assert!(residual(&a, &t) <= 1e-9 * a.frobenius_norm().max(1.0));
            assert!(t.u.unitarity_defect() <= 1e-10);
            assert!(t.sigma.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn clustered_and_singular_values() {
        // U diag(0.7, 0.7, 0.2, 0) Uᵀ for a random unitary U.
        let q = crate::linalg::testutil::random_unitary(&mut rng(9), 4);
        let d = CMatrix::diag_real(&[0.7, 0.7, 0.2, 0.0]);
        let a = q.matmul(&d).matmul(&q.transpose());
        let t = takagi(&a).unwrap();
        assert!(residual(&a, &t) <= 1e-9);
        assert!((t.sigma[0] - 0.7).abs() < 1e-12 && (t.sigma[1] - 0.7).abs() < 1e-12);
        assert!(t.sigma[3].abs() < 1e-12);
    }

    #[test]
    fn non_symmetric_input_is_rejected() {
        let mut a = CMatrix::identity(2);
        a[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(takagi(&a), Err(HjtsError::Contract(_))));
    }
}
