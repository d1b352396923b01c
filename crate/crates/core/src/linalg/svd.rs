use super::matrix::{complete_orthonormal, inner, CMatrix, C64};
use crate::error::{HjtsError, Result};

const MAX_SWEEPS: usize = 60;

/// Thin singular value decomposition `A = U·diag(σ)·Vᴴ` with
/// `k = min(rows, cols)` singular triplets.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> CMatrix {
        let s: Vec<C64> = self.sigma.iter().map(|&x| C64::new(x, 0.0)).collect();
        self.u.matmul(&CMatrix::diag(&s)).matmul(&self.v.adjoint())
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(a: &CMatrix) -> Result<SvdResult> {
    if !a.is_finite() {
        return Err(HjtsError::contract("svd input is not finite"));
    }
    if a.rows() < a.cols() {
        let t = svd_tall(&a.adjoint())?;
        return Ok(SvdResult { u: t.v, sigma: t.sigma, v: t.u });
    }
    svd_tall(a)
}

fn svd_tall(a: &CMatrix) -> Result<SvdResult> {
    let (m, n) = (a.rows(), a.cols());
    // Columns of the working matrix, stored contiguously.
    let mut w: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    let mut worst = 0.0;
    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        worst = 0.0f64;
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha: f64 = w[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma = inner(&w[j], &w[i]); // w_iᴴ w_j
                let g = gamma.norm();
                if g <= 1e-300 {
                    continue;
                }
                let ratio = g / (alpha * beta).sqrt();
                worst = worst.max(ratio);
                if ratio <= 1e-15 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let s_pc = phase.conj() * s;
                let s_p = phase * s;
                rotate(&mut w, i, j, c, s_pc, s_p);
                rotate(&mut v, i, j, c, s_pc, s_p);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(HjtsError::Numerical { routine: "svd", residual: worst });
    }

    let norms: Vec<f64> = w.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let smax = sigma.first().copied().unwrap_or(0.0);

    let mut ucols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for &j in &order {
        if norms[j] > 1e-13 * smax && norms[j] > 1e-300 {
            ucols.push(w[j].iter().map(|z| z / norms[j]).collect());
        } else {
            break;
        }
    }
    complete_orthonormal(&mut ucols, m, n);
    let vcols: Vec<Vec<C64>> = order.iter().map(|&j| v[j].clone()).collect();
    Ok(SvdResult { u: CMatrix::from_columns(m, &ucols), sigma, v: CMatrix::from_columns(n, &vcols) })
}

fn rotate(cols: &mut [Vec<C64>], i: usize, j: usize, c: f64, s_pc: C64, s_p: C64) {
    let (left, right) = cols.split_at_mut(j);
    let (ci, cj) = (&mut left[i], &mut right[0]);
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = a * c - s_pc * b;
        *y = s_p * a + b * c;
    }
}
