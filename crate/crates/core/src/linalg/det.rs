use super::matrix::{CMatrix, C64};
use crate::error::{HjtsError, Result};

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(a: &CMatrix) -> Result<C64> {
    if !a.is_square() {
        return Err(HjtsError::contract("determinant of a non-square matrix"));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut acc = C64::new(1.0, 0.0);
    for k in 0..n {
        let pivot = (k..n).max_by(|&i, &j| m[(i, k)].norm().total_cmp(&m[(j, k)].norm())).unwrap();
        if m[(pivot, k)].norm() == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        if pivot != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(pivot, j)];
                m[(pivot, j)] = t;
            }
            acc = -acc;
        }
        let p = m[(k, k)];
        acc *= p;
        for i in k + 1..n {
            let f = m[(i, k)] / p;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let t = m[(k, j)];
                m[(i, j)] -= f * t;
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(det(&CMatrix::identity(3)).unwrap(), C64::new(1.0, 0.0));
        let d = det(&CMatrix::diag_real(&[0.64, 0.64])).unwrap();
        assert!((d - C64::new(0.4096, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn row_swap_flips_sign() {
        let p = CMatrix::from_real(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(det(&p).unwrap(), C64::new(-1.0, 0.0));
    }

    #[test]
    fn triangular_is_product_of_diagonal() {
        let t =
            CMatrix::from_fn(3, 3, |i, j| if j < i { C64::new(0.0, 0.0) } else { C64::new(1.0 + i as f64, j as f64) });
        let expect = t[(0, 0)] * t[(1, 1)] * t[(2, 2)];
        assert!((det(&t).unwrap() - expect).norm() < 1e-14);
    }

    #[test]
    fn singular_gives_zero() {
        let s = CMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(det(&s).unwrap().norm() < 1e-15);
    }
}
