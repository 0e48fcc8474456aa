//! Dense complex linear solves with one step of iterative refinement and a
//! cheap conditioning estimate.

use nalgebra::{DMatrix, DVector};

use crate::{CoreError, Result, C64};

/// LU-factored dense complex system. Keeps the original matrix around for
/// residual refinement.
pub struct CSolver {
    matrix: DMatrix<C64>,
    lu: nalgebra::linalg::LU<C64, nalgebra::Dyn, nalgebra::Dyn>,
    rcond: f64,
}

impl CSolver {
    /// Factor the matrix. `rcond` here is the ratio of smallest to largest
    /// pivot magnitude, a cheap proxy adequate for detecting proximity to
    /// the discrete spectrum.
    pub fn new(matrix: DMatrix<C64>) -> Self {
        let lu = matrix.clone().lu();
        let diag = lu.u().diagonal();
        let mut dmin = f64::INFINITY;
        let mut dmax = 0.0f64;
        for d in diag.iter() {
            let m = d.norm();
            dmin = dmin.min(m);
            dmax = dmax.max(m);
        }
        let rcond = if dmax > 0.0 { dmin / dmax } else { 0.0 };
        Self { matrix, lu, rcond }
    }

    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    /// Error out when the factorization signals near-singularity.
    pub fn check_conditioning(&self, threshold: f64) -> Result<()> {
        if self.rcond < threshold {
            Err(CoreError::IllConditioned { rcond: self.rcond })
        } else {
            Ok(())
        }
    }

    /// Solve with one step of iterative refinement.
    pub fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let b = DVector::from_column_slice(rhs);
        let mut x = self
            .lu
            .solve(&b)
            .expect("LU solve failed on factored matrix");
        let r = &b - &self.matrix * &x;
        if let Some(dx) = self.lu.solve(&r) {
            x += dx;
        }
        x.as_slice().to_vec()
    }

    /// Residual `||A x - b||_inf` for diagnostics.
    pub fn residual_inf(&self, x: &[C64], rhs: &[C64]) -> f64 {
        let xv = DVector::from_column_slice(x);
        let bv = DVector::from_column_slice(rhs);
        let r = &self.matrix * &xv - bv;
        r.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Dense inverse of a complex matrix (used for the Dirichlet Helmholtz
/// inverse as an explicit operator).
pub fn invert(matrix: &DMatrix<C64>) -> DMatrix<C64> {
    matrix
        .clone()
        .lu()
        .try_inverse()
        .expect("matrix not invertible")
}

/// Largest singular value of a real matrix in the weighted inner product
/// `<f, g>_W = sum w_i f_i g_i`, by power iteration on `B^T B` with
/// `B = W^{1/2} M W^{-1/2}`.
pub fn weighted_operator_norm(m: &DMatrix<f64>, weights: &[f64], iters: usize) -> f64 {
    let n = m.nrows();
    let sqw: Vec<f64> = weights.iter().map(|w| w.max(0.0).sqrt()).collect();
    // Endpoint weights are positive for Clenshaw-Curtis, so the scaling is
    // well defined.
    let mut b = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] = sqw[i] * m[(i, j)] / sqw[j];
        }
    }
    let bt = b.transpose();
    let mut v = DVector::<f64>::from_element(n, 1.0);
    v /= v.norm();
    let mut lambda = 0.0;
    for _ in 0..iters {
        let w = &bt * (&b * &v);
        let nrm = w.norm();
        if nrm == 0.0 {
            return 0.0;
        }
        lambda = nrm;
        v = w / nrm;
    }
    lambda.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_small_system() {
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(2.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0),
                C64::new(3.0, 0.0),
            ],
        );
        let s = CSolver::new(a);
        let x = s.solve(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        // x = A^{-1} e1 where A = [[2, i], [-i, 3]]; det = 5.
        assert!((x[0] - C64::new(0.6, 0.0)).norm() < 1e-14);
        assert!((x[1] - C64::new(0.0, 0.2)).norm() < 1e-14);
        assert!(s.rcond() > 1e-2);
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -4.0, 2.0]));
        let w = vec![0.5, 1.0, 0.5];
        let nrm = weighted_operator_norm(&m, &w, 100);
        assert!((nrm - 4.0).abs() < 1e-10);
    }
}
