//! Chebyshev-Gauss-Lobatto collocation on `[-1, 1]`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::{CoreError, Result, C64};

/// One-dimensional Chebyshev-Gauss-Lobatto discretization of `[-1, 1]`.
///
/// Nodes are ordered strictly decreasing from `+1` to `-1` so that index 0
/// is the upper wall and index `n_points - 1` the lower wall. Quadrature
/// weights are Clenshaw-Curtis.
#[derive(Debug)]
pub struct SpectralGrid {
    pub n_points: usize,
    pub nodes: Vec<f64>,
    pub diff_matrix: DMatrix<f64>,
    pub quad_weights: Vec<f64>,
    /// Second-derivative operator, cached because every solver needs it.
    pub diff2_matrix: DMatrix<f64>,
}

impl SpectralGrid {
    /// Index of the upper-wall node `y = +1`.
    pub const UPPER_WALL: usize = 0;

    /// Index of the lower-wall node `y = -1`.
    pub fn lower_wall(&self) -> usize {
        self.n_points - 1
    }

    /// Quadrature of a real nodal function.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.quad_weights
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .sum()
    }

    /// Quadrature of a complex nodal function.
    pub fn integrate_c(&self, values: &[C64]) -> C64 {
        self.quad_weights
            .iter()
            .zip(values)
            .map(|(w, v)| v * *w)
            .sum()
    }

    /// Spectral derivative of real nodal values.
    pub fn diff(&self, values: &[f64]) -> Vec<f64> {
        apply_real(&self.diff_matrix, values)
    }

    /// Spectral derivative of complex nodal values.
    pub fn diff_c(&self, values: &[C64]) -> Vec<C64> {
        apply_real_c(&self.diff_matrix, values)
    }
}

/// Apply a real dense matrix to real nodal values.
pub fn apply_real(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    let n = m.nrows();
    let mut out = vec![0.0; n];
    // nalgebra stores column-major; accumulate column by column.
    for j in 0..m.ncols() {
        let col = m.column(j);
        let vj = v[j];
        for i in 0..n {
            out[i] += col[i] * vj;
        }
    }
    out
}

/// Apply a real dense matrix to complex nodal values.
pub fn apply_real_c(m: &DMatrix<f64>, v: &[C64]) -> Vec<C64> {
    let n = m.nrows();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for j in 0..m.ncols() {
        let col = m.column(j);
        let vj = v[j];
        for i in 0..n {
            out[i] += vj * col[i];
        }
    }
    out
}

/// Build a Chebyshev-Gauss-Lobatto grid with `n_points` collocation points.
///
/// Rejects `n_points < 8`; nothing in this toolkit is meaningful on a
/// coarser grid.
pub fn build_grid(n_points: usize) -> Result<Arc<SpectralGrid>> {
    if n_points < 8 {
        return Err(CoreError::GridTooCoarse(n_points));
    }
    let n = n_points;
    let nmax = n - 1;

    // The sine form keeps the node set exactly symmetric about zero.
    let nodes: Vec<f64> = (0..n)
        .map(|j| {
            let a = (nmax as f64 - 2.0 * j as f64) * PI / (2.0 * nmax as f64);
            a.sin()
        })
        .collect();

    let mut diff = DMatrix::<f64>::zeros(n, n);
    let c = |i: usize| -> f64 {
        if i == 0 || i == nmax {
            2.0
        } else {
            1.0
        }
    };
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                diff[(i, j)] = c(i) / c(j) * sign / (nodes[i] - nodes[j]);
            }
        }
    }
    // Negative-sum trick for the diagonal; more accurate than the closed form.
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            if i != j {
                s += diff[(i, j)];
            }
        }
        diff[(i, i)] = -s;
    }

    let quad_weights = clenshaw_curtis(nmax);
    let diff2 = &diff * &diff;

    Ok(Arc::new(SpectralGrid {
        n_points: n,
        nodes,
        diff_matrix: diff,
        quad_weights,
        diff2_matrix: diff2,
    }))
}

/// Clenshaw-Curtis weights for the `nmax + 1` Lobatto nodes.
fn clenshaw_curtis(nmax: usize) -> Vec<f64> {
    let n = nmax;
    let mut w = vec![0.0; n + 1];
    let theta: Vec<f64> = (0..=n).map(|j| PI * j as f64 / n as f64).collect();
    let mut v = vec![1.0; n - 1];
    if n % 2 == 0 {
        w[0] = 1.0 / (n * n - 1) as f64;
        w[n] = w[0];
        for k in 1..n / 2 {
            for (idx, vi) in v.iter_mut().enumerate() {
                let th = theta[idx + 1];
                *vi -= 2.0 * (2.0 * k as f64 * th).cos() / (4 * k * k - 1) as f64;
            }
        }
        for (idx, vi) in v.iter_mut().enumerate() {
            let th = theta[idx + 1];
            *vi -= (n as f64 * th).cos() / (n * n - 1) as f64;
        }
    } else {
        w[0] = 1.0 / (n * n) as f64;
        w[n] = w[0];
        for k in 1..=(n - 1) / 2 {
            for (idx, vi) in v.iter_mut().enumerate() {
                let th = theta[idx + 1];
                *vi -= 2.0 * (2.0 * k as f64 * th).cos() / (4 * k * k - 1) as f64;
            }
        }
    }
    for (idx, vi) in v.iter().enumerate() {
        w[idx + 1] = 2.0 * vi / n as f64;
    }
    w
}
