//! The Dirichlet Helmholtz inverse `Delta_k^{-1}` and its Green's kernel.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::field::{ComplexField, WavenumberContext};
use crate::grid::SpectralGrid;
use crate::linalg::CSolver;
use crate::C64;

/// Factored discrete `Delta_k = d_yy - k^2` with homogeneous Dirichlet rows.
pub struct HelmholtzSolver {
    pub grid: Arc<SpectralGrid>,
    pub k: i32,
    solver: CSolver,
}

impl HelmholtzSolver {
    pub fn new(grid: Arc<SpectralGrid>, k: i32) -> Self {
        let m = dirichlet_helmholtz_matrix(&grid, k);
        let mc = m.map(|x| C64::new(x, 0.0));
        Self {
            grid,
            k,
            solver: CSolver::new(mc),
        }
    }

    /// Solve `(d_yy - k^2) phi = rhs`, `phi(+-1) = 0`.
    pub fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let n = self.grid.n_points;
        let mut b = rhs.to_vec();
        b[SpectralGrid::UPPER_WALL] = C64::new(0.0, 0.0);
        b[n - 1] = C64::new(0.0, 0.0);
        self.solver.solve(&b)
    }

    /// Dense nodal representation of the inverse (zero rows at the walls).
    pub fn inverse_matrix(&self) -> DMatrix<C64> {
        let n = self.grid.n_points;
        let mut inv = DMatrix::<C64>::zeros(n, n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for j in 1..n - 1 {
            e[j] = C64::new(1.0, 0.0);
            let col = self.solver.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
            e[j] = C64::new(0.0, 0.0);
        }
        // Wall columns are zero: Dirichlet rows ignore the interior forcing
        // there, and the solve never sees wall rhs values.
        inv
    }
}

/// Discrete `Delta_k` with Dirichlet rows replaced by identity rows.
pub fn dirichlet_helmholtz_matrix(grid: &SpectralGrid, k: i32) -> DMatrix<f64> {
    let n = grid.n_points;
    let k2 = (k as f64).powi(2);
    let mut m = grid.diff2_matrix.clone();
    for i in 0..n {
        m[(i, i)] -= k2;
    }
    for j in 0..n {
        m[(0, j)] = 0.0;
        m[(n - 1, j)] = 0.0;
    }
    m[(0, 0)] = 1.0;
    m[(n - 1, n - 1)] = 1.0;
    m
}

/// Green's function of `Delta_k` with homogeneous Dirichlet conditions:
/// the piecewise-sinh closed form, symmetric and vanishing at the walls.
pub fn greens_kernel(ctx: &WavenumberContext, y: f64, yp: f64) -> f64 {
    let k = ctx.kf();
    let (hi, lo) = if y >= yp { (y, yp) } else { (yp, y) };
    -((k * (1.0 - hi)).sinh() * (k * (1.0 + lo)).sinh()) / (k * (2.0 * k).sinh())
}

/// `helmholtz_inverse` as a one-shot operation on a field.
pub fn helmholtz_inverse(ctx: &WavenumberContext, rhs: &ComplexField) -> ComplexField {
    let solver = HelmholtzSolver::new(rhs.grid.clone(), ctx.k);
    ComplexField::new(rhs.grid.clone(), solver.solve(&rhs.values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::l2_norm;
    use crate::grid::build_grid;

    fn cf(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let g = build_grid(32).unwrap();
        let ctx = WavenumberContext::new(1, 1e-3).unwrap();
        let rhs = ComplexField::zeros(g);
        let phi = helmholtz_inverse(&ctx, &rhs);
        assert!(l2_norm(&phi.grid, &phi.values) == 0.0);
    }

    #[test]
    fn manufactured_solution() {
        // phi* = 1 - y^2, rhs = -2 - k^2 (1 - y^2), k = 1.
        let g = build_grid(32).unwrap();
        let ctx = WavenumberContext::new(1, 1e-3).unwrap();
        let rhs = ComplexField::from_fn(g.clone(), |y| cf(-2.0 - (1.0 - y * y)));
        let phi = helmholtz_inverse(&ctx, &rhs);
        for (y, v) in g.nodes.iter().zip(&phi.values) {
            assert!((v.re - (1.0 - y * y)).abs() <= 1e-10);
            assert!(v.im.abs() <= 1e-12);
        }
    }

    /// Composite Simpson on [a, b]; the kernel oracle splits at the
    /// diagonal kink so each piece is smooth.
    fn simpson(a: f64, b: f64, n_panels: usize, f: impl Fn(f64) -> f64) -> f64 {
        if b - a <= 0.0 {
            return 0.0;
        }
        let h = (b - a) / n_panels as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n_panels {
            let x = a + i as f64 * h;
            acc += if i % 2 == 0 { 2.0 } else { 4.0 } * f(x);
        }
        acc * h / 3.0
    }

    #[test]
    fn matches_greens_kernel_quadrature() {
        // Matrix solve against quadrature of the explicit kernel, split at
        // the diagonal where the kernel has a derivative kink.
        let g = build_grid(64).unwrap();
        let ctx = WavenumberContext::new(2, 1e-3).unwrap();
        let rhs_fn = |y: f64| (std::f64::consts::PI * y).cos() * (1.0 + 0.3 * y);
        let rhs = ComplexField::from_fn(g.clone(), |y| cf(rhs_fn(y)));
        let phi = helmholtz_inverse(&ctx, &rhs);
        let mut max_err = 0.0f64;
        for (i, &y) in g.nodes.iter().enumerate() {
            let f = |yp: f64| greens_kernel(&ctx, y, yp) * rhs_fn(yp);
            let acc = simpson(-1.0, y, 2000, f) + simpson(y, 1.0, 2000, f);
            max_err = max_err.max((acc - phi.values[i].re).abs());
        }
        assert!(max_err <= 1e-8, "kernel quadrature mismatch {max_err}");
    }

    #[test]
    fn greens_kernel_properties() {
        let ctx = WavenumberContext::new(1, 1e-3).unwrap();
        assert_eq!(greens_kernel(&ctx, 1.0, 0.3), 0.0);
        // closed-form value at the center
        let expect = -(1f64.sinh().powi(2)) / 2f64.sinh();
        assert!((greens_kernel(&ctx, 0.0, 0.0) - expect).abs() <= 1e-15);

        let ctx4 = WavenumberContext::new(4, 1e-3).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let y = -1.0 + 0.2137 * i as f64 % 2.0;
                let yp = -1.0 + 0.1931 * j as f64 % 2.0;
                let a = greens_kernel(&ctx4, y, yp);
                let b = greens_kernel(&ctx4, yp, y);
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn residual_and_refinement_convergence() {
        // Spectral accuracy: error ratio between n and 2n exceeds 10,
        // measured against the split kernel quadrature oracle.
        let ctx = WavenumberContext::new(2, 1e-3).unwrap();
        let mut errs = Vec::new();
        for n in [12usize, 24] {
            let g = build_grid(n).unwrap();
            let rhs_fn = |y: f64| (3.0 * y).cos();
            let rhs = ComplexField::from_fn(g.clone(), |y| cf(rhs_fn(y)));
            let phi = helmholtz_inverse(&ctx, &rhs);
            let mut max_err = 0.0f64;
            for (i, &y) in g.nodes.iter().enumerate() {
                let f = |yp: f64| greens_kernel(&ctx, y, yp) * rhs_fn(yp);
                let acc = simpson(-1.0, y, 2000, f) + simpson(y, 1.0, 2000, f);
                max_err = max_err.max((phi.values[i].re - acc).abs());
            }
            errs.push(max_err.max(1e-16));
        }
        assert!(
            errs[0] / errs[1] > 10.0,
            "convergence ratio {} too small: {errs:?}",
            errs[0] / errs[1]
        );

        // residual check
        let g = build_grid(48).unwrap();
        let solver = HelmholtzSolver::new(g.clone(), 2);
        let rhs: Vec<C64> = g.nodes.iter().map(|y| cf((2.0 * y).sin())).collect();
        let phi = solver.solve(&rhs);
        let d2 = crate::grid::apply_real_c(&g.diff2_matrix, &phi);
        let mut res = 0.0f64;
        let mut rhs_inf = 0.0f64;
        for i in 1..g.n_points - 1 {
            let r = d2[i] - phi[i] * 4.0 - rhs[i];
            res = res.max(r.norm());
            rhs_inf = rhs_inf.max(rhs[i].norm());
        }
        assert!(res <= 1e-10 * rhs_inf, "residual {res}");
    }
}
