//! Complex nodal fields, the per-mode parameter context, and the weighted
//! norms used by every estimate in the toolkit.

use std::sync::Arc;

use crate::grid::SpectralGrid;
use crate::{CoreError, Result, C64};

/// Viscosity and wavenumber of one Fourier mode, with the derived
/// boundary-layer scale `L = nu^{-1/3} |k|^{1/3}`.
#[derive(Debug, Clone, Copy)]
pub struct WavenumberContext {
    pub k: i32,
    pub nu: f64,
    pub l_scale: f64,
}

impl WavenumberContext {
    pub fn new(k: i32, nu: f64) -> Result<Self> {
        if k == 0 {
            return Err(CoreError::ZeroWavenumber);
        }
        assert!(nu > 0.0, "viscosity must be positive");
        let l_scale = nu.powf(-1.0 / 3.0) * (k.abs() as f64).powf(1.0 / 3.0);
        Ok(Self { k, nu, l_scale })
    }

    pub fn kf(&self) -> f64 {
        self.k as f64
    }

    pub fn k_abs(&self) -> f64 {
        self.k.abs() as f64
    }

    /// Boundary weight `rho_k = min(L (1 - |y|), 1)` at a node.
    pub fn rho(&self, y: f64) -> f64 {
        (self.l_scale * (1.0 - y.abs())).min(1.0)
    }
}

/// Complex nodal values on a shared grid.
#[derive(Debug, Clone)]
pub struct ComplexField {
    pub grid: Arc<SpectralGrid>,
    pub values: Vec<C64>,
}

impl ComplexField {
    pub fn new(grid: Arc<SpectralGrid>, values: Vec<C64>) -> Self {
        assert_eq!(values.len(), grid.n_points);
        Self { grid, values }
    }

    pub fn zeros(grid: Arc<SpectralGrid>) -> Self {
        let n = grid.n_points;
        Self::new(grid, vec![C64::new(0.0, 0.0); n])
    }

    pub fn from_fn(grid: Arc<SpectralGrid>, f: impl Fn(f64) -> C64) -> Self {
        let values = grid.nodes.iter().map(|&y| f(y)).collect();
        Self::new(grid, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Weighted L2 inner product `<f, g> = int f conj(g)`.
pub fn inner(grid: &SpectralGrid, f: &[C64], g: &[C64]) -> C64 {
    grid.quad_weights
        .iter()
        .zip(f.iter().zip(g))
        .map(|(w, (a, b))| a * b.conj() * *w)
        .sum()
}

/// L2 norm by Clenshaw-Curtis quadrature.
pub fn l2_norm(grid: &SpectralGrid, f: &[C64]) -> f64 {
    l2_norm_sq(grid, f).sqrt()
}

pub fn l2_norm_sq(grid: &SpectralGrid, f: &[C64]) -> f64 {
    grid.quad_weights
        .iter()
        .zip(f)
        .map(|(w, v)| w * v.norm_sqr())
        .sum()
}

/// Weighted L2 norm with a pointwise real weight.
pub fn weighted_l2_norm_sq(grid: &SpectralGrid, weight: impl Fn(f64) -> f64, f: &[C64]) -> f64 {
    grid.quad_weights
        .iter()
        .zip(grid.nodes.iter().zip(f))
        .map(|(w, (&y, v))| w * weight(y) * v.norm_sqr())
        .sum()
}

/// `||nabla_k f||^2 = ||d_y f||^2 + k^2 ||f||^2`.
pub fn nabla_k_norm_sq(grid: &SpectralGrid, k: i32, f: &[C64]) -> f64 {
    let df = grid.diff_c(f);
    l2_norm_sq(grid, &df) + (k as f64).powi(2) * l2_norm_sq(grid, f)
}

/// The `H_k^m` norm `(sum_{a+b=m} || |k|^a d_y^b f ||^2)^{1/2}` for
/// `m` in `{0, 1, 2}`.
pub fn hk_norm(grid: &SpectralGrid, f: &[C64], k: i32, order: usize) -> f64 {
    assert!(order <= 2, "hk_norm supports orders 0, 1, 2");
    let ka = (k.abs()) as f64;
    match order {
        0 => l2_norm(grid, f),
        1 => nabla_k_norm_sq(grid, k, f).sqrt(),
        _ => {
            let df = grid.diff_c(f);
            let d2f = grid.diff_c(&df);
            (ka.powi(4) * l2_norm_sq(grid, f)
                + ka.powi(2) * l2_norm_sq(grid, &df)
                + l2_norm_sq(grid, &d2f))
            .sqrt()
        }
    }
}

/// Boundary moment `int e^{sign k y} f(y) dy` by Clenshaw-Curtis quadrature.
///
/// Vanishing of both moments is equivalent to the no-slip boundary
/// condition on the stream function.
pub fn boundary_moment(grid: &SpectralGrid, f: &[C64], k: i32, sign: i8) -> C64 {
    let s = if sign >= 0 { 1.0 } else { -1.0 };
    let kf = k as f64;
    grid.quad_weights
        .iter()
        .zip(grid.nodes.iter().zip(f))
        .map(|(w, (&y, v))| v * (*w * (s * kf * y).exp()))
        .sum()
}

/// Components of the Z-norm; stored separately so ledgers can recombine
/// them bit-stably.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZNormParts {
    /// `|| rho_k^{1/2} w ||^2`
    pub rho_l2_sq: f64,
    /// `|| nabla_k Delta_k^{-1} w ||^2`
    pub velocity_l2_sq: f64,
    /// `|| w ||^2`
    pub l2_sq: f64,
}

impl ZNormParts {
    /// `||w||_Z^2 = nu^{1/3}|k|^{2/3} rho-part + |k|^2 velocity-part
    ///  + nu^{1/2}|k| L2-part`.
    pub fn z_norm_sq(&self, ctx: &WavenumberContext) -> f64 {
        let ka = ctx.k_abs();
        ctx.nu.powf(1.0 / 3.0) * ka.powf(2.0 / 3.0) * self.rho_l2_sq
            + ka * ka * self.velocity_l2_sq
            + ctx.nu.sqrt() * ka * self.l2_sq
    }
}
