//! Seeded random probe fields shared by tests and the experiment harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::SpectralGrid;
use crate::C64;

/// Counter-based deterministic generator used for all random probes.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random smooth field: Chebyshev modes with exponentially decaying
/// amplitudes. Smoothness keeps random probes inside the operators'
/// natural domain.
pub fn smooth_field(grid: &SpectralGrid, rng: &mut impl Rng, modes: usize, decay: f64) -> Vec<C64> {
    let n = grid.n_points;
    let mut coeffs = Vec::with_capacity(modes);
    for m in 0..modes {
        let a = rng.gen_range(-1.0..1.0);
        let b = rng.gen_range(-1.0..1.0);
        coeffs.push(C64::new(a, b) * (-decay * m as f64).exp());
    }
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (i, &y) in grid.nodes.iter().enumerate() {
        let theta = y.clamp(-1.0, 1.0).acos();
        for (m, c) in coeffs.iter().enumerate() {
            out[i] += c * (m as f64 * theta).cos();
        }
    }
    out
}

/// Random smooth field vanishing at both walls.
pub fn smooth_field_dirichlet(
    grid: &SpectralGrid,
    rng: &mut impl Rng,
    modes: usize,
    decay: f64,
) -> Vec<C64> {
    let mut f = smooth_field(grid, rng, modes, decay);
    for (v, &y) in f.iter_mut().zip(&grid.nodes) {
        *v *= 1.0 - y * y;
    }
    f
}

/// White nodal noise; used where only algebraic matrix structure matters.
pub fn rough_field(grid: &SpectralGrid, rng: &mut impl Rng) -> Vec<C64> {
    (0..grid.n_points)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}
