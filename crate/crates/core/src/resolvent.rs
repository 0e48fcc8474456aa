//! The frozen-shear resolvent problem: Navier-boundary solves, Airy wall
//! correctors with their Evans-function assembly, the no-slip solution by
//! two independent routes, and the estimate probes built on them.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::airy::{a0_integral, airy_ai, Scaled};
use crate::field::{l2_norm, nabla_k_norm_sq, ComplexField, WavenumberContext};
use crate::grid::{apply_real_c, SpectralGrid};
use crate::helmholtz::HelmholtzSolver;
use crate::linalg::CSolver;
use crate::shear::ShearProfile;
use crate::{CoreError, Result, C64};

/// Reciprocal-condition threshold below which a spectral parameter is
/// declared too close to the discrete spectrum.
pub const RCOND_THRESHOLD: f64 = 1e-12;

/// How the forcing should be measured in the estimate probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForcingClass {
    L2,
    /// Forcing vanishing at the walls, measured through `||nabla_k F||`.
    H1Zero,
    /// Measured through the variational `H^{-1}` norm.
    HMinus1,
}

/// One frozen-resolvent problem at a fixed `(nu, k, lambda)`.
pub struct ResolventProblem {
    pub ctx: WavenumberContext,
    pub grid: Arc<SpectralGrid>,
    pub shear: ShearProfile,
    pub lambda: C64,
    pub forcing: ComplexField,
    pub forcing_class: ForcingClass,
}

impl ResolventProblem {
    /// Spectral half-plane constraint `k Im(lambda) >= -delta0 nu^{1/3} |k|^{2/3}`.
    pub fn meets_spectral_constraint(&self, delta0: f64) -> bool {
        self.ctx.kf() * self.lambda.im
            >= -delta0 * self.ctx.nu.powf(1.0 / 3.0) * self.ctx.k_abs().powf(2.0 / 3.0)
    }

    /// Low-frequency regime `nu k^2 <= ||U'||_inf`.
    pub fn low_frequency(&self) -> bool {
        self.ctx.nu * self.ctx.kf().powi(2) <= self.shear.du_inf()
    }
}

/// Shared dense operators for one `(grid, ctx, shear)`; reusable across the
/// whole lambda sweep.
pub struct ResolventWorkspace {
    pub grid: Arc<SpectralGrid>,
    pub ctx: WavenumberContext,
    pub helm: HelmholtzSolver,
    /// `-nu Delta_k + ik diag(U) - ik diag(U'') Ginv`, no boundary rows.
    base: DMatrix<C64>,
}

impl ResolventWorkspace {
    pub fn new(grid: Arc<SpectralGrid>, ctx: WavenumberContext, shear: &ShearProfile) -> Self {
        let n = grid.n_points;
        let helm = HelmholtzSolver::new(grid.clone(), ctx.k);
        let ginv = helm.inverse_matrix();
        let nu = ctx.nu;
        let k = ctx.kf();
        let ik = C64::new(0.0, k);
        let mut base = DMatrix::<C64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let lap = grid.diff2_matrix[(i, j)] - if i == j { k * k } else { 0.0 };
                base[(i, j)] = C64::new(-nu * lap, 0.0) - ik * shear.d2u[i] * ginv[(i, j)];
            }
            base[(i, i)] += ik * shear.u[i];
        }
        Self {
            grid,
            ctx,
            helm,
            base,
        }
    }

    /// Operator with Dirichlet rows, shifted by `-ik lambda` on the interior.
    fn dirichlet_operator(&self, lambda: C64) -> DMatrix<C64> {
        let n = self.grid.n_points;
        let ik_lambda = C64::new(0.0, self.ctx.kf()) * lambda;
        let mut a = self.base.clone();
        for i in 0..n {
            a[(i, i)] -= ik_lambda;
        }
        for j in 0..n {
            a[(0, j)] = C64::new(0.0, 0.0);
            a[(n - 1, j)] = C64::new(0.0, 0.0);
        }
        a[(0, 0)] = C64::new(1.0, 0.0);
        a[(n - 1, n - 1)] = C64::new(1.0, 0.0);
        a
    }

    /// Bordered no-slip operator: PDE rows everywhere, unit border columns
    /// at the wall nodes, and the two exponential moment rows.
    fn noslip_operator(&self, lambda: C64) -> DMatrix<C64> {
        let n = self.grid.n_points;
        let ik_lambda = C64::new(0.0, self.ctx.kf()) * lambda;
        let mut m = DMatrix::<C64>::zeros(n + 2, n + 2);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.base[(i, j)];
            }
            m[(i, i)] -= ik_lambda;
        }
        m[(0, n)] = C64::new(1.0, 0.0);
        m[(n - 1, n + 1)] = C64::new(1.0, 0.0);
        let k = self.ctx.kf();
        for j in 0..n {
            let w = self.grid.quad_weights[j];
            let y = self.grid.nodes[j];
            m[(n, j)] = C64::new(w * (k * y).exp(), 0.0);
            m[(n + 1, j)] = C64::new(w * (-k * y).exp(), 0.0);
        }
        m
    }

    /// Variational `H^{-1}` norm through one Dirichlet solve.
    pub fn h_minus1_norm(&self, f: &[C64]) -> f64 {
        let neg: Vec<C64> = f.iter().map(|c| -c).collect();
        let v = self.helm.solve(&neg);
        nabla_k_norm_sq(&self.grid, self.ctx.k, &v).sqrt()
    }
}

/// Solution of the Navier-boundary problem.
pub struct NavierSolution {
    pub w_na: ComplexField,
    pub phi_na: ComplexField,
    /// The graded energy functional of the solution pair.
    pub e_functional: f64,
    /// `|| (U - lambda) w - U'' phi ||_{L^2}`.
    pub imbalance: f64,
    /// Linear-system residual relative to `||F||`.
    pub residual: f64,
}

/// `E[w, phi] = nu^{1/6}|k|^{4/3}||nabla phi|| + nu^{2/3}|k|^{1/3}||nabla w||
/// + nu^{1/3}|k|^{2/3}||w||`.
pub fn graded_energy(grid: &SpectralGrid, ctx: &WavenumberContext, w: &[C64], phi: &[C64]) -> f64 {
    let nu = ctx.nu;
    let ka = ctx.k_abs();
    nu.powf(1.0 / 6.0) * ka.powf(4.0 / 3.0) * nabla_k_norm_sq(grid, ctx.k, phi).sqrt()
        + nu.powf(2.0 / 3.0) * ka.powf(1.0 / 3.0) * nabla_k_norm_sq(grid, ctx.k, w).sqrt()
        + nu.powf(1.0 / 3.0) * ka.powf(2.0 / 3.0) * l2_norm(grid, w)
}

/// Solve the Navier-boundary resolvent problem
/// `-nu Delta_k w + ik(U - lambda)w - ik U'' Delta_k^{-1} w = F, w(+-1)=0`.
pub fn solve_navier(ws: &ResolventWorkspace, problem: &ResolventProblem) -> Result<NavierSolution> {
    let grid = &ws.grid;
    let n = grid.n_points;
    let a = ws.dirichlet_operator(problem.lambda);
    let solver = CSolver::new(a);
    solver.check_conditioning(RCOND_THRESHOLD)?;
    let mut rhs = problem.forcing.values.clone();
    rhs[0] = C64::new(0.0, 0.0);
    rhs[n - 1] = C64::new(0.0, 0.0);
    let w = solver.solve(&rhs);
    let f_norm = l2_norm(grid, &problem.forcing.values);
    let residual = if f_norm > 0.0 {
        solver.residual_inf(&w, &rhs) / f_norm
    } else {
        0.0
    };
    let phi = ws.helm.solve(&w);
    let e_functional = graded_energy(grid, &problem.ctx, &w, &phi);
    let imbalance = imbalance_norm(grid, &problem.shear, problem.lambda, &w, &phi);
    Ok(NavierSolution {
        w_na: ComplexField::new(grid.clone(), w),
        phi_na: ComplexField::new(grid.clone(), phi),
        e_functional,
        imbalance,
        residual,
    })
}

fn imbalance_norm(
    grid: &SpectralGrid,
    shear: &ShearProfile,
    lambda: C64,
    w: &[C64],
    phi: &[C64],
) -> f64 {
    let vals: Vec<C64> = (0..grid.n_points)
        .map(|i| (C64::new(shear.u[i], 0.0) - lambda) * w[i] - shear.d2u[i] * phi[i])
        .collect();
    l2_norm(grid, &vals)
}

/// Ratio `|| (U - lambda) w_Na - U'' phi_Na || / ||F||` in the low-frequency
/// regime.
pub fn imbalance_probe(ws: &ResolventWorkspace, problem: &ResolventProblem) -> Result<f64> {
    if !problem.low_frequency() {
        return Err(CoreError::RegimeViolation(format!(
            "imbalance probe requires nu k^2 <= ||U'||_inf (nu k^2 = {:.3e})",
            problem.ctx.nu * problem.ctx.kf().powi(2)
        )));
    }
    let sol = solve_navier(ws, problem)?;
    let f_norm = l2_norm(&ws.grid, &problem.forcing.values);
    Ok(if f_norm > 0.0 {
        sol.imbalance / f_norm
    } else {
        0.0
    })
}

/// High-frequency estimate ratios
/// `(nu k^2 ||w||/||F||, nu k^2 ||u||/||F||_{H^{-1}}, nu |k| ||w||/||F||_{H^{-1}})`.
pub fn high_freq_probe(
    ws: &ResolventWorkspace,
    problem: &ResolventProblem,
) -> Result<(f64, f64, f64)> {
    if problem.low_frequency() {
        return Err(CoreError::RegimeViolation(
            "high-frequency probe requires nu k^2 >= ||U'||_inf".into(),
        ));
    }
    let sol = solve_navier(ws, problem)?;
    let f_norm = l2_norm(&ws.grid, &problem.forcing.values);
    if f_norm == 0.0 {
        return Ok((0.0, 0.0, 0.0));
    }
    let fm1 = ws.h_minus1_norm(&problem.forcing.values);
    let nu = problem.ctx.nu;
    let k2 = problem.ctx.kf().powi(2);
    let w_norm = l2_norm(&ws.grid, &sol.w_na.values);
    let u_norm = nabla_k_norm_sq(&ws.grid, problem.ctx.k, &sol.phi_na.values).sqrt();
    Ok((
        nu * k2 * w_norm / f_norm,
        nu * k2 * u_norm / fm1,
        nu * problem.ctx.k_abs() * w_norm / fm1,
    ))
}

/// A wall corrector profile stored as `field * exp(log_scale)`.
#[derive(Debug, Clone)]
pub struct ScaledField {
    pub field: ComplexField,
    pub log_scale: f64,
}

/// Evans coefficients, scaled. `a_mm = A_{--}` (minus corrector against the
/// lower moment), `a_mp = A_{-+}`, `a_pm = A_{+-}`, `a_pp = A_{++}`.
#[derive(Debug, Clone, Copy)]
pub struct EvansCoefficients {
    pub a_mm: Scaled,
    pub a_mp: Scaled,
    pub a_pm: Scaled,
    pub a_pp: Scaled,
    pub det: Scaled,
}

/// Airy wall correctors, their remainders, and the assembled unit
/// correctors with Evans coefficients.
pub struct CorrectorPair {
    /// Approximate correctors, normalized to unit max modulus, with the
    /// true magnitude in the log scale.
    pub w_ap_plus: ScaledField,
    pub w_ap_minus: ScaledField,
    /// Remainders on the same scale as the approximate parts.
    pub w_re_plus: Option<ComplexField>,
    pub w_re_minus: Option<ComplexField>,
    /// Unit boundary correctors (unscaled; their size is physical).
    pub w_plus: Option<ComplexField>,
    pub w_minus: Option<ComplexField>,
    pub coeffs: Option<EvansCoefficients>,
    pub l_plus: f64,
    pub l_minus: f64,
    pub d_plus: C64,
    pub d_minus: C64,
    /// Interior residual of the constant-shear Airy equation, relative.
    pub ode_residual_plus: f64,
    pub ode_residual_minus: f64,
    /// Ray integrals at the wall corner arguments.
    pub a0_minus_corner: Scaled,
    pub a0_plus_corner: Scaled,
    /// Max deviation of `d_y Phi_pm` from its unit/zero targets.
    pub bc_defect: Option<f64>,
}

/// Evaluate the approximate Airy correctors for one problem.
pub fn airy_correctors(
    ws: &ResolventWorkspace,
    problem: &ResolventProblem,
) -> Result<CorrectorPair> {
    let grid = &ws.grid;
    let n = grid.n_points;
    let ctx = &problem.ctx;
    if ctx.k < 1 {
        return Err(CoreError::RegimeViolation(
            "wall correctors are built for k >= 1; negative modes follow by conjugation".into(),
        ));
    }
    let k = ctx.kf();
    let nu = ctx.nu;
    let dup = problem.shear.du[0];
    let dum = problem.shear.du[n - 1];
    if dup <= 0.0 || dum <= 0.0 {
        return Err(CoreError::RegimeViolation(
            "wall correctors require U'(+-1) > 0".into(),
        ));
    }
    let l_plus = (nu / (dup * k)).powf(-1.0 / 3.0);
    let l_minus = (nu / (dum * k)).powf(-1.0 / 3.0);
    let u_wall_p = problem.shear.u[0];
    let u_wall_m = problem.shear.u[n - 1];
    let i_nu_k = C64::new(0.0, nu * k);
    let d_plus = (C64::new(u_wall_p - dup, 0.0) - problem.lambda - i_nu_k) / dup;
    let d_minus = (C64::new(u_wall_m + dum, 0.0) - problem.lambda - i_nu_k) / dum;

    let phase_plus = C64::from_polar(1.0, std::f64::consts::PI * (0.5 + 1.0 / 3.0));
    let phase_minus = C64::from_polar(1.0, std::f64::consts::PI * (0.5 - 1.0 / 3.0));

    let eval = |l: f64, d: C64, phase: C64| -> Result<ScaledField> {
        let mut vals = Vec::with_capacity(n);
        for &y in &grid.nodes {
            vals.push(airy_ai((C64::new(y, 0.0) + d) * l * phase)?);
        }
        let max_log = vals
            .iter()
            .map(|s| s.log_abs())
            .fold(f64::NEG_INFINITY, f64::max);
        let field: Vec<C64> = vals
            .iter()
            .map(|s| s.m * (s.log - max_log).exp())
            .collect();
        Ok(ScaledField {
            field: ComplexField::new(grid.clone(), field),
            log_scale: max_log,
        })
    };

    let w_ap_plus = eval(l_plus, d_plus, phase_plus)?;
    let w_ap_minus = eval(l_minus, d_minus, phase_minus)?;

    // Interior residual of the linearized-shear equation
    // -nu(d_yy - k^2) W + ik (U(wall) + U'(wall)(y -/+ 1) - lambda) W = 0;
    // the i nu k shift inside d_pm supplies the +nu k^2 term.
    let ode_residual = |w: &ScaledField, wall_val: f64, wall_du: f64, upper: bool| -> f64 {
        let d2 = apply_real_c(&grid.diff2_matrix, &w.field.values);
        let mut res = 0.0;
        let mut scale = 0.0;
        for i in 1..n - 1 {
            let y = grid.nodes[i];
            let lin = wall_val + wall_du * (y - if upper { 1.0 } else { -1.0 });
            let coeff = C64::new(0.0, k) * (C64::new(lin, 0.0) - problem.lambda);
            let r = -nu * (d2[i] - k * k * w.field.values[i]) + coeff * w.field.values[i];
            res += grid.quad_weights[i] * r.norm_sqr();
            scale += grid.quad_weights[i] * w.field.values[i].norm_sqr();
        }
        (res / scale.max(1e-300)).sqrt()
    };
    let ode_residual_plus = ode_residual(&w_ap_plus, u_wall_p, dup, true);
    let ode_residual_minus = ode_residual(&w_ap_minus, u_wall_m, dum, false);

    let a0_minus_corner = a0_integral((d_minus - 1.0) * l_minus)?;
    let a0_plus_corner = a0_integral(-(d_plus.conj() + 1.0) * l_plus)?;

    Ok(CorrectorPair {
        w_ap_plus,
        w_ap_minus,
        w_re_plus: None,
        w_re_minus: None,
        w_plus: None,
        w_minus: None,
        coeffs: None,
        l_plus,
        l_minus,
        d_plus,
        d_minus,
        ode_residual_plus,
        ode_residual_minus,
        a0_minus_corner,
        a0_plus_corner,
        bc_defect: None,
    })
}

/// Solve for the corrector remainders: the full resolvent operator applied
/// to `W_re` balances the nonlocal term and the shear's Taylor remainder
/// generated by `W_ap`, with Dirichlet conditions.
pub fn corrector_remainder(
    ws: &ResolventWorkspace,
    problem: &ResolventProblem,
    pair: &mut CorrectorPair,
) -> Result<()> {
    let grid = &ws.grid;
    let n = grid.n_points;
    let k = problem.ctx.kf();
    let ik = C64::new(0.0, k);
    let a = ws.dirichlet_operator(problem.lambda);
    let solver = CSolver::new(a);
    solver.check_conditioning(RCOND_THRESHOLD)?;

    let solve_side = |ap: &ScaledField, upper: bool| -> Vec<C64> {
        let phi_ap = ws.helm.solve(&ap.field.values);
        let wall = if upper { 0 } else { n - 1 };
        let u_wall = problem.shear.u[wall];
        let du_wall = problem.shear.du[wall];
        let y_wall = if upper { 1.0 } else { -1.0 };
        let mut rhs = vec![C64::new(0.0, 0.0); n];
        for i in 1..n - 1 {
            let lin = u_wall + du_wall * (grid.nodes[i] - y_wall);
            let taylor_rem = problem.shear.u[i] - lin;
            rhs[i] = ik * problem.shear.d2u[i] * phi_ap[i] - ik * taylor_rem * ap.field.values[i];
        }
        solver.solve(&rhs)
    };

    let re_plus = solve_side(&pair.w_ap_plus, true);
    let re_minus = solve_side(&pair.w_ap_minus, false);
    pair.w_re_plus = Some(ComplexField::new(grid.clone(), re_plus));
    pair.w_re_minus = Some(ComplexField::new(grid.clone(), re_minus));
    Ok(())
}

/// Moment weight `sinh(k(y + side))/sinh(2k)` against a field.
fn sinh_moment(grid: &SpectralGrid, k: f64, side: f64, f: &[C64]) -> C64 {
    let denom = (2.0 * k).sinh();
    grid.quad_weights
        .iter()
        .zip(grid.nodes.iter().zip(f))
        .map(|(w, (&y, v))| v * (*w * (k * (y + side)).sinh() / denom))
        .sum()
}

/// Assemble the Evans coefficients and the unit boundary correctors.
pub fn evans_assembly(
    ws: &ResolventWorkspace,
    problem: &ResolventProblem,
    pair: &mut CorrectorPair,
) -> Result<()> {
    let grid = &ws.grid;
    let n = grid.n_points;
    let k = problem.ctx.kf();

    let full = |ap: &ScaledField, re: &Option<ComplexField>| -> Vec<C64> {
        let re = re.as_ref().expect("remainders computed before assembly");
        ap.field
            .values
            .iter()
            .zip(&re.values)
            .map(|(a, b)| a + b)
            .collect()
    };
    let w_full_plus = full(&pair.w_ap_plus, &pair.w_re_plus);
    let w_full_minus = full(&pair.w_ap_minus, &pair.w_re_minus);

    let coef = |f: &[C64], side: f64, log: f64| -> Scaled {
        Scaled {
            m: sinh_moment(grid, k, side, f),
            log,
        }
        .normalize()
    };
    let a_mm = coef(&w_full_minus, -1.0, pair.w_ap_minus.log_scale);
    let a_mp = coef(&w_full_minus, 1.0, pair.w_ap_minus.log_scale);
    let a_pm = coef(&w_full_plus, -1.0, pair.w_ap_plus.log_scale);
    let a_pp = coef(&w_full_plus, 1.0, pair.w_ap_plus.log_scale);

    let prod = a_mm.mul(a_pp);
    let cross = a_pm.mul(a_mp);
    let det = prod.add(Scaled {
        m: -cross.m,
        log: cross.log,
    });
    if det.abs_ratio(prod) < 1e-14 {
        return Err(CoreError::EvansDegenerate {
            det_mag: det.abs_ratio(prod),
        });
    }

    // Unit correctors: exponential scale factors cancel between the
    // coefficient ratios and the stored profiles.
    let cpm = |num: Scaled, wlog: f64| -> C64 {
        let log = num.log + wlog - det.log;
        num.m / det.m * log.exp()
    };
    // w_+ = C_+^- W_- + C_+^+ W_+,  (C_+^-, C_+^+) = (-A_{+-}, A_{--})/D
    let c_p_m = cpm(
        Scaled {
            m: -a_pm.m,
            log: a_pm.log,
        },
        pair.w_ap_minus.log_scale,
    );
    let c_p_p = cpm(a_mm, pair.w_ap_plus.log_scale);
    // w_- = C_-^- W_- + C_-^+ W_+,  (C_-^-, C_-^+) = (A_{++}, -A_{-+})/D
    let c_m_m = cpm(a_pp, pair.w_ap_minus.log_scale);
    let c_m_p = cpm(
        Scaled {
            m: -a_mp.m,
            log: a_mp.log,
        },
        pair.w_ap_plus.log_scale,
    );

    let mut w_plus = vec![C64::new(0.0, 0.0); n];
    let mut w_minus = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        w_plus[i] = c_p_m * w_full_minus[i] + c_p_p * w_full_plus[i];
        w_minus[i] = c_m_m * w_full_minus[i] + c_m_p * w_full_plus[i];
    }

    // Verify the unit-corrector boundary conditions d_y Phi_pm.
    let dphi = |w: &[C64]| -> (C64, C64) {
        let phi = ws.helm.solve(w);
        let dphi = grid.diff_c(&phi);
        (dphi[0], dphi[n - 1])
    };
    let (pp, pm) = dphi(&w_plus);
    let (mp, mm) = dphi(&w_minus);
    let defect = (pp - C64::new(1.0, 0.0))
        .norm()
        .max(pm.norm())
        .max(mp.norm())
        .max((mm - C64::new(1.0, 0.0)).norm());

    pair.coeffs = Some(EvansCoefficients {
        a_mm,
        a_mp,
        a_pm,
        a_pp,
        det,
    });
    pair.w_plus = Some(ComplexField::new(grid.clone(), w_plus));
    pair.w_minus = Some(ComplexField::new(grid.clone(), w_minus));
    pair.bc_defect = Some(defect);
    Ok(())
}

/// The no-slip resolvent solution with its cross-validation gap.
pub struct NoSlipSolution {
    pub w: ComplexField,
    pub phi: ComplexField,
    pub c_plus: C64,
    pub c_minus: C64,
    /// Relative L2 gap between the corrector decomposition and the
    /// monolithic bordered solve.
    pub two_path_gap: f64,
    /// Max boundary-moment magnitude relative to `||w||`.
    pub moment_defect: f64,
}

/// Assemble the no-slip solution by the corrector decomposition and
/// cross-validate against a single bordered solve imposing the exponential
/// moments directly.
pub fn assemble_noslip(
    ws: &ResolventWorkspace,
    problem: &ResolventProblem,
) -> Result<NoSlipSolution> {
    let grid = &ws.grid;
    let n = grid.n_points;

    // Path 1: Navier part plus unit correctors.
    let navier = solve_navier(ws, problem)?;
    let mut pair = airy_correctors(ws, problem)?;
    corrector_remainder(ws, problem, &mut pair)?;
    evans_assembly(ws, problem, &mut pair)?;
    let dphi_na = grid.diff_c(&navier.phi_na.values);
    let c_plus = -dphi_na[0];
    let c_minus = -dphi_na[n - 1];
    let wp = pair.w_plus.as_ref().unwrap();
    let wm = pair.w_minus.as_ref().unwrap();
    let w_decomp: Vec<C64> = (0..n)
        .map(|i| navier.w_na.values[i] + c_plus * wp.values[i] + c_minus * wm.values[i])
        .collect();

    // Path 2: monolithic bordered solve.
    let m = ws.noslip_operator(problem.lambda);
    let solver = CSolver::new(m);
    solver.check_conditioning(RCOND_THRESHOLD)?;
    let mut rhs = vec![C64::new(0.0, 0.0); n + 2];
    rhs[..n].copy_from_slice(&problem.forcing.values);
    let sol = solver.solve(&rhs);
    let w_mono = sol[..n].to_vec();

    let diff: Vec<C64> = w_decomp.iter().zip(&w_mono).map(|(a, b)| a - b).collect();
    let denom = l2_norm(grid, &w_mono).max(1e-300);
    let two_path_gap = l2_norm(grid, &diff) / denom;

    let w_norm = l2_norm(grid, &w_decomp).max(1e-300);
    let mp = crate::field::boundary_moment(grid, &w_decomp, problem.ctx.k, 1).norm();
    let mm = crate::field::boundary_moment(grid, &w_decomp, problem.ctx.k, -1).norm();
    let moment_defect = mp.max(mm) / w_norm;

    let phi = ws.helm.solve(&w_decomp);
    Ok(NoSlipSolution {
        w: ComplexField::new(grid.clone(), w_decomp),
        phi: ComplexField::new(grid.clone(), phi),
        c_plus,
        c_minus,
        two_path_gap,
        moment_defect,
    })
}

/// Ratios probed against the three Navier-part estimates; each should stay
/// bounded and grid-stable over lambda sweeps.
#[derive(Debug, Clone, Copy)]
pub struct NavierEstimateRatios {
    pub l2_ratio: f64,
    pub h1_ratio: f64,
    pub hminus1_ratio: f64,
    pub imbalance_ratio: f64,
}

pub fn navier_estimate_ratios(
    ws: &ResolventWorkspace,
    problem: &ResolventProblem,
) -> Result<NavierEstimateRatios> {
    let sol = solve_navier(ws, problem)?;
    let grid = &ws.grid;
    let ctx = &problem.ctx;
    let nu = ctx.nu;
    let ka = ctx.k_abs();
    let im_plus = (ctx.kf() * problem.lambda.im).max(0.0);
    let w_norm = l2_norm(grid, &sol.w_na.values);
    let d2w = apply_real_c(&grid.diff2_matrix, &sol.w_na.values);
    let lap_w: Vec<C64> = (0..grid.n_points)
        .map(|i| d2w[i] - sol.w_na.values[i] * (ctx.kf() * ctx.kf()))
        .collect();
    let numerator = sol.e_functional + im_plus.sqrt() * w_norm + nu * l2_norm(grid, &lap_w);
    let numerator_no_lap = sol.e_functional + im_plus.sqrt() * w_norm;

    let f = &problem.forcing.values;
    let f_l2 = l2_norm(grid, f).max(1e-300);
    let grad_f = nabla_k_norm_sq(grid, ctx.k, f).sqrt().max(1e-300);
    let f_m1 = ws.h_minus1_norm(f).max(1e-300);

    Ok(NavierEstimateRatios {
        l2_ratio: numerator / f_l2,
        h1_ratio: numerator / (nu.powf(1.0 / 6.0) * ka.powf(-2.0 / 3.0) * grad_f),
        hminus1_ratio: numerator_no_lap / (nu.powf(-1.0 / 3.0) * ka.powf(1.0 / 3.0) * f_m1),
        imbalance_ratio: sol.imbalance / f_l2,
    })
}

/// Coefficient-bound probe ratios from the no-slip assembly.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientRatios {
    /// `(1 + |k||lr - U(1)|) |c_+| / (nu^{-1/6}|k|^{-5/6} ||F|| log L)`
    pub c_plus_l2: f64,
    pub c_minus_l2: f64,
    /// `(1 + |k||lr - U(1)|)^{3/4} |c_+| / (nu^{-1/2}|k|^{-1/2} ||F||_{H^-1} log L)`
    pub c_plus_hminus1: f64,
    pub c_minus_hminus1: f64,
}

pub fn coefficient_ratios(
    ws: &ResolventWorkspace,
    problem: &ResolventProblem,
    sol: &NoSlipSolution,
) -> CoefficientRatios {
    let ctx = &problem.ctx;
    let n = ws.grid.n_points;
    let nu = ctx.nu;
    let ka = ctx.k_abs();
    let log_l = ctx.l_scale.ln().max(1.0);
    let lr = problem.lambda.re;
    let f_l2 = l2_norm(&ws.grid, &problem.forcing.values).max(1e-300);
    let f_m1 = ws.h_minus1_norm(&problem.forcing.values).max(1e-300);
    let wp = 1.0 + ka * (lr - problem.shear.u[0]).abs();
    let wm = 1.0 + ka * (lr - problem.shear.u[n - 1]).abs();
    let denom_l2 = nu.powf(-1.0 / 6.0) * ka.powf(-5.0 / 6.0) * f_l2 * log_l;
    let denom_m1 = nu.powf(-0.5) * ka.powf(-0.5) * f_m1 * log_l;
    CoefficientRatios {
        c_plus_l2: wp * sol.c_plus.norm() / denom_l2,
        c_minus_l2: wm * sol.c_minus.norm() / denom_l2,
        c_plus_hminus1: wp.powf(0.75) * sol.c_plus.norm() / denom_m1,
        c_minus_hminus1: wm.powf(0.75) * sol.c_minus.norm() / denom_m1,
    }
}

/// Weighted corrector norms reported against the uniform corrector bounds.
#[derive(Debug, Clone, Copy)]
pub struct CorrectorNorms {
    pub l1_minus: f64,
    pub l1_plus: f64,
    /// `nu^{1/2} ||w_-||_inf / (1 + |k||lambda - U(-1)|)^{1/2}`
    pub weighted_inf_minus: f64,
    pub weighted_inf_plus: f64,
    /// `||rho^{1/2} w_pm|| / L^{1/2}`
    pub rho_l2_minus: f64,
    pub rho_l2_plus: f64,
}

pub fn corrector_norms(
    ws: &ResolventWorkspace,
    problem: &ResolventProblem,
    pair: &CorrectorPair,
) -> CorrectorNorms {
    let grid = &ws.grid;
    let n = grid.n_points;
    let ctx = &problem.ctx;
    let wm = pair.w_minus.as_ref().expect("assembled");
    let wp = pair.w_plus.as_ref().expect("assembled");
    let l1 = |f: &[C64]| -> f64 {
        grid.quad_weights
            .iter()
            .zip(f)
            .map(|(w, v)| w * v.norm())
            .sum()
    };
    let inf = |f: &[C64]| f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let rho_l2 =
        |f: &[C64]| -> f64 { crate::field::weighted_l2_norm_sq(grid, |y| ctx.rho(y), f).sqrt() };
    let nu = ctx.nu;
    let ka = ctx.k_abs();
    let um = problem.shear.u[n - 1];
    let up = problem.shear.u[0];
    CorrectorNorms {
        l1_minus: l1(&wm.values),
        l1_plus: l1(&wp.values),
        weighted_inf_minus: nu.sqrt() * inf(&wm.values)
            / (1.0 + ka * (problem.lambda - um).norm()).sqrt(),
        weighted_inf_plus: nu.sqrt() * inf(&wp.values)
            / (1.0 + ka * (problem.lambda - up).norm()).sqrt(),
        rho_l2_minus: rho_l2(&wm.values) / ctx.l_scale.sqrt(),
        rho_l2_plus: rho_l2(&wp.values) / ctx.l_scale.sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use crate::sample::{rng, smooth_field};
    use crate::shear::{heat_extend, InitialShear, ShearSpec};

    fn make_problem(
        n: usize,
        k: i32,
        nu: f64,
        spec: &ShearSpec,
        lambda: C64,
        forcing: impl Fn(f64) -> C64,
    ) -> (ResolventWorkspace, ResolventProblem) {
        let grid = build_grid(n).unwrap();
        let ctx = WavenumberContext::new(k, nu).unwrap();
        let init = InitialShear::from_spec(grid.clone(), spec).unwrap();
        let shear = heat_extend(&init, nu, 0.0).unwrap();
        let ws = ResolventWorkspace::new(grid.clone(), ctx, &shear);
        let f = ComplexField::from_fn(grid.clone(), forcing);
        let problem = ResolventProblem {
            ctx,
            grid,
            shear,
            lambda,
            forcing: f,
            forcing_class: ForcingClass::L2,
        };
        (ws, problem)
    }

    #[test]
    fn zero_forcing_zero_solution() {
        let (ws, p) = make_problem(64, 1, 1e-3, &ShearSpec::Couette, C64::new(0.0, -0.1), |_| {
            C64::new(0.0, 0.0)
        });
        let sol = solve_navier(&ws, &p).unwrap();
        assert_eq!(l2_norm(&ws.grid, &sol.w_na.values), 0.0);
        let ns = assemble_noslip(&ws, &p).unwrap();
        assert!(l2_norm(&ws.grid, &ns.w.values) < 1e-12);
    }

    #[test]
    fn navier_solution_invariants() {
        let (ws, p) = make_problem(128, 1, 1e-3, &ShearSpec::Couette, C64::new(0.0, -0.1), |y| {
            C64::new((1.0 - y * y) * (2.0 * y).cos(), 0.3 * y)
        });
        let sol = solve_navier(&ws, &p).unwrap();
        let n = ws.grid.n_points;
        assert!(sol.w_na.values[0].norm() <= 1e-12);
        assert!(sol.w_na.values[n - 1].norm() <= 1e-12);
        assert!(sol.phi_na.values[0].norm() <= 1e-12);
        assert!(sol.residual <= 1e-8, "residual {}", sol.residual);
        let d2 = apply_real_c(&ws.grid.diff2_matrix, &sol.phi_na.values);
        for i in 1..n - 1 {
            let r = d2[i] - sol.phi_na.values[i] - sol.w_na.values[i];
            assert!(r.norm() <= 1e-9, "Helmholtz residual {}", r.norm());
        }
    }

    #[test]
    fn refinement_oracle() {
        let lambda = C64::new(0.0, -0.1);
        let forcing = |y: f64| C64::new((1.0 - y * y).powi(2), 0.1 * (1.0 - y * y));
        let (ws1, p1) = make_problem(96, 1, 1e-3, &ShearSpec::Couette, lambda, forcing);
        let (ws2, p2) = make_problem(192, 1, 1e-3, &ShearSpec::Couette, lambda, forcing);
        let s1 = solve_navier(&ws1, &p1).unwrap();
        let s2 = solve_navier(&ws2, &p2).unwrap();
        let n1 = l2_norm(&ws1.grid, &s1.w_na.values);
        let n2 = l2_norm(&ws2.grid, &s2.w_na.values);
        assert!((n1 - n2).abs() <= 1e-6 * n2, "norm mismatch {n1} vs {n2}");
    }

    #[test]
    fn linearity_and_scaling() {
        let lambda = C64::new(0.3, -0.05);
        let (ws, p1) = make_problem(96, 1, 1e-3, &ShearSpec::Sine(0.05), lambda, |y| {
            C64::new((1.0 - y * y).cos(), y)
        });
        let s1 = solve_navier(&ws, &p1).unwrap();
        let p10 = ResolventProblem {
            ctx: p1.ctx,
            grid: p1.grid.clone(),
            shear: p1.shear.clone(),
            lambda,
            forcing: ComplexField::new(
                p1.grid.clone(),
                p1.forcing.values.iter().map(|v| v * 10.0).collect(),
            ),
            forcing_class: ForcingClass::L2,
        };
        let s10 = solve_navier(&ws, &p10).unwrap();
        for (a, b) in s1.w_na.values.iter().zip(&s10.w_na.values) {
            assert!((a * 10.0 - b).norm() <= 1e-10 * b.norm().max(1e-10));
        }
        let r1 = imbalance_probe(&ws, &p1).unwrap();
        let r10 = imbalance_probe(&ws, &p10).unwrap();
        assert!((r1 - r10).abs() <= 1e-10 * r1.max(1.0));
    }

    #[test]
    fn imbalance_bounded_inside_critical_range() {
        let mut ratios = Vec::new();
        for &lr in &[-0.8, -0.3, 0.0, 0.4, 0.9] {
            let (ws, p) = make_problem(
                128,
                1,
                1e-3,
                &ShearSpec::Couette,
                C64::new(lr, -0.02),
                |y| C64::new((1.5 * y).sin(), 1.0 - y * y),
            );
            ratios.push(imbalance_probe(&ws, &p).unwrap());
        }
        let max = ratios.iter().cloned().fold(0.0f64, f64::max);
        let mut sorted = ratios.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let med = sorted[sorted.len() / 2];
        assert!(max.is_finite() && max < 100.0 * med, "{ratios:?}");
    }

    #[test]
    fn high_freq_probe_regimes() {
        let (ws, p) = make_problem(64, 4, 1.0, &ShearSpec::Couette, C64::new(0.0, -0.05), |y| {
            C64::new((2.0 * y).cos(), (1.0 - y * y) * 0.5)
        });
        let (r1, r2, r3) = high_freq_probe(&ws, &p).unwrap();
        assert!(r1.is_finite() && r2.is_finite() && r3.is_finite());
        assert!(r1 > 0.0 && r1 < 100.0, "r1 = {r1}");

        let (ws0, p0) = make_problem(64, 4, 1.0, &ShearSpec::Couette, C64::new(0.0, -0.05), |_| {
            C64::new(0.0, 0.0)
        });
        assert_eq!(high_freq_probe(&ws0, &p0).unwrap(), (0.0, 0.0, 0.0));

        let (wsl, pl) =
            make_problem(64, 1, 1e-3, &ShearSpec::Couette, C64::new(0.0, -0.05), |_| {
                C64::new(1.0, 0.0)
            });
        assert!(high_freq_probe(&wsl, &pl).is_err());
        assert!(imbalance_probe(&ws, &p).is_err());
    }

    #[test]
    fn high_freq_monte_carlo_and_scaling() {
        let grid = build_grid(64).unwrap();
        let mut r = rng(17);
        let mut worst = [0.0f64; 3];
        for _ in 0..20 {
            let fvals = smooth_field(&grid, &mut r, 20, 0.3);
            let ctx = WavenumberContext::new(4, 1.0).unwrap();
            let init = InitialShear::from_spec(grid.clone(), &ShearSpec::Couette).unwrap();
            let shear = heat_extend(&init, 1.0, 0.0).unwrap();
            let ws = ResolventWorkspace::new(grid.clone(), ctx, &shear);
            let p = ResolventProblem {
                ctx,
                grid: grid.clone(),
                shear,
                lambda: C64::new(0.0, -0.05),
                forcing: ComplexField::new(grid.clone(), fvals),
                forcing_class: ForcingClass::L2,
            };
            let (r1, r2, r3) = high_freq_probe(&ws, &p).unwrap();
            worst[0] = worst[0].max(r1);
            worst[1] = worst[1].max(r2);
            worst[2] = worst[2].max(r3);
        }
        assert!(worst.iter().all(|v| v.is_finite() && *v < 1e3), "{worst:?}");

        let fixed = 4.0; // nu k^2
        let mut vals = Vec::new();
        for &k in &[4i32, 8] {
            let nu = fixed / (k as f64).powi(2);
            let (ws, p) = make_problem(64, k, nu, &ShearSpec::Couette, C64::new(0.0, -0.05), |y| {
                C64::new((1.0 - y * y) * (3.0 * y).cos(), 0.0)
            });
            let (r1, _, _) = high_freq_probe(&ws, &p).unwrap();
            vals.push(r1);
        }
        let ratio = vals[1] / vals[0];
        assert!(ratio > 0.5 && ratio < 2.0, "scaling ratio {ratio}");
    }

    #[test]
    fn airy_corrector_ode_residual_and_decay() {
        let nu = 1e-4f64;
        let lambda = C64::new(0.0, -nu.powf(1.0 / 3.0));
        let (ws, p) = make_problem(256, 1, nu, &ShearSpec::Couette, lambda, |_| {
            C64::new(0.0, 0.0)
        });
        let pair = airy_correctors(&ws, &p).unwrap();
        assert!(
            pair.ode_residual_plus <= 1e-6,
            "ODE residual {}",
            pair.ode_residual_plus
        );
        assert!(
            pair.ode_residual_minus <= 1e-6,
            "ODE residual {}",
            pair.ode_residual_minus
        );
        // pointwise decay away from the lower wall: monotone majorant
        let n = ws.grid.n_points;
        let vals = &pair.w_ap_minus.field.values;
        let wall = vals[n - 1].norm();
        assert!(wall > 0.1, "corrector concentrated at its wall");
        let mut envelope: f64 = wall;
        for i in (n / 2..n - 1).rev() {
            let v = vals[i].norm();
            assert!(
                v <= envelope * 1.05 + 1e-12,
                "corrector grew away from the wall at node {i}"
            );
            envelope = envelope.max(v);
        }
    }

    #[test]
    fn couette_remainder_vanishes() {
        let nu = 1e-4f64;
        let lambda = C64::new(0.2, -nu.powf(1.0 / 3.0));
        let (ws, p) = make_problem(192, 1, nu, &ShearSpec::Couette, lambda, |_| {
            C64::new(0.0, 0.0)
        });
        let mut pair = airy_correctors(&ws, &p).unwrap();
        corrector_remainder(&ws, &p, &mut pair).unwrap();
        let re = pair.w_re_minus.as_ref().unwrap();
        let norm = l2_norm(&ws.grid, &re.values);
        assert!(norm <= 1e-10, "Couette remainder {norm}");
    }

    #[test]
    fn remainder_scales_linearly_in_amplitude() {
        let nu = 1e-4f64;
        let lambda = C64::new(0.0, -nu.powf(1.0 / 3.0));
        let mut norms = Vec::new();
        for &a in &[0.01, 0.02, 0.04] {
            let (ws, p) = make_problem(192, 1, nu, &ShearSpec::Sine(a), lambda, |_| {
                C64::new(0.0, 0.0)
            });
            let mut pair = airy_correctors(&ws, &p).unwrap();
            corrector_remainder(&ws, &p, &mut pair).unwrap();
            let re = pair.w_re_minus.as_ref().unwrap();
            norms.push(l2_norm(&ws.grid, &re.values));
        }
        let r1 = norms[1] / norms[0];
        let r2 = norms[2] / norms[1];
        assert!((r1 - 2.0).abs() < 0.3, "amplitude ratio {r1}");
        assert!((r2 - 2.0).abs() < 0.3, "amplitude ratio {r2}");
    }

    #[test]
    fn full_corrector_solves_homogeneous_equation() {
        let nu = 1e-4f64;
        let lambda = C64::new(0.1, -nu.powf(1.0 / 3.0));
        let (ws, p) = make_problem(256, 1, nu, &ShearSpec::Sine(0.05), lambda, |_| {
            C64::new(0.0, 0.0)
        });
        let mut pair = airy_correctors(&ws, &p).unwrap();
        corrector_remainder(&ws, &p, &mut pair).unwrap();
        let n = ws.grid.n_points;
        let w: Vec<C64> = pair
            .w_ap_minus
            .field
            .values
            .iter()
            .zip(&pair.w_re_minus.as_ref().unwrap().values)
            .map(|(a, b)| a + b)
            .collect();
        let a = ws.dirichlet_operator(p.lambda);
        let mut resid = 0.0;
        let mut scale = 0.0;
        for i in 1..n - 1 {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..n {
                acc += a[(i, j)] * w[j];
            }
            resid += ws.grid.quad_weights[i] * acc.norm_sqr();
            scale += ws.grid.quad_weights[i] * w[i].norm_sqr();
        }
        let rel = (resid / scale).sqrt();
        assert!(rel <= 1e-6, "homogeneous residual {rel}");
    }

    #[test]
    fn evans_bounds_hold() {
        let nu = 1e-4f64;
        let lambda = C64::new(0.4, -nu.powf(1.0 / 3.0));
        let (ws, p) = make_problem(256, 1, nu, &ShearSpec::Sine(0.05), lambda, |_| {
            C64::new(0.0, 0.0)
        });
        let mut pair = airy_correctors(&ws, &p).unwrap();
        corrector_remainder(&ws, &p, &mut pair).unwrap();
        evans_assembly(&ws, &p, &mut pair).unwrap();
        let c = pair.coeffs.unwrap();
        let cross_m = c.a_mp.abs_ratio(c.a_mm);
        let cross_p = c.a_pm.abs_ratio(c.a_pp);
        let sqrt2_half = std::f64::consts::SQRT_2 / 2.0;
        assert!(cross_m <= sqrt2_half + 1e-3, "cross ratio minus {cross_m}");
        assert!(cross_p <= sqrt2_half + 1e-3, "cross ratio plus {cross_p}");
        let det_ratio = c.det.abs_ratio(c.a_mm.mul(c.a_pp));
        assert!(
            det_ratio >= 0.5 * (1.0 - 1e-3),
            "Evans lower bound {det_ratio}"
        );
        assert!(
            pair.bc_defect.unwrap() <= 1e-6,
            "unit corrector BC defect {}",
            pair.bc_defect.unwrap()
        );
        let norms = corrector_norms(&ws, &p, &pair);
        assert!(norms.l1_minus.is_finite() && norms.l1_minus < 100.0);
        assert!(norms.rho_l2_minus.is_finite() && norms.rho_l2_minus < 100.0);
    }

    #[test]
    fn two_path_cross_validation_couette() {
        let nu = 1e-3f64;
        let lambda = C64::new(-0.3, -0.05);
        let (ws, p) = make_problem(192, 1, nu, &ShearSpec::Couette, lambda, |y| {
            C64::new((1.0 - y * y) * (1.3 * y).cos(), (0.7 * y).sin())
        });
        let sol = assemble_noslip(&ws, &p).unwrap();
        assert!(sol.two_path_gap <= 1e-6, "two-path gap {}", sol.two_path_gap);
        assert!(
            sol.moment_defect <= 1e-7,
            "moment defect {}",
            sol.moment_defect
        );
        let n = ws.grid.n_points;
        let dphi = ws.grid.diff_c(&sol.phi.values);
        assert!(sol.phi.values[0].norm() <= 1e-10);
        assert!(dphi[0].norm() <= 1e-6, "dphi(+1) = {}", dphi[0].norm());
        assert!(dphi[n - 1].norm() <= 1e-6, "dphi(-1) = {}", dphi[n - 1].norm());
    }

    #[test]
    fn two_path_cross_validation_near_couette() {
        let nu = 1e-3f64;
        let lambda = C64::new(0.5, -0.1 * nu.powf(1.0 / 3.0));
        let (ws, p) = make_problem(256, 1, nu, &ShearSpec::Sine(0.05), lambda, |y| {
            C64::new((1.0 - y * y).powi(2), 0.2 * (2.0 * y).sin())
        });
        let sol = assemble_noslip(&ws, &p).unwrap();
        assert!(sol.two_path_gap <= 1e-6, "two-path gap {}", sol.two_path_gap);
        let ratios = coefficient_ratios(&ws, &p, &sol);
        assert!(ratios.c_plus_l2.is_finite() && ratios.c_plus_l2 < 1e3);
    }
}
