use chanstab_core::field::{nabla_k_norm_sq, ComplexField, WavenumberContext};
use chanstab_core::ghost::build_ghost;
use chanstab_core::grid::build_grid;
use chanstab_core::helmholtz::HelmholtzSolver;
use chanstab_core::C64;

fn main() {
    for (name, which) in [("(1-y^2)", 1usize), ("(1-y^2)^2", 2), ("smooth rand", 3)] {
        let mut res = Vec::new();
        for n in [64usize, 128, 256] {
            let g = build_grid(n).unwrap();
            let ctx = WavenumberContext::new(1, 1e-3).unwrap();
            let kern = build_ghost(&ctx, g.clone()).unwrap();
            let fv = ComplexField::from_fn(g.clone(), |y| {
                let b = 1.0 - y * y;
                let v = match which { 1 => b, 2 => b * b, _ => b * (0.7 + (2.3 * y).sin() * 0.4) };
                C64::new(v, 0.0)
            });
            let jf = kern.apply_jk(&fv.values);
            let djf = g.diff_c(&jf);
            let df = g.diff_c(&fv.values);
            let jdf = kern.apply_jk(&df);
            let hf = kern.apply_hk(&fv.values);
            let mut r = vec![C64::new(0.0, 0.0); n];
            for i in 1..n - 1 {
                r[i] = djf[i] - jdf[i] - hf[i];
            }
            // H^{-1}: one Dirichlet solve, ||nabla_k (-Delta_k)^{-1} r||
            let helm = HelmholtzSolver::new(g.clone(), 1);
            let neg: Vec<C64> = r.iter().map(|c| -c).collect();
            let v = helm.solve(&neg);
            res.push(nabla_k_norm_sq(&g, 1, &v).sqrt());
        }
        println!("{name:14} H^-1 residuals {:.3e} {:.3e} {:.3e}  ratios {:.2} {:.2}", res[0], res[1], res[2], res[0]/res[1], res[1]/res[2]);
    }
}
