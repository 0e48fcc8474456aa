use chanstab_core::field::{ComplexField, WavenumberContext};
use chanstab_core::ghost::build_ghost;
use chanstab_core::grid::build_grid;
use chanstab_core::helmholtz::greens_kernel;
use chanstab_core::C64;

// brute-force p.v. via singularity subtraction + split Simpson
fn pv_oracle(ctx: &WavenumberContext, y: f64, f: impl Fn(f64) -> f64 + Copy) -> f64 {
    let g_diag = greens_kernel(ctx, y, y);
    let integrand = |yp: f64| {
        if (yp - y).abs() < 1e-12 {
            0.0 // measure-zero; fine for Simpson nodes
        } else {
            (greens_kernel(ctx, y, yp) * f(yp) - g_diag * f(y)) / (y - yp)
        }
    };
    let simpson = |a: f64, b: f64| {
        let n = 40000;
        if b - a < 1e-14 { return 0.0; }
        let h = (b - a) / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let x0 = a + i as f64 * h;
            acc += h / 6.0 * (integrand(x0) + 4.0 * integrand(x0 + h / 2.0) + integrand(x0 + h));
        }
        acc
    };
    let log_term = g_diag * f(y) * ((1.0 + y) / (1.0 - y)).ln();
    simpson(-1.0, y) + simpson(y, 1.0) + log_term
}

fn main() {
    let n = 96;
    let g = build_grid(n).unwrap();
    let f = |y: f64| (1.0 - y * y) * (1.0 + 0.3 * y);
    for k in [1, 2, 4] {
        let ctx = WavenumberContext::new(k, 1e-3).unwrap();
        let kern = build_ghost(&ctx, g.clone()).unwrap();
        let fv = ComplexField::from_fn(g.clone(), |y| C64::new(f(y), 0.0));
        let jf = kern.apply_jk(&fv.values);
        // J f = (k/2i) pv: so pv value = jf * 2i/k; compare imaginary structure:
        // jf_i should equal -(i k/2) * pv_oracle
        for &idx in &[10usize, n/2, n-12] {
            let y = g.nodes[idx];
            let oracle = pv_oracle(&ctx, y, f);
            let expect = C64::new(0.0, -(k as f64) / 2.0) * oracle;
            println!("k={k} y={y:+.3}: J f = {:+.6e}{:+.6e}i  expect {:+.6e}{:+.6e}i", jf[idx].re, jf[idx].im, expect.re, expect.im);
        }
    }
}
