use chanstab_core::field::{ComplexField, WavenumberContext};
use chanstab_core::ghost::build_ghost;
use chanstab_core::grid::build_grid;
use chanstab_core::helmholtz::greens_kernel;
use chanstab_core::C64;

fn pv_oracle(ctx: &WavenumberContext, y: f64, f: impl Fn(f64) -> f64 + Copy, num: impl Fn(f64,f64) -> f64 + Copy) -> f64 {
    let g_diag = num(y, y);
    let integrand = |yp: f64| {
        if (yp - y).abs() < 1e-13 { 0.0 } else { (num(y, yp) * f(yp) - g_diag * f(y)) / (y - yp) }
    };
    let simpson = |a: f64, b: f64| {
        let n = 60000;
        if b - a < 1e-14 { return 0.0; }
        let h = (b - a) / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let x0 = a + i as f64 * h;
            acc += h / 6.0 * (integrand(x0) + 4.0 * integrand(x0 + h / 2.0) + integrand(x0 + h));
        }
        acc
    };
    simpson(-1.0, y) + simpson(y, 1.0) + g_diag * f(y) * ((1.0 + y) / (1.0 - y)).ln()
}

fn main() {
    let kk = 1.0f64;
    let f = |y: f64| 1.0 - y * y;
    let df = |y: f64| -2.0 * y;
    let hnum = move |y: f64, yp: f64| ((kk * (y + yp)).sinh()) / (2.0 * kk).sinh();
    for n in [128usize, 256] {
        let g = build_grid(n).unwrap();
        let ctx = WavenumberContext::new(1, 1e-3).unwrap();
        let kern = build_ghost(&ctx, g.clone()).unwrap();
        let fv = ComplexField::from_fn(g.clone(), |y| C64::new(f(y), 0.0));
        let jf = kern.apply_jk(&fv.values);
        let djf = g.diff_c(&jf);
        let dfv: Vec<C64> = g.nodes.iter().map(|&y| C64::new(df(y), 0.0)).collect();
        let jdf = kern.apply_jk(&dfv);
        let hf = kern.apply_hk(&fv.values);

        let i = 3 * n / 8; // y ~ 0.38
        let y = g.nodes[i];
        let gk = move |a: f64, b: f64| greens_kernel(&ctx, a, b);
        // oracle values
        let scale = -0.5; // times i k... J = (k/2i)pv = -(i/2) pv for k=1 -> imag part = -pv/2
        let jdf_oracle = scale * pv_oracle(&ctx, y, df, gk);
        let hf_oracle = scale * pv_oracle(&ctx, y, f, hnum);
        // d(Jf) oracle by finite difference of pv
        let h = 1e-5;
        let djf_oracle = scale * (pv_oracle(&ctx, y + h, f, gk) - pv_oracle(&ctx, y - h, f, gk)) / (2.0 * h);
        println!("n={n} y={y:.4}:");
        println!("  D(Jf)  disc {:+.8e}  oracle {:+.8e}  err {:+.2e}", djf[i].im, djf_oracle, djf[i].im - djf_oracle);
        println!("  J(Df)  disc {:+.8e}  oracle {:+.8e}  err {:+.2e}", jdf[i].im, jdf_oracle, jdf[i].im - jdf_oracle);
        println!("  Hf     disc {:+.8e}  oracle {:+.8e}  err {:+.2e}", hf[i].im, hf_oracle, hf[i].im - hf_oracle);
        println!("  residual disc {:+.2e}  oracle {:+.2e}", (djf[i]-jdf[i]-hf[i]).im, djf_oracle - jdf_oracle - hf_oracle);
    }
}
