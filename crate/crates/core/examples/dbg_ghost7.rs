use chanstab_core::field::{ComplexField, WavenumberContext};
use chanstab_core::ghost::build_ghost;
use chanstab_core::grid::build_grid;
use chanstab_core::helmholtz::greens_kernel;
use chanstab_core::C64;

// adaptive-ish pv oracle: singularity subtraction + graded Simpson panels
fn pv_oracle(y: f64, f: impl Fn(f64) -> f64 + Copy, num: impl Fn(f64, f64) -> f64 + Copy) -> f64 {
    let g_diag = num(y, y);
    let integrand = |yp: f64| {
        if (yp - y).abs() < 1e-15 { 0.0 } else { (num(y, yp) * f(yp) - g_diag * f(y)) / (y - yp) }
    };
    // split [-1,1] into graded panels clustering at y and the endpoints
    let mut pts = vec![-1.0, y, 1.0];
    for m in 1..40 {
        let d = 2.0 * (0.7f64).powi(m);
        if y - d > -1.0 { pts.push(y - d); }
        if y + d < 1.0 { pts.push(y + d); }
        let e = 2.0 * (0.7f64).powi(m);
        if -1.0 + e < 1.0 { pts.push(-1.0 + e); }
        if 1.0 - e > -1.0 { pts.push(1.0 - e); }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let mut acc = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let nn = 64;
        let h = (b - a) / nn as f64;
        for i in 0..nn {
            let x0 = a + i as f64 * h;
            acc += h / 6.0 * (integrand(x0) + 4.0 * integrand(x0 + h / 2.0) + integrand(x0 + h));
        }
    }
    acc + g_diag * f(y) * ((1.0 + y) / (1.0 - y)).ln()
}

fn main() {
    let kk = 1.0f64;
    let f = |y: f64| (1.0 - y * y).powi(2);
    let df = |y: f64| -4.0 * y * (1.0 - y * y);
    let hnum = move |y: f64, yp: f64| ((kk * (y + yp)).sinh()) / (2.0 * kk).sinh();
    let n = 128usize;
    let g = build_grid(n).unwrap();
    let ctx = WavenumberContext::new(1, 1e-3).unwrap();
    let gk = move |a: f64, b: f64| greens_kernel(&ctx, a, b);
    let kern = build_ghost(&ctx, g.clone()).unwrap();
    let fv = ComplexField::from_fn(g.clone(), |y| C64::new(f(y), 0.0));
    let jf = kern.apply_jk(&fv.values);
    let djf = g.diff_c(&jf);
    let dfv: Vec<C64> = g.nodes.iter().map(|&y| C64::new(df(y), 0.0)).collect();
    let jdf = kern.apply_jk(&dfv);
    let hf = kern.apply_hk(&fv.values);
    for &i in &[2usize, 3, 5] {
        let y = g.nodes[i];
        let scale = -0.5;
        let jdf_o = scale * pv_oracle(y, df, gk);
        let hf_o = scale * pv_oracle(y, f, hnum);
        let h = (1.0 - y) * 1e-3;
        let djf_o = scale * (pv_oracle(y + h, f, gk) - pv_oracle(y - h, f, gk)) / (2.0 * h);
        println!("node {i} y={y:.6}:");
        println!("  D(Jf): disc {:+.6e} oracle {:+.6e} err {:+.1e}", djf[i].im, djf_o, djf[i].im - djf_o);
        println!("  J(Df): disc {:+.6e} oracle {:+.6e} err {:+.1e}", jdf[i].im, jdf_o, jdf[i].im - jdf_o);
        println!("  Hf:    disc {:+.6e} oracle {:+.6e} err {:+.1e}", hf[i].im, hf_o, hf[i].im - hf_o);
    }
}
