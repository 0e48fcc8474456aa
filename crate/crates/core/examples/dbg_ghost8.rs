use chanstab_core::field::WavenumberContext;
use chanstab_core::helmholtz::greens_kernel;

fn pv_oracle(y: f64, f: impl Fn(f64) -> f64 + Copy, num: impl Fn(f64, f64) -> f64 + Copy) -> f64 {
    let g_diag = num(y, y);
    let integrand = |yp: f64| {
        if (yp - y).abs() < 1e-15 { 0.0 } else { (num(y, yp) * f(yp) - g_diag * f(y)) / (y - yp) }
    };
    let mut pts = vec![-1.0, y, 1.0];
    for m in 1..60 {
        let d = 2.0 * (0.65f64).powi(m);
        if y - d > -1.0 { pts.push(y - d); }
        if y + d < 1.0 { pts.push(y + d); }
        if -1.0 + d < 1.0 { pts.push(-1.0 + d); }
        if 1.0 - d > -1.0 { pts.push(1.0 - d); }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let mut acc = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let nn = 32;
        let h = (b - a) / nn as f64;
        for i in 0..nn {
            let x0 = a + i as f64 * h;
            acc += h / 6.0 * (integrand(x0) + 4.0 * integrand(x0 + h / 2.0) + integrand(x0 + h));
        }
    }
    acc + g_diag * f(y) * ((1.0 + y) / (1.0 - y)).ln()
}

fn main() {
    let ctx = WavenumberContext::new(1, 1e-3).unwrap();
    let gk = move |a: f64, b: f64| greens_kernel(&ctx, a, b);
    let f = |y: f64| (1.0 - y * y).powi(2);
    // pv value approaching the wall: structure of V(1-d) in d
    println!("   d        V(1-d)       dV/dy (fd)");
    for &d in &[1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4] {
        let y = 1.0 - d;
        let v = pv_oracle(y, f, gk);
        let h = d * 1e-3;
        let dv = (pv_oracle(y + h, f, gk) - pv_oracle(y - h, f, gk)) / (2.0 * h);
        println!("{d:9.1e}  {v:+.8e}  {dv:+.8e}");
    }
}
