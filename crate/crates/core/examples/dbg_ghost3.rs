use chanstab_core::field::{ComplexField, WavenumberContext};
use chanstab_core::ghost::build_ghost;
use chanstab_core::grid::build_grid;
use chanstab_core::C64;

fn main() {
    // residual profile: where does |D(Jf) - J(Df) - Hf| live?
    for n in [128usize, 256] {
        let g = build_grid(n).unwrap();
        let ctx = WavenumberContext::new(1, 1e-3).unwrap();
        let kern = build_ghost(&ctx, g.clone()).unwrap();
        let f = ComplexField::from_fn(g.clone(), |y| C64::new(1.0 - y * y, 0.0));
        let jf = kern.apply_jk(&f.values);
        let djf = g.diff_c(&jf);
        let df = g.diff_c(&f.values);
        let jdf = kern.apply_jk(&df);
        let hf = kern.apply_hk(&f.values);
        let mut prof = vec![0.0; n];
        for i in 0..n {
            prof[i] = (djf[i] - jdf[i] - hf[i]).norm();
        }
        let idx: Vec<usize> = vec![1, 2, 4, 8, n/8, n/4, n/2, 3*n/4, n-9, n-5, n-3, n-2];
        print!("n={n:4}: ");
        for &i in &idx { print!("[{}]{:.2e} ", i, prof[i]); }
        println!();
    }
}
