use chanstab_core::field::{ComplexField, WavenumberContext};
use chanstab_core::ghost::build_ghost;
use chanstab_core::grid::build_grid;
use chanstab_core::C64;

fn main() {
    for n in [128usize, 256] {
        let g = build_grid(n).unwrap();
        let ctx = WavenumberContext::new(1, 1e-3).unwrap();
        let kern = build_ghost(&ctx, g.clone()).unwrap();
        let fv = ComplexField::from_fn(g.clone(), |y| {
            let b = 1.0 - y * y;
            C64::new(b * b, 0.0)
        });
        let jf = kern.apply_jk(&fv.values);
        let djf = g.diff_c(&jf);
        let df = g.diff_c(&fv.values);
        let jdf = kern.apply_jk(&df);
        let hf = kern.apply_hk(&fv.values);
        let idx: Vec<usize> = vec![1, 2, 3, 5, 9, 17, n/8, n/4, n/2, 3*n/4, n-10, n-4, n-3, n-2];
        print!("n={n:4}: ");
        for &i in &idx {
            let r = (djf[i] - jdf[i] - hf[i]).norm();
            print!("[{}]{:.1e} ", i, r);
        }
        println!();
    }
}
