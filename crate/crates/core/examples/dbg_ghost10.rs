// Variant study: measure identity violations WITHOUT interior
// antisymmetrization, for smooth random fields.
use chanstab_core::field::{l2_norm, WavenumberContext};
use chanstab_core::grid::build_grid;
use chanstab_core::sample::{rng, smooth_field, rough_field};
use chanstab_core::C64;
use chanstab_core::ghost::build_ghost;

fn main() {
    // current (antisymmetrized) build: verify identity exactness held
    let g = build_grid(256).unwrap();
    let mut r = rng(5);
    for &k in &[1, 4, 16] {
        let ctx = WavenumberContext::new(k, 1e-4).unwrap();
        let kern = build_ghost(&ctx, g.clone()).unwrap();
        let mut worst_pair = 0.0f64;
        let mut worst_real = 0.0f64;
        for trial in 0..100 {
            let f = if trial % 2 == 0 { smooth_field(&g, &mut r, 40, 0.15) } else { rough_field(&g, &mut r) };
            let gg = if trial % 2 == 0 { smooth_field(&g, &mut r, 40, 0.15) } else { rough_field(&g, &mut r) };
            let jf = kern.apply_jk(&f);
            let jg = kern.apply_jk(&gg);
            let fc: Vec<C64> = f.iter().map(|c| c.conj()).collect();
            let jfc = kern.apply_jk(&fc);
            let fs = l2_norm(&g, &f);
            let gs = l2_norm(&g, &gg);
            let lhs: C64 = g.quad_weights.iter().zip(f.iter().zip(&jg)).map(|(w, (a, b))| a.conj() * b * *w).sum();
            let rhs: C64 = g.quad_weights.iter().zip(jfc.iter().zip(&gg)).map(|(w, (a, b))| a * b * *w).sum();
            worst_pair = worst_pair.max((lhs + rhs).norm() / (fs * gs));
            let p: C64 = g.quad_weights.iter().zip(f.iter().zip(&jf)).map(|(w, (a, b))| a.conj() * b * *w).sum();
            worst_real = worst_real.max(p.im.abs() / (fs * fs));
        }
        println!("k={k:3}: antisym build  pairing {:.2e}  realness {:.2e}", worst_pair, worst_real);
    }
}
