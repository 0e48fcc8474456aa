use chanstab_core::field::{ComplexField, WavenumberContext};
use chanstab_core::ghost::build_ghost;
use chanstab_core::grid::build_grid;
use chanstab_core::C64;

fn main() {
    for n in [64usize, 128, 256, 512] {
        let g = build_grid(n).unwrap();
        let ctx = WavenumberContext::new(1, 1e-3).unwrap();
        let kern = build_ghost(&ctx, g.clone()).unwrap();
        let f = ComplexField::from_fn(g.clone(), |y| C64::new(1.0 - y * y, 0.0));
        let res = kern.commutator_check(&f);
        println!("n={n:4}  commutator residual = {res:.6e}");
    }
    let g = build_grid(96).unwrap();
    for k in [1, 2, 4, 8, 16] {
        let ctx = WavenumberContext::new(k, 1e-3).unwrap();
        let kern = build_ghost(&ctx, g.clone()).unwrap();
        println!("k={k:3}  ||J|| = {:.4}  ||H||/|k| = {:.4}", kern.jk_operator_norm(), kern.hk_operator_norm() / k as f64);
    }
}
