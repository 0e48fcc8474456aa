use chanstab_core::field::{ComplexField, WavenumberContext};
use chanstab_core::ghost::build_ghost;
use chanstab_core::grid::build_grid;
use chanstab_core::C64;

fn main() {
    for (name, f) in [("(1-y^2)", 1usize), ("(1-y^2)^2", 2), ("(1-y^2)^2 cos3y", 3)] {
        let mut res = Vec::new();
        for n in [64usize, 128, 256] {
            let g = build_grid(n).unwrap();
            let ctx = WavenumberContext::new(1, 1e-3).unwrap();
            let kern = build_ghost(&ctx, g.clone()).unwrap();
            let fv = ComplexField::from_fn(g.clone(), |y| {
                let b = 1.0 - y * y;
                let v = match f { 1 => b, 2 => b * b, _ => b * b * (3.0 * y).cos() };
                C64::new(v, 0.0)
            });
            res.push(kern.commutator_check(&fv));
        }
        println!("{name:20} residuals {:?}  ratios {:.2} {:.2}", res, res[0]/res[1], res[1]/res[2]);
    }
}
