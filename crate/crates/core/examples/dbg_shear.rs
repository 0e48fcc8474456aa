use chanstab_core::grid::build_grid;
use chanstab_core::shear::*;
use chanstab_core::grid::apply_real;

fn main() {
    let g = build_grid(64).unwrap();
    let init = InitialShear::from_spec(g.clone(), &ShearSpec::Sine(0.05)).unwrap();
    println!("kappa = {}", init.kappa);
    println!("compatible = {}", init.compatible);
    let dev: Vec<f64> = init.profile.iter().zip(&g.nodes).map(|(u,y)| u-y).collect();
    let d2 = apply_real(&g.diff2_matrix, &dev);
    let d4 = apply_real(&g.diff2_matrix, &d2);
    println!("d2 walls: {:e} {:e}, max {:e}", d2[0], d2[63], d2.iter().fold(0.0f64,|a,b| a.max(b.abs())));
    println!("d4 walls: {:e} {:e}, max {:e}", d4[0], d4[63], d4.iter().fold(0.0f64,|a,b| a.max(b.abs())));

    // frozen at j=0 reconstruction error
    let nu = 1e-4;
    let p0 = frozen_shear(&init, nu, 0).unwrap();
    let mut maxerr = 0.0f64;
    for (u,v) in p0.u.iter().zip(&init.profile) { maxerr = maxerr.max((u-v).abs()); }
    println!("j=0 reconstruction err = {:e}", maxerr);
}
