//! Linear free evolution of a Gaussian compared with its closed-form spreading
//! solution on the periodic box.

use std::f64::consts::PI;

use strang_gpe::prelude::*;

fn spreading(t: f64, x: f64, y: f64) -> Complex64 {
    let i = Complex64::i();
    (-(x * x + y * y) / (2.0 * (1.0 + i * t))).exp() / PI.sqrt() / (1.0 + i * t)
}

fn main() -> strang_gpe::Result<()> {
    let grid = GridSpec::square(8.0, 256)?;
    let (lx, ly) = grid.lengths();
    let plan = SpectralPlan::new(grid);
    let model = Model::new(Potential::zero(grid), NonlinearitySpec::linear())?;
    let psi0 = InitialDataSpec::Gaussian { sigma: 1.0 }.sample(&grid)?;

    println!("{:>6} {:>14} {:>14}", "t", "L2 error", "max|psi|^2");
    let mut psi = psi0;
    let dt = 1e-3;
    for k in 1..=4 {
        psi = propagate(&psi, &model, &plan, Scheme::Strang, dt, 250)?;
        let t = 0.25 * k as f64;
        let exact = Field2D::from_fn(grid, |x, y| {
            let mut s = Complex64::new(0.0, 0.0);
            for n in -2..=2 {
                for m in -2..=2 {
                    s += spreading(t, x + n as f64 * lx, y + m as f64 * ly);
                }
            }
            s
        });
        println!("{t:>6.2} {:>14.3e} {:>14.6}", l2_error(&psi, &exact)?, max_density(&psi));
    }
    Ok(())
}
