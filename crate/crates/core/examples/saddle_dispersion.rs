//! In the saddle V = (x^2 - y^2)/2 the cloud stays confined in x and spreads
//! along y. Prints the second moments over time.

use strang_gpe::prelude::*;

fn second_moments(f: &Field2D) -> (f64, f64) {
    let g = f.grid();
    let (mut sx, mut sy) = (0.0, 0.0);
    for iy in 0..g.ny() {
        for ix in 0..g.nx() {
            let rho = f.at(ix, iy).norm_sqr();
            sx += g.x(ix).powi(2) * rho;
            sy += g.y(iy).powi(2) * rho;
        }
    }
    (sx * g.cell_area(), sy * g.cell_area())
}

fn main() -> strang_gpe::Result<()> {
    let grid = GridSpec::square(8.0, 256)?;
    let spec = ModelSpec {
        potential: PotentialSpec::quadratic(1.0, -1.0, 1.0)?,
        ..ModelSpec::default()
    };
    let model = spec.prepare(&grid)?;
    let plan = SpectralPlan::new(grid);
    let mut psi = spec.initial.sample(&grid)?;

    println!("{:>5} {:>10} {:>10}", "t", "<x^2>", "<y^2>");
    for k in 0..=10 {
        if k > 0 {
            psi = propagate(&psi, &model, &plan, Scheme::Strang, 0.01, 50)?;
        }
        let (sx, sy) = second_moments(&psi);
        println!("{:>5.1} {sx:>10.4} {sy:>10.4}", 0.5 * k as f64);
    }
    Ok(())
}
