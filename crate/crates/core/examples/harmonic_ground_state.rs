//! The harmonic-oscillator ground state is stationary: its density does not
//! move and its energy stays at 1.

use std::f64::consts::PI;

use strang_gpe::prelude::*;

fn main() -> strang_gpe::Result<()> {
    let grid = GridSpec::square(8.0, 128)?;
    let plan = SpectralPlan::new(grid);
    let potential = PotentialSpec::quadratic(1.0, 1.0, 1.0)?.eval(&grid)?;
    let model = Model::new(potential, NonlinearitySpec::linear())?;
    let psi0 = Field2D::from_fn(grid, |x, y| Complex64::new((-(x * x + y * y) / 2.0).exp() / PI.sqrt(), 0.0));

    let evolution = EvolutionSpec::new(1.0, 1e-3, Scheme::Strang, 250, &[])?;
    let run = evolve(&psi0, &model, &plan, &evolution, &BlowupDetector::default(), |_| {})?;
    for r in &run.diagnostics {
        println!("t = {:.3}  mass = {:.15}  energy = {:.15}", r.t, r.mass, r.energy);
    }
    let drift = run
        .field
        .values()
        .iter()
        .zip(psi0.values())
        .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
        .fold(0.0, f64::max);
    println!("max density change over [0, 1]: {drift:.3e}");
    Ok(())
}
