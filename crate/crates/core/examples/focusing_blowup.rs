//! Attractive coupling in a tight trap and in the inverted trap. With
//! kappa = -1.9718 a unit-mass Gaussian only breathes; with kappa = -20 it
//! collapses, and collapse comes later when the trap sign is flipped.

use strang_gpe::prelude::*;

fn run(kappa: f64, sign: f64, m: usize, dt: f64) -> strang_gpe::Result<()> {
    let grid = GridSpec::square(8.0, m)?;
    let spec = ModelSpec {
        potential: PotentialSpec::quadratic(sign, sign, 0.3)?,
        nonlinearity: NonlinearitySpec::new(kappa, 3.0)?,
        initial: InitialDataSpec::Gaussian { sigma: 1.0 },
    };
    let model = spec.prepare(&grid)?;
    let plan = SpectralPlan::new(grid);
    let psi0 = spec.initial.sample(&grid)?;
    let evolution = EvolutionSpec::new(1.0, dt, Scheme::Strang, (0.01 / dt).round() as usize, &[])?;
    let out = evolve(&psi0, &model, &plan, &evolution, &BlowupDetector::default(), |_| {})?;
    let peak = out.diagnostics.iter().map(|r| r.max_density).fold(0.0, f64::max);
    let trap = if sign > 0.0 { "trap    " } else { "inverted" };
    match out.status {
        RunStatus::Completed => println!("kappa = {kappa:8.4} {trap}: completed, peak max|psi|^2 = {peak:.4}"),
        RunStatus::BlownUp { at_time } => {
            println!("kappa = {kappa:8.4} {trap}: blow-up detected at t = {at_time:.3}")
        }
    }
    Ok(())
}

fn main() -> strang_gpe::Result<()> {
    run(-1.9718, 1.0, 512, 0.01)?;
    run(-1.9718, -1.0, 512, 0.01)?;
    run(-20.0, 1.0, 256, 1e-3)?;
    run(-20.0, -1.0, 256, 1e-3)?;
    Ok(())
}
