//! Defocusing cubic condensate in the anisotropic trap V = (x^2 + 4y^2)/2,
//! with the final density written as a snapshot.

use strang_gpe::io::write_snapshot;
use strang_gpe::prelude::*;

fn main() -> strang_gpe::Result<()> {
    let grid = GridSpec::square(8.0, 256)?;
    let spec = ModelSpec {
        potential: PotentialSpec::quadratic(1.0, 4.0, 1.0)?,
        ..ModelSpec::default()
    };
    let model = spec.prepare(&grid)?;
    let plan = SpectralPlan::new(grid);
    let psi0 = spec.initial.sample(&grid)?;

    let evolution = EvolutionSpec::new(2.0, 0.01, Scheme::Strang, 20, &[2.0])?;
    let mut last = None;
    let run = evolve(&psi0, &model, &plan, &evolution, &BlowupDetector::default(), |obs| {
        if obs.snapshot && obs.step > 0 {
            last = Some(obs.field.clone());
        }
    })?;
    for r in &run.diagnostics {
        println!("t = {:4.2}  E = {:.10}  max|psi|^2 = {:.6}", r.t, r.energy, r.max_density);
    }
    let path = std::env::temp_dir().join("defocusing_trap_t2.gpe2");
    write_snapshot(last.as_ref().expect("snapshot at t = 2"), &path)?;
    println!("snapshot written to {}", path.display());
    Ok(())
}
