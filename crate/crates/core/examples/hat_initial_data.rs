//! Hat-function start h(x,y) = (8-|x|)(8-|y|) in the inverted trap, cubic
//! versus quintic defocusing term.

use strang_gpe::prelude::*;

fn main() -> strang_gpe::Result<()> {
    let grid = GridSpec::square(8.0, 256)?;
    let plan = SpectralPlan::new(grid);
    let evolution = EvolutionSpec::new(5.0, 0.01, Scheme::Strang, 50, &[])?;
    for p in [3.0, 5.0] {
        let spec = ModelSpec {
            potential: PotentialSpec::quadratic(-1.0, -1.0, 0.3)?,
            nonlinearity: NonlinearitySpec::new(1.0, p)?,
            initial: InitialDataSpec::Hat { half_width: None },
        };
        let model = spec.prepare(&grid)?;
        let psi0 = spec.initial.sample(&grid)?;
        println!("p = {p}: ||psi0||^2 = {:.6}", psi0.mass()?);
        let run = evolve(&psi0, &model, &plan, &evolution, &BlowupDetector::default(), |_| {})?;
        for r in &run.diagnostics {
            println!("  t = {:.1}  max|psi|^2 = {:.6e}", r.t, r.max_density);
        }
    }
    Ok(())
}
