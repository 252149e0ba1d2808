//! Mesh refinement study over all five table potentials. The run is kept
//! short (T = 0.25) so it finishes in well under a minute.

use strang_gpe::experiments::{render_tables, run_spatial_studies};
use strang_gpe::prelude::*;

fn main() -> strang_gpe::Result<()> {
    let scenarios: Vec<_> = table_scenarios(1.0)?
        .into_iter()
        .map(|s| s.with_t_final(0.25))
        .collect();
    let tables = run_spatial_studies(&scenarios, &[0.25, 0.125, 0.0625], 2e-4)
        .into_iter()
        .collect::<strang_gpe::Result<Vec<_>>>()?;
    print!("{}", render_tables(&tables));
    Ok(())
}
