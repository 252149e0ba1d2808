//! Time-step refinement study for two defocusing scenarios at h = 1/8.

use strang_gpe::experiments::render_tables;
use strang_gpe::prelude::*;

fn main() -> strang_gpe::Result<()> {
    let dts = [0.01, 0.005, 0.0025, 0.00125, 0.000625];
    let scenarios = [
        ScenarioSpec::defocusing("0", PotentialSpec::Zero),
        ScenarioSpec::defocusing("(x^2+y^2)/2", PotentialSpec::quadratic(1.0, 1.0, 1.0)?),
    ];
    let tables = scenarios
        .iter()
        .map(|s| run_temporal_study(s, &dts, 1.0 / 8.0))
        .collect::<strang_gpe::Result<Vec<_>>>()?;
    print!("{}", render_tables(&tables));
    Ok(())
}
