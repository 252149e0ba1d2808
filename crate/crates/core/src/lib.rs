//! Time-splitting Fourier-spectral solver for the two-dimensional
//! Gross-Pitaevskii / nonlinear Schrödinger equation
//!
//! ```text
//! i psi_t = -1/2 Lap psi + V psi + kappa |psi|^(p-1) psi
//! ```
//!
//! on a periodic rectangle, with diagnostics (mass, energy, peak density,
//! blow-up detection) and a self-convergence study harness.
//!
//! ```no_run
//! use strang_gpe::prelude::*;
//!
//! let grid = GridSpec::square(8.0, 256)?;
//! let spec = ModelSpec {
//!     potential: PotentialSpec::quadratic(1.0, 4.0, 1.0)?,
//!     ..ModelSpec::default()
//! };
//! let model = spec.prepare(&grid)?;
//! let plan = SpectralPlan::new(grid);
//! let psi0 = spec.initial.sample(&grid)?;
//! let evolution = EvolutionSpec::simple(2.0, 0.01)?;
//! let run = evolve(&psi0, &model, &plan, &evolution, &BlowupDetector::default(), |_| {})?;
//! println!("final mass {}", run.diagnostics.last().unwrap().mass);
//! # Ok::<(), strang_gpe::Error>(())
//! ```

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod io;
pub mod model;
pub mod spectral;
pub mod stepper;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::diagnostics::{energy, l2_error, max_density, BlowupDetector, DiagnosticsRecord};
    pub use crate::error::{Error, Result};
    pub use crate::experiments::{
        estimate_order, nested_restrict, run_spatial_study, run_temporal_study, table_scenarios,
        ConvergenceRow, ConvergenceTable, ScenarioSpec, StudyAxis,
    };
    pub use crate::grid::{Field2D, GridSpec, WaveNumbers};
    pub use crate::model::{
        potential_nonlinear_step, InitialDataSpec, Model, ModelSpec, NonlinearitySpec, Potential,
        PotentialSpec,
    };
    pub use crate::spectral::SpectralPlan;
    pub use crate::stepper::{
        evolve, lie_step, propagate, strang_step, Evolution, EvolutionSpec, Observation, RunStatus,
        Scheme,
    };
    pub use num_complex::Complex64;
}
