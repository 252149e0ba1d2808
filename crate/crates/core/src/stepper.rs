//! Operator-splitting integrators and the time-evolution driver.
//!
//! With `A(dt)` the exact kinetic flow and `B(dt)` the exact pointwise
//! potential + nonlinear flow, one step is
//!
//! * Lie: `B(dt) A(dt)` (first order),
//! * Strang: `B(dt/2) A(dt) B(dt/2)` (second order, time symmetric).
//!
//! Both substeps are unitary, so the discrete mass is conserved up to
//! rounding. Negative `dt` runs the exact adjoint composition backwards.

use log::debug;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{max_density, BlowupDetector, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::grid::Field2D;
use crate::model::{pointwise_in_place, Model};
use crate::spectral::{SpectralPlan, Workspace};

const STEP_COUNT_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Lie,
    #[default]
    Strang,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Lie => "lie",
            Scheme::Strang => "strang",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionSpec {
    t_final: f64,
    dt: f64,
    steps: usize,
    scheme: Scheme,
    sample_every: usize,
    snapshot_steps: Vec<usize>,
}

impl EvolutionSpec {
    pub fn new(
        t_final: f64,
        dt: f64,
        scheme: Scheme,
        sample_every: usize,
        snapshot_times: &[f64],
    ) -> Result<Self> {
        let steps = step_count(t_final, dt)?;
        if sample_every == 0 {
            return Err(Error::spec("evolution", "sample_every must be >= 1"));
        }
        let mut snapshot_steps = Vec::with_capacity(snapshot_times.len());
        for (i, &t) in snapshot_times.iter().enumerate() {
            if !(t.is_finite() && (0.0..=t_final).contains(&t)) {
                return Err(Error::spec(
                    "evolution",
                    format!("snapshot time {t} outside [0, {t_final}]"),
                ));
            }
            if i > 0 && t < snapshot_times[i - 1] {
                return Err(Error::spec("evolution", "snapshot times must be sorted"));
            }
            snapshot_steps.push((t / dt).round() as usize);
        }
        snapshot_steps.dedup();
        Ok(EvolutionSpec {
            t_final,
            dt,
            steps,
            scheme,
            sample_every,
            snapshot_steps,
        })
    }

    /// Strang run with diagnostics every step and no snapshots.
    pub fn simple(t_final: f64, dt: f64) -> Result<Self> {
        Self::new(t_final, dt, Scheme::Strang, 1, &[])
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn sample_every(&self) -> usize {
        self.sample_every
    }

    pub fn snapshot_steps(&self) -> &[usize] {
        &self.snapshot_steps
    }

    pub fn time_of(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }
}

/// `N = T / dt`, required to be an integer up to a relative `1e-9`.
pub fn step_count(t_final: f64, dt: f64) -> Result<usize> {
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(Error::spec("evolution", format!("T must be > 0, got {t_final}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::spec("evolution", format!("dt must be > 0, got {dt}")));
    }
    let ratio = t_final / dt;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > STEP_COUNT_RTOL * ratio {
        return Err(Error::spec(
            "evolution",
            format!("T/dt = {ratio} is not an integer"),
        ));
    }
    Ok(n as usize)
}

/// Holds the transform buffers so that repeated steps do not allocate.
pub struct Stepper<'a> {
    model: &'a Model,
    plan: &'a SpectralPlan,
    scheme: Scheme,
    ws: Workspace,
}

impl<'a> Stepper<'a> {
    pub fn new(model: &'a Model, plan: &'a SpectralPlan, scheme: Scheme) -> Result<Self> {
        if model.grid() != plan.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Stepper {
            model,
            plan,
            scheme,
            ws: Workspace::default(),
        })
    }

    fn pointwise(&self, values: &mut [Complex64], dt: f64) -> Result<()> {
        pointwise_in_place(
            values,
            self.model.potential.values(),
            &self.model.nonlinearity,
            dt,
        )
    }

    /// Advances `values` by one step; fails if any sample becomes non-finite.
    pub fn step(&mut self, values: &mut [Complex64], dt: f64) -> Result<()> {
        match self.scheme {
            Scheme::Strang => {
                self.pointwise(values, 0.5 * dt)?;
                self.plan.kinetic_in_place(values, dt, &mut self.ws);
                self.pointwise(values, 0.5 * dt)?;
            }
            Scheme::Lie => {
                self.plan.kinetic_in_place(values, dt, &mut self.ws);
                self.pointwise(values, dt)?;
            }
        }
        if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("time step"))
        }
    }

    pub fn step_field(&mut self, f: &mut Field2D, dt: f64) -> Result<()> {
        if f.grid() != self.plan.grid() {
            return Err(Error::GridMismatch);
        }
        self.step(f.values_mut(), dt)
    }
}

fn single_step(f: &Field2D, model: &Model, plan: &SpectralPlan, dt: f64, scheme: Scheme) -> Result<Field2D> {
    let mut out = f.clone();
    Stepper::new(model, plan, scheme)?.step_field(&mut out, dt)?;
    Ok(out)
}

pub fn strang_step(f: &Field2D, model: &Model, plan: &SpectralPlan, dt: f64) -> Result<Field2D> {
    single_step(f, model, plan, dt, Scheme::Strang)
}

pub fn lie_step(f: &Field2D, model: &Model, plan: &SpectralPlan, dt: f64) -> Result<Field2D> {
    single_step(f, model, plan, dt, Scheme::Lie)
}

/// Applies `steps` steps of size `dt` (which may be negative) without
/// diagnostics.
pub fn propagate(
    f: &Field2D,
    model: &Model,
    plan: &SpectralPlan,
    scheme: Scheme,
    dt: f64,
    steps: usize,
) -> Result<Field2D> {
    let mut out = f.clone();
    let mut stepper = Stepper::new(model, plan, scheme)?;
    for _ in 0..steps {
        stepper.step_field(&mut out, dt)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunStatus {
    Completed,
    BlownUp { at_time: f64 },
}

impl RunStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunStatus::Completed)
    }
}

/// What the observer sees at diagnostics samples and snapshot times.
#[derive(Debug)]
pub struct Observation<'a> {
    pub step: usize,
    pub t: f64,
    pub field: &'a Field2D,
    pub record: Option<&'a DiagnosticsRecord>,
    pub snapshot: bool,
}

#[derive(Debug, Clone)]
pub struct Evolution {
    /// Final field, or the last finite one if the run blew up.
    pub field: Field2D,
    pub time: f64,
    pub steps_taken: usize,
    pub diagnostics: Vec<DiagnosticsRecord>,
    pub status: RunStatus,
}

/// Runs `spec` from `f0`, recording diagnostics at the cadence and calling
/// `observer` at every sample and snapshot step. Blow-up ends the run early
/// and is reported through [`RunStatus`], not as an error.
pub fn evolve(
    f0: &Field2D,
    model: &Model,
    plan: &SpectralPlan,
    spec: &EvolutionSpec,
    detector: &BlowupDetector,
    mut observer: impl FnMut(Observation<'_>),
) -> Result<Evolution> {
    if f0.grid() != plan.grid() {
        return Err(Error::GridMismatch);
    }
    if !f0.is_finite() {
        return Err(Error::NonFinite("initial data"));
    }
    let mut stepper = Stepper::new(model, plan, spec.scheme)?;
    let mut field = f0.clone();
    let mut backup = f0.values().to_vec();
    let mut diagnostics = Vec::with_capacity(spec.steps / spec.sample_every + 2);
    let mut snapshots = spec.snapshot_steps.iter().copied().peekable();

    let first = DiagnosticsRecord::measure(&field, 0.0, model, plan)?;
    let initial_peak = max_density(f0);
    diagnostics.push(first);
    let at_snapshot = snapshots.next_if_eq(&0).is_some();
    observer(Observation {
        step: 0,
        t: 0.0,
        field: &field,
        record: diagnostics.last(),
        snapshot: at_snapshot,
    });

    for n in 1..=spec.steps {
        let t = spec.time_of(n);
        backup.copy_from_slice(field.values());
        if let Err(e) = stepper.step(field.values_mut(), spec.dt) {
            if !matches!(e, Error::NonFinite(_)) {
                return Err(e);
            }
            debug!("non-finite field at step {n} (t = {t})");
            diagnostics.push(DiagnosticsRecord::non_finite(t));
            let last = Field2D::from_values(*field.grid(), backup)?;
            return Ok(Evolution {
                field: last,
                time: spec.time_of(n - 1),
                steps_taken: n - 1,
                diagnostics,
                status: RunStatus::BlownUp { at_time: t },
            });
        }

        let sample = n % spec.sample_every == 0 || n == spec.steps;
        let snapshot = snapshots.next_if_eq(&n).is_some();
        if !(sample || snapshot) {
            continue;
        }
        let mut record = None;
        if sample {
            let rec = DiagnosticsRecord::measure(&field, t, model, plan)?;
            diagnostics.push(rec);
            record = diagnostics.last();
        }
        observer(Observation {
            step: n,
            t,
            field: &field,
            record,
            snapshot,
        });
        if let Some(rec) = record {
            if detector.check(rec, initial_peak) {
                debug!("blow-up detected at t = {t}: max density {}", rec.max_density);
                return Ok(Evolution {
                    field,
                    time: t,
                    steps_taken: n,
                    diagnostics,
                    status: RunStatus::BlownUp { at_time: t },
                });
            }
        }
    }

    Ok(Evolution {
        field,
        time: spec.t_final,
        steps_taken: spec.steps,
        diagnostics,
        status: RunStatus::Completed,
    })
}
