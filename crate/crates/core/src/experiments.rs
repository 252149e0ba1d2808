//! Self-convergence studies in space and time.
//!
//! No closed-form solutions are available for the trapped nonlinear
//! scenarios, so the "exact" solution of every study is a finer numerical
//! run: one grid level finer (compared on nested nodes) for spatial
//! studies, and the same grid at a quarter of the smallest time step for
//! temporal studies.

use std::fmt::Write as _;

use log::info;
use rayon::prelude::*;

use crate::diagnostics::{l2_error, BlowupDetector};
use crate::error::{Error, Result};
use crate::grid::{Field2D, GridSpec};
use crate::model::{ModelSpec, PotentialSpec};
use crate::spectral::SpectralPlan;
use crate::stepper::{evolve, EvolutionSpec, RunStatus, Scheme};

const HALVING_RTOL: f64 = 1e-12;

/// A model, a domain and a final time: one row of the error tables.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub label: String,
    /// `(a, b, c, d)`.
    pub bounds: (f64, f64, f64, f64),
    pub model: ModelSpec,
    pub t_final: f64,
    pub scheme: Scheme,
}

impl ScenarioSpec {
    /// Defocusing cubic run from `g_1` on `[-8,8]^2` up to `t = 1`.
    pub fn defocusing(label: impl Into<String>, potential: PotentialSpec) -> Self {
        ScenarioSpec {
            label: label.into(),
            bounds: (-8.0, 8.0, -8.0, 8.0),
            model: ModelSpec {
                potential,
                ..ModelSpec::default()
            },
            t_final: 1.0,
            scheme: Scheme::Strang,
        }
    }

    pub fn with_t_final(mut self, t_final: f64) -> Self {
        self.t_final = t_final;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    /// Grid with spacing `h` in both directions.
    pub fn grid_for_spacing(&self, h: f64) -> Result<GridSpec> {
        let (a, b, c, d) = self.bounds;
        let count = |len: f64| -> Result<usize> {
            let m = (len / h).round();
            if h.is_nan() || h <= 0.0 || m < 1.0 || (m * h - len).abs() > 1e-9 * len {
                return Err(Error::spec(
                    "study",
                    format!("spacing {h} does not divide the domain length {len}"),
                ));
            }
            Ok(m as usize)
        };
        GridSpec::new(a, b, c, d, count(b - a)?, count(d - c)?)
    }

    /// Evolves the initial data on `grid` with step `dt`. `Err(t)` in the
    /// inner result carries the blow-up time.
    pub fn solve(&self, grid: &GridSpec, dt: f64) -> Result<Result<Field2D, f64>> {
        let model = self.model.prepare(grid)?;
        let plan = SpectralPlan::new(*grid);
        let f0 = self.model.initial.sample(grid)?;
        let steps = crate::stepper::step_count(self.t_final, dt)?;
        let spec = EvolutionSpec::new(self.t_final, dt, self.scheme, steps, &[])?;
        let run = evolve(&f0, &model, &plan, &spec, &BlowupDetector::default(), |_| {})?;
        Ok(match run.status {
            RunStatus::Completed => Ok(run.field),
            RunStatus::BlownUp { at_time } => Err(at_time),
        })
    }
}

/// The five potentials of the defocusing error tables, scaled by `1/eps`.
pub fn table_scenarios(eps: f64) -> Result<Vec<ScenarioSpec>> {
    let q = |cx, cy| PotentialSpec::quadratic(cx, cy, eps);
    Ok(vec![
        ScenarioSpec::defocusing("0", PotentialSpec::Zero),
        ScenarioSpec::defocusing("(x^2+y^2)/2eps", q(1.0, 1.0)?),
        ScenarioSpec::defocusing("-(x^2+y^2)/2eps", q(-1.0, -1.0)?),
        ScenarioSpec::defocusing("(x^2+10y^2)/2eps", q(1.0, 10.0)?),
        ScenarioSpec::defocusing("(x^2-10y^2)/2eps", q(1.0, -10.0)?),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyAxis {
    Spatial,
    Temporal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    /// `h` for spatial studies, `dt` for temporal ones.
    pub resolution: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub axis: StudyAxis,
    pub label: String,
    pub rows: Vec<ConvergenceRow>,
    pub fitted_order: Option<f64>,
    /// How the reference solution was built.
    pub reference: String,
    pub t_final: f64,
    pub status: RunStatus,
}

impl ConvergenceTable {
    pub fn is_complete(&self) -> bool {
        self.status.is_completed()
    }

    /// Ratios `e_i / e_{i+1}` of consecutive errors.
    pub fn error_ratios(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| w[0].error / w[1].error).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("resolution,error\n");
        for row in &self.rows {
            let _ = writeln!(out, "{:.16e},{:.16e}", row.resolution, row.error);
        }
        out
    }

    pub fn to_text(&self) -> String {
        render_tables(std::slice::from_ref(self))
    }
}

/// Least-squares slope of `ln(error)` against `ln(resolution)`.
pub fn estimate_order(rows: &[ConvergenceRow]) -> Option<f64> {
    if rows.len() < 2 || rows.iter().any(|r| !(r.error > 0.0 && r.resolution > 0.0)) {
        return None;
    }
    let n = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.resolution.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.error.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Subsamples `fine` onto the nodes of `coarse`; the grids must share bounds
/// and the fine counts must be multiples of the coarse ones.
pub fn nested_restrict(fine: &Field2D, coarse: &GridSpec) -> Result<Field2D> {
    let fg = fine.grid();
    if !fg.same_bounds(coarse) {
        return Err(Error::NotNested("bounds differ".into()));
    }
    if !fg.nx().is_multiple_of(coarse.nx()) || !fg.ny().is_multiple_of(coarse.ny()) {
        return Err(Error::NotNested(format!(
            "{}x{} is not a refinement of {}x{}",
            fg.nx(),
            fg.ny(),
            coarse.nx(),
            coarse.ny()
        )));
    }
    let (sx, sy) = (fg.nx() / coarse.nx(), fg.ny() / coarse.ny());
    let mut values = Vec::with_capacity(coarse.len());
    for iy in 0..coarse.ny() {
        for ix in 0..coarse.nx() {
            values.push(fine.at(ix * sx, iy * sy));
        }
    }
    Field2D::from_values(*coarse, values)
}

fn check_halving(list: &[f64], what: &str) -> Result<()> {
    if list.is_empty() {
        return Err(Error::spec("study", format!("empty {what} list")));
    }
    if list.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::spec("study", format!("{what} values must be positive")));
    }
    for w in list.windows(2) {
        if ((w[0] / w[1]) - 2.0).abs() > HALVING_RTOL * 2.0 {
            return Err(Error::spec(
                "study",
                format!("{what} list must halve at each entry ({} -> {})", w[0], w[1]),
            ));
        }
    }
    Ok(())
}

fn finish(
    axis: StudyAxis,
    scenario: &ScenarioSpec,
    rows: Vec<ConvergenceRow>,
    reference: String,
    status: RunStatus,
) -> ConvergenceTable {
    let fitted_order = if status.is_completed() {
        estimate_order(&rows)
    } else {
        None
    };
    ConvergenceTable {
        axis,
        label: scenario.label.clone(),
        rows,
        fitted_order,
        reference,
        t_final: scenario.t_final,
        status,
    }
}

/// Spatial study at fixed `dt`: one row per spacing in `h_list` (halving,
/// coarse to fine), errors against a run at half the finest spacing.
pub fn run_spatial_study(scenario: &ScenarioSpec, h_list: &[f64], dt: f64) -> Result<ConvergenceTable> {
    check_halving(h_list, "spacing")?;
    let h_ref = h_list[h_list.len() - 1] / 2.0;
    let ref_grid = scenario.grid_for_spacing(h_ref)?;
    let grids = h_list
        .iter()
        .map(|&h| scenario.grid_for_spacing(h))
        .collect::<Result<Vec<_>>>()?;
    let reference = format!(
        "self-convergence reference: h = {h_ref} ({}x{} nodes), dt = {dt}, compared on nested nodes",
        ref_grid.nx(),
        ref_grid.ny()
    );
    info!("[{}] spatial reference on {}x{}", scenario.label, ref_grid.nx(), ref_grid.ny());
    let fine = match scenario.solve(&ref_grid, dt)? {
        Ok(f) => f,
        Err(t) => {
            let status = RunStatus::BlownUp { at_time: t };
            return Ok(finish(StudyAxis::Spatial, scenario, Vec::new(), reference, status));
        }
    };
    let mut rows = Vec::with_capacity(h_list.len());
    for (&h, grid) in h_list.iter().zip(&grids) {
        match scenario.solve(grid, dt)? {
            Ok(f) => rows.push(ConvergenceRow {
                resolution: h,
                error: l2_error(&f, &nested_restrict(&fine, grid)?)?,
            }),
            Err(t) => {
                let status = RunStatus::BlownUp { at_time: t };
                return Ok(finish(StudyAxis::Spatial, scenario, rows, reference, status));
            }
        }
    }
    Ok(finish(StudyAxis::Spatial, scenario, rows, reference, RunStatus::Completed))
}

/// Temporal study on the fixed grid of spacing `h`: one row per step in
/// `dt_list` (halving), errors against a run at a quarter of the smallest step.
pub fn run_temporal_study(scenario: &ScenarioSpec, dt_list: &[f64], h: f64) -> Result<ConvergenceTable> {
    check_halving(dt_list, "time step")?;
    let grid = scenario.grid_for_spacing(h)?;
    let dt_ref = dt_list[dt_list.len() - 1] / 4.0;
    for &dt in dt_list.iter().chain(std::iter::once(&dt_ref)) {
        crate::stepper::step_count(scenario.t_final, dt)?;
    }
    let reference = format!(
        "self-convergence reference: dt = {dt_ref} on the same {}x{} grid (h = {h})",
        grid.nx(),
        grid.ny()
    );
    let mut fields = Vec::with_capacity(dt_list.len());
    for &dt in dt_list {
        match scenario.solve(&grid, dt)? {
            Ok(f) => fields.push(f),
            Err(t) => {
                let rows = Vec::new();
                let status = RunStatus::BlownUp { at_time: t };
                return Ok(finish(StudyAxis::Temporal, scenario, rows, reference, status));
            }
        }
    }
    info!("[{}] temporal reference at dt = {dt_ref}", scenario.label);
    let fine = match scenario.solve(&grid, dt_ref)? {
        Ok(f) => f,
        Err(t) => {
            let status = RunStatus::BlownUp { at_time: t };
            return Ok(finish(StudyAxis::Temporal, scenario, Vec::new(), reference, status));
        }
    };
    let rows = dt_list
        .iter()
        .zip(&fields)
        .map(|(&dt, f)| {
            Ok(ConvergenceRow {
                resolution: dt,
                error: l2_error(f, &fine)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(StudyAxis::Temporal, scenario, rows, reference, RunStatus::Completed))
}

/// Runs one spatial study per scenario in parallel.
pub fn run_spatial_studies(scenarios: &[ScenarioSpec], h_list: &[f64], dt: f64) -> Vec<Result<ConvergenceTable>> {
    scenarios
        .par_iter()
        .map(|s| run_spatial_study(s, h_list, dt))
        .collect()
}

/// Runs one temporal study per scenario in parallel.
pub fn run_temporal_studies(scenarios: &[ScenarioSpec], dt_list: &[f64], h: f64) -> Vec<Result<ConvergenceTable>> {
    scenarios
        .par_iter()
        .map(|s| run_temporal_study(s, dt_list, h))
        .collect()
}

fn resolution_label(axis: StudyAxis, value: f64) -> String {
    match axis {
        StudyAxis::Spatial => {
            let inv = 1.0 / value;
            if (inv - inv.round()).abs() < 1e-9 {
                format!("h=1/{}", inv.round())
            } else {
                format!("h={value}")
            }
        }
        StudyAxis::Temporal => format!("dt={value}"),
    }
}

/// Aligned plain-text layout: one line per scenario, one column per resolution.
pub fn render_tables(tables: &[ConvergenceTable]) -> String {
    let mut out = String::new();
    let Some(first) = tables.first() else {
        return out;
    };
    let title = match first.axis {
        StudyAxis::Spatial => "Spatial discretization error",
        StudyAxis::Temporal => "Temporal discretization error",
    };
    let _ = writeln!(out, "{title} ||psi_ref - psi||_L2 at t={}", first.t_final);
    for t in tables {
        let _ = writeln!(out, "# [{}] {}", t.label, t.reference);
    }
    let columns: Vec<f64> = tables
        .iter()
        .max_by_key(|t| t.rows.len())
        .map(|t| t.rows.iter().map(|r| r.resolution).collect())
        .unwrap_or_default();
    let label_width = tables
        .iter()
        .map(|t| t.label.len())
        .chain(std::iter::once("Potential V".len()))
        .max()
        .unwrap_or(0);
    let _ = write!(out, "{:<label_width$}", "Potential V");
    for &c in &columns {
        let _ = write!(out, "  {:>12}", resolution_label(first.axis, c));
    }
    let _ = writeln!(out, "  {:>8}", "order");
    for t in tables {
        let _ = write!(out, "{:<label_width$}", t.label);
        for i in 0..columns.len() {
            match t.rows.get(i) {
                Some(r) => {
                    let _ = write!(out, "  {:>12.4e}", r.error);
                }
                None => {
                    let _ = write!(out, "  {:>12}", "-");
                }
            }
        }
        match (t.fitted_order, t.status) {
            (Some(p), _) => {
                let _ = writeln!(out, "  {p:>8.3}");
            }
            (None, RunStatus::BlownUp { at_time }) => {
                let _ = writeln!(out, "  blow-up at t={at_time}");
            }
            (None, _) => {
                let _ = writeln!(out, "  {:>8}", "n/a");
            }
        }
    }
    out
}
