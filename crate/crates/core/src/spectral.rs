//! 2D discrete Fourier transforms and the exact flow of the kinetic term.
//!
//! Conventions: `forward` is the unnormalized sum
//! `fhat[p,q] = sum_{j,k} f[j,k] exp(-i (kx_p x_j + ky_q y_k))` up to the
//! constant phase from the domain offset (which cancels in every quantity
//! computed here), and `inverse` divides by `nx*ny`. With these, the discrete
//! Parseval identity reads `sum |f|^2 dx dy = (dx dy / (nx ny)) sum |fhat|^2`.

use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{Field2D, GridSpec, WaveNumbers};

const PHASE_CACHE_SLOTS: usize = 4;

type PhaseTable = Arc<[Complex64]>;

pub struct SpectralPlan {
    grid: GridSpec,
    wavenumbers: WaveNumbers,
    k_squared: Vec<f64>,
    keep: Option<Vec<bool>>,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
    phases: Mutex<Vec<(u64, PhaseTable)>>,
}

impl std::fmt::Debug for SpectralPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralPlan")
            .field("grid", &self.grid)
            .field("dealias", &self.keep.is_some())
            .finish()
    }
}

/// Reusable transform buffers; one per evolving field.
#[derive(Debug, Default)]
pub(crate) struct Workspace {
    transposed: Vec<Complex64>,
    fft: Vec<Complex64>,
}

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Inverse,
}

impl SpectralPlan {
    pub fn new(grid: GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let wavenumbers = grid.wavenumbers();
        let mut k_squared = Vec::with_capacity(grid.len());
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                k_squared.push(wavenumbers.k_squared(ix, iy));
            }
        }
        SpectralPlan {
            grid,
            fwd_x: planner.plan_fft_forward(grid.nx()),
            inv_x: planner.plan_fft_inverse(grid.nx()),
            fwd_y: planner.plan_fft_forward(grid.ny()),
            inv_y: planner.plan_fft_inverse(grid.ny()),
            wavenumbers,
            k_squared,
            keep: None,
            phases: Mutex::new(Vec::new()),
        }
    }

    /// Enables the 2/3-rule filter: modes with `|kx| > 2/3 max|kx|` (or the
    /// same in `y`) are zeroed by every kinetic step.
    pub fn with_dealias(mut self, enabled: bool) -> Self {
        self.keep = enabled.then(|| {
            let kx_cut = 2.0 / 3.0 * max_abs(&self.wavenumbers.kx);
            let ky_cut = 2.0 / 3.0 * max_abs(&self.wavenumbers.ky);
            let mut keep = Vec::with_capacity(self.grid.len());
            for ky in &self.wavenumbers.ky {
                for kx in &self.wavenumbers.kx {
                    keep.push(kx.abs() <= kx_cut && ky.abs() <= ky_cut);
                }
            }
            keep
        });
        self.phases.lock().unwrap().clear();
        self
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn wavenumbers(&self) -> &WaveNumbers {
        &self.wavenumbers
    }

    pub fn dealias(&self) -> bool {
        self.keep.is_some()
    }

    fn check(&self, f: &Field2D) -> Result<()> {
        if *f.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn forward(&self, f: &Field2D) -> Result<Field2D> {
        self.check(f)?;
        let mut out = f.clone();
        self.forward_in_place(out.values_mut(), &mut Workspace::default());
        Ok(out)
    }

    pub fn inverse(&self, fhat: &Field2D) -> Result<Field2D> {
        self.check(fhat)?;
        let mut out = fhat.clone();
        self.inverse_in_place(out.values_mut(), &mut Workspace::default());
        Ok(out)
    }

    pub(crate) fn forward_in_place(&self, data: &mut [Complex64], ws: &mut Workspace) {
        self.transform(data, ws, Direction::Forward);
    }

    pub(crate) fn inverse_in_place(&self, data: &mut [Complex64], ws: &mut Workspace) {
        self.transform(data, ws, Direction::Inverse);
        let norm = 1.0 / self.grid.len() as f64;
        for z in data.iter_mut() {
            *z *= norm;
        }
    }

    fn transform(&self, data: &mut [Complex64], ws: &mut Workspace, dir: Direction) {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        debug_assert_eq!(data.len(), nx * ny);
        let (fx, fy) = match dir {
            Direction::Forward => (&self.fwd_x, &self.fwd_y),
            Direction::Inverse => (&self.inv_x, &self.inv_y),
        };
        ws.transposed.resize(nx * ny, Complex64::default());
        let fft_len = fx.get_inplace_scratch_len().max(fy.get_inplace_scratch_len());
        ws.fft.resize(fft_len, Complex64::default());

        // rows are contiguous
        fx.process_with_scratch(data, &mut ws.fft[..fx.get_inplace_scratch_len()]);
        // columns: transpose, transform, transpose back
        transpose(data, &mut ws.transposed, nx, ny);
        fy.process_with_scratch(&mut ws.transposed, &mut ws.fft[..fy.get_inplace_scratch_len()]);
        transpose(&ws.transposed, data, ny, nx);
    }

    /// `exp(-i |k|^2 dt / 2)` for every mode (zero on filtered modes).
    pub fn kinetic_phases(&self, dt: f64) -> PhaseTable {
        let key = dt.to_bits();
        let mut cache = self.phases.lock().unwrap();
        if let Some((_, table)) = cache.iter().find(|(k, _)| *k == key) {
            return Arc::clone(table);
        }
        let table: PhaseTable = self
            .k_squared
            .iter()
            .enumerate()
            .map(|(i, &k2)| {
                if self.keep.as_ref().is_some_and(|m| !m[i]) {
                    Complex64::default()
                } else {
                    Complex64::from_polar(1.0, -0.5 * k2 * dt)
                }
            })
            .collect();
        if cache.len() == PHASE_CACHE_SLOTS {
            cache.remove(0);
        }
        cache.push((key, Arc::clone(&table)));
        table
    }

    pub(crate) fn kinetic_in_place(
        &self,
        data: &mut [Complex64],
        dt: f64,
        ws: &mut Workspace,
    ) {
        let phases = self.kinetic_phases(dt);
        self.forward_in_place(data, ws);
        for (z, p) in data.iter_mut().zip(phases.iter()) {
            *z *= p;
        }
        self.inverse_in_place(data, ws);
    }

    /// Exact solution of `i psi_t = -1/2 Lap psi` over a time `dt` (any sign).
    pub fn kinetic_step(&self, f: &Field2D, dt: f64) -> Result<Field2D> {
        self.check(f)?;
        if !f.is_finite() || !dt.is_finite() {
            return Err(Error::NonFinite("kinetic step input"));
        }
        let mut out = f.clone();
        self.kinetic_in_place(out.values_mut(), dt, &mut Workspace::default());
        Ok(out)
    }

    /// `sum |fhat|^2 dx dy / (nx ny)`, equal to the nodal mass by Parseval.
    pub fn spectral_mass(&self, fhat: &Field2D) -> Result<f64> {
        self.check(fhat)?;
        let w = self.grid.cell_area() / self.grid.len() as f64;
        Ok(fhat.values().iter().map(|z| z.norm_sqr()).sum::<f64>() * w)
    }

    /// `integral of 1/2 |grad psi|^2`, evaluated in Fourier space.
    pub fn kinetic_energy(&self, f: &Field2D) -> Result<f64> {
        self.check(f)?;
        if !f.is_finite() {
            return Err(Error::NonFinite("kinetic energy input"));
        }
        let mut fhat = f.values().to_vec();
        self.forward_in_place(&mut fhat, &mut Workspace::default());
        let w = self.grid.cell_area() / self.grid.len() as f64;
        let sum: f64 = fhat
            .iter()
            .zip(&self.k_squared)
            .map(|(z, k2)| 0.5 * k2 * z.norm_sqr())
            .sum();
        Ok(sum * w)
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `src` is `rows x cols` row-major; `dst` becomes `cols x rows`.
fn transpose(src: &[Complex64], dst: &mut [Complex64], cols: usize, rows: usize) {
    const BLOCK: usize = 32;
    for r0 in (0..rows).step_by(BLOCK) {
        for c0 in (0..cols).step_by(BLOCK) {
            for r in r0..(r0 + BLOCK).min(rows) {
                for c in c0..(c0 + BLOCK).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> GridSpec {
        GridSpec::new(-8.0, 8.0, -4.0, 4.0, 32, 16).unwrap()
    }

    fn max_diff(a: &Field2D, b: &Field2D) -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn gaussian(g: GridSpec) -> Field2D {
        Field2D::from_fn(g, |x, y| {
            Complex64::new((-(x * x + y * y) / 2.0).exp() / PI.sqrt(), 0.0)
        })
    }

    #[test]
    fn constant_has_only_zero_mode() {
        let g = grid();
        let plan = SpectralPlan::new(g);
        let f = Field2D::from_fn(g, |_, _| Complex64::new(2.0, -1.0));
        let fhat = plan.forward(&f).unwrap();
        let n = g.len() as f64;
        assert!((fhat.values()[0] - Complex64::new(2.0 * n, -n)).norm() < 1e-10);
        assert!(fhat.values()[1..].iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn plane_wave_is_single_bin() {
        let g = grid();
        let plan = SpectralPlan::new(g);
        let k1 = plan.wavenumbers().kx[1];
        let f = Field2D::from_fn(g, |x, _| Complex64::new(0.0, k1 * x).exp());
        let fhat = plan.forward(&f).unwrap();
        for (i, z) in fhat.values().iter().enumerate() {
            if i == g.index(1, 0) {
                assert!((z.norm() - g.len() as f64).abs() < 1e-9);
            } else {
                assert!(z.norm() < 1e-10, "bin {i} = {z}");
            }
        }
    }

    #[test]
    fn inverse_of_scaled_delta_is_one() {
        let g = grid();
        let plan = SpectralPlan::new(g);
        let mut d = Field2D::zeros(g);
        d.values_mut()[0] = Complex64::new(g.len() as f64, 0.0);
        let f = plan.inverse(&d).unwrap();
        assert!(f.values().iter().all(|z| (z - 1.0).norm() < 1e-14));
        let z = plan.inverse(&Field2D::zeros(g)).unwrap();
        assert!(z.values().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn round_trip_gaussian() {
        let g = GridSpec::square(8.0, 64).unwrap();
        let plan = SpectralPlan::new(g);
        let f = gaussian(g);
        let back = plan.inverse(&plan.forward(&f).unwrap()).unwrap();
        assert!(max_diff(&f, &back) < 1e-13);
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let plan = SpectralPlan::new(grid());
        let other = Field2D::zeros(GridSpec::square(8.0, 32).unwrap());
        assert!(matches!(plan.forward(&other), Err(Error::GridMismatch)));
        assert!(matches!(plan.inverse(&other), Err(Error::GridMismatch)));
        assert!(matches!(plan.kinetic_step(&other, 0.1), Err(Error::GridMismatch)));
    }

    #[test]
    fn kinetic_step_on_plane_wave_is_a_phase() {
        let g = grid();
        let plan = SpectralPlan::new(g);
        let (kx, ky) = (plan.wavenumbers().kx[3], plan.wavenumbers().ky[14]);
        let wave = |x: f64, y: f64| Complex64::new(0.0, kx * x + ky * y).exp();
        let f = Field2D::from_fn(g, wave);
        let dt = 0.37;
        let stepped = plan.kinetic_step(&f, dt).unwrap();
        let phase = Complex64::from_polar(1.0, -(kx * kx + ky * ky) * dt / 2.0);
        assert!(max_diff(&stepped, &f.scaled(phase)) < 1e-12);

        let c = Field2D::from_fn(g, |_, _| Complex64::new(0.5, 0.5));
        assert!(max_diff(&plan.kinetic_step(&c, 123.4).unwrap(), &c) < 1e-14);
    }

    #[test]
    fn kinetic_step_reverses() {
        let g = GridSpec::square(8.0, 64).unwrap();
        let plan = SpectralPlan::new(g);
        let f = gaussian(g);
        let there = plan.kinetic_step(&f, 0.7).unwrap();
        let back = plan.kinetic_step(&there, -0.7).unwrap();
        assert!(max_diff(&f, &back) < 1e-12);
    }

    #[test]
    fn kinetic_step_rejects_nan() {
        let g = grid();
        let plan = SpectralPlan::new(g);
        let mut f = Field2D::zeros(g);
        f.values_mut()[5].im = f64::INFINITY;
        assert!(matches!(plan.kinetic_step(&f, 0.1), Err(Error::NonFinite(_))));
        assert!(plan.kinetic_energy(&f).is_err());
    }

    #[test]
    fn kinetic_energy_cases() {
        let g = GridSpec::square(8.0, 128).unwrap();
        let plan = SpectralPlan::new(g);
        let c = Field2D::from_fn(g, |_, _| Complex64::new(1.0, 0.0));
        assert!(plan.kinetic_energy(&c).unwrap().abs() < 1e-20);

        // unit-norm plane wave: |k|^2 / 2
        let (kx, ky) = (plan.wavenumbers().kx[5], plan.wavenumbers().ky[120]);
        let amp = 1.0 / 16.0;
        let w = Field2D::from_fn(g, |x, y| Complex64::from_polar(amp, kx * x + ky * y));
        let e = plan.kinetic_energy(&w).unwrap();
        assert!((e - (kx * kx + ky * ky) / 2.0).abs() < 1e-12);

        // ground state pi^{-1/2} exp(-r^2/2): integral of 1/2 |grad|^2 = 1/2
        let e = plan.kinetic_energy(&gaussian(g)).unwrap();
        assert!((e - 0.5).abs() < 1e-9, "{e}");
    }

    #[test]
    fn phase_cache_matches_recomputation() {
        let g = grid();
        let plan = SpectralPlan::new(g);
        for dt in [0.01, 0.02, 0.03, 0.04, 0.05, 0.01] {
            let table = plan.kinetic_phases(dt);
            for iy in 0..g.ny() {
                for ix in 0..g.nx() {
                    let k2 = plan.wavenumbers().k_squared(ix, iy);
                    let want = Complex64::from_polar(1.0, -0.5 * k2 * dt);
                    assert_eq!(table[g.index(ix, iy)], want);
                }
            }
        }
        assert!(plan.phases.lock().unwrap().len() <= PHASE_CACHE_SLOTS);
    }

    #[test]
    fn dealias_zeroes_high_modes() {
        let g = GridSpec::square(8.0, 32).unwrap();
        let plan = SpectralPlan::new(g).with_dealias(true);
        assert!(plan.dealias());
        let k = plan.wavenumbers().kx[15];
        let f = Field2D::from_fn(g, |x, _| Complex64::new(0.0, k * x).exp());
        let stepped = plan.kinetic_step(&f, 0.01).unwrap();
        assert!(stepped.l2_norm().unwrap() < 1e-12);
        let k = plan.wavenumbers().kx[2];
        let f = Field2D::from_fn(g, |x, _| Complex64::new(0.0, k * x).exp());
        let n0 = f.l2_norm().unwrap();
        let n1 = plan.kinetic_step(&f, 0.01).unwrap().l2_norm().unwrap();
        assert!((n0 - n1).abs() < 1e-12);
    }
}
