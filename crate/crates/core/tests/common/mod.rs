//! Closed-form reference solutions used as independent oracles.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use strang_gpe::prelude::*;

/// Free-space solution of `i psi_t = -1/2 Lap psi` from `g_sigma`:
/// `(sigma pi)^{-1/2} (1 + i t/sigma)^{-1} exp(-r^2 / (2 (sigma + i t)))`.
pub fn spreading_gaussian(sigma: f64, t: f64, x: f64, y: f64) -> Complex64 {
    let r2 = x * x + y * y;
    let i = Complex64::i();
    let pref = 1.0 / (sigma * PI).sqrt() / (1.0 + i * t / sigma);
    pref * (-r2 / (2.0 * (sigma + i * t))).exp()
}

/// The same solution on the periodic box: sum over periodic images.
pub fn periodic_spreading_gaussian(
    sigma: f64,
    t: f64,
    x: f64,
    y: f64,
    lx: f64,
    ly: f64,
    images: i32,
) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for n in -images..=images {
        for m in -images..=images {
            sum += spreading_gaussian(sigma, t, x + n as f64 * lx, y + m as f64 * ly);
        }
    }
    sum
}

/// Harmonic-oscillator ground state `pi^{-1/2} exp(-r^2/2)` of `-1/2 Lap + r^2/2`.
pub fn harmonic_ground_state(grid: GridSpec) -> Field2D {
    Field2D::from_fn(grid, |x, y| {
        Complex64::new((-(x * x + y * y) / 2.0).exp() / PI.sqrt(), 0.0)
    })
}

/// `integral w(x,y) |psi|^2` by nodal quadrature.
pub fn moment(f: &Field2D, w: impl Fn(f64, f64) -> f64) -> f64 {
    let g = f.grid();
    let mut sum = 0.0;
    for iy in 0..g.ny() {
        for ix in 0..g.nx() {
            sum += w(g.x(ix), g.y(iy)) * f.at(ix, iy).norm_sqr();
        }
    }
    sum * g.cell_area()
}

pub fn configs_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}
