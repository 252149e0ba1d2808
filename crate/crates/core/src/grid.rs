//! Uniform discretization of a periodic rectangle `[a,b) x [c,d)`.
//!
//! Nodes sit at `(a + ix*dx, c + iy*dy)` for `ix < nx`, `iy < ny`; the right
//! and top edges are identified with the left and bottom ones and are never
//! stored. Field samples are row-major with `x` varying fastest.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    nx: usize,
    ny: usize,
}

impl GridSpec {
    pub fn new(a: f64, b: f64, c: f64, d: f64, nx: usize, ny: usize) -> Result<Self> {
        check_axis('x', a, b, nx)?;
        check_axis('y', c, d, ny)?;
        Ok(GridSpec { a, b, c, d, nx, ny })
    }

    /// Square grid `[-half, half)^2` with `m` points per side.
    pub fn square(half: f64, m: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, m, m)
    }

    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        (self.b - self.a) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.d - self.c) / self.ny as f64
    }

    /// Quadrature weight of a single node.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    pub fn lengths(&self) -> (f64, f64) {
        (self.b - self.a, self.d - self.c)
    }

    pub fn same_bounds(&self, other: &GridSpec) -> bool {
        self.a == other.a && self.b == other.b && self.c == other.c && self.d == other.d
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.a + ix as f64 * self.dx()
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.c + iy as f64 * self.dy()
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn coordinates(&self) -> (Vec<f64>, Vec<f64>) {
        let x = (0..self.nx).map(|j| self.x(j)).collect();
        let y = (0..self.ny).map(|k| self.y(k)).collect();
        (x, y)
    }

    pub fn wavenumbers(&self) -> WaveNumbers {
        let (lx, ly) = self.lengths();
        WaveNumbers {
            kx: bin_wavenumbers(self.nx, lx),
            ky: bin_wavenumbers(self.ny, ly),
        }
    }
}

fn check_axis(axis: char, lo: f64, hi: f64, n: usize) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::InvalidBounds { axis, lo, hi });
    }
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidPointCount { axis, count: n });
    }
    Ok(())
}

fn bin_wavenumbers(n: usize, length: f64) -> Vec<f64> {
    let fundamental = 2.0 * PI / length;
    (0..n)
        .map(|j| {
            let f = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
            fundamental * f
        })
        .collect()
}

/// Angular wavenumbers of each DFT bin, in bin order (`0, 1, .., n/2-1, -n/2, .., -1`).
#[derive(Debug, Clone, PartialEq)]
pub struct WaveNumbers {
    pub kx: Vec<f64>,
    pub ky: Vec<f64>,
}

impl WaveNumbers {
    #[inline]
    pub fn k_squared(&self, ix: usize, iy: usize) -> f64 {
        self.kx[ix] * self.kx[ix] + self.ky[iy] * self.ky[iy]
    }
}

/// Complex samples of a wave function on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl Field2D {
    pub fn zeros(grid: GridSpec) -> Self {
        Field2D {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_values(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        Ok(Field2D { grid, values })
    }

    /// Samples `f(x, y)` at every node.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> Complex64) -> Self {
        let (xs, ys) = grid.coordinates();
        let mut values = Vec::with_capacity(grid.len());
        for &y in &ys {
            for &x in &xs {
                values.push(f(x, y));
            }
        }
        Field2D { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[self.grid.index(ix, iy)]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scaled(&self, factor: Complex64) -> Field2D {
        Field2D {
            grid: self.grid,
            values: self.values.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn ensure_same_grid(&self, other: &Field2D) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// Discrete mass `sum |psi|^2 dx dy`.
    pub fn mass(&self) -> Result<f64> {
        if !self.is_finite() {
            return Err(Error::NonFinite("l2 norm"));
        }
        Ok(self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_area())
    }

    /// Discrete L² norm `sqrt(sum |psi|^2 dx dy)`.
    pub fn l2_norm(&self) -> Result<f64> {
        self.mass().map(f64::sqrt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn box_grid_spacings() {
        let g = GridSpec::square(8.0, 512).unwrap();
        assert_eq!(g.dx(), 1.0 / 32.0);
        assert_eq!(g.dy(), 1.0 / 32.0);
        let g = GridSpec::square(8.0, 256).unwrap();
        assert_eq!(g.dx(), 1.0 / 16.0);
        let g = GridSpec::new(0.0, 1.0, 0.0, 1.0, 4, 4).unwrap();
        assert_eq!((g.dx(), g.dy()), (0.25, 0.25));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(
            GridSpec::new(1.0, 1.0, 0.0, 1.0, 4, 4),
            Err(Error::InvalidBounds { axis: 'x', .. })
        ));
        assert!(matches!(
            GridSpec::new(0.0, 1.0, 2.0, 1.0, 4, 4),
            Err(Error::InvalidBounds { axis: 'y', .. })
        ));
        assert!(matches!(
            GridSpec::new(0.0, 1.0, 0.0, 1.0, 5, 4),
            Err(Error::InvalidPointCount { axis: 'x', count: 5 })
        ));
        assert!(matches!(
            GridSpec::new(0.0, 1.0, 0.0, 1.0, 4, 2),
            Err(Error::InvalidPointCount { axis: 'y', count: 2 })
        ));
        assert!(GridSpec::new(f64::NAN, 1.0, 0.0, 1.0, 4, 4).is_err());
    }

    #[test]
    fn coordinates_exclude_right_endpoint() {
        let g = GridSpec::new(-8.0, 8.0, 0.0, 1.0, 4, 4).unwrap();
        let (x, y) = g.coordinates();
        assert_eq!(x, vec![-8.0, -4.0, 0.0, 4.0]);
        assert_eq!(y, vec![0.0, 0.25, 0.5, 0.75]);
        let g = GridSpec::square(8.0, 512).unwrap();
        assert_eq!(g.coordinates().0[256], 0.0);
    }

    #[test]
    fn wavenumbers_in_bin_order() {
        let g = GridSpec::new(-8.0, 8.0, 0.0, 2.0 * PI, 4, 8).unwrap();
        let k = g.wavenumbers();
        let expected = [0.0, PI / 8.0, -PI / 4.0, -PI / 8.0];
        for (a, b) in k.kx.iter().zip(expected) {
            assert!(close(*a, b, 1e-15));
        }
        let expected = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0];
        for (a, b) in k.ky.iter().zip(expected) {
            assert!(close(*a, b, 1e-14));
        }
    }

    #[test]
    fn wavenumber_symmetry_and_periodicity() {
        let g = GridSpec::new(-3.0, 5.5, -1.0, 1.0, 64, 16).unwrap();
        let k = g.wavenumbers();
        let n = g.nx();
        assert_eq!(k.kx[0], 0.0);
        for j in 1..n / 2 {
            assert_eq!(k.kx[n - j], -k.kx[j]);
        }
        let kmax = k.kx.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(close(kmax, PI * n as f64 / 8.5, 1e-12));
        let (lx, _) = g.lengths();
        for &kx in &k.kx {
            let z = Complex64::new(0.0, kx * lx).exp();
            assert!((z - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn norm_of_constant_is_sqrt_area() {
        let g = GridSpec::square(8.0, 64).unwrap();
        let f = Field2D::from_fn(g, |_, _| Complex64::new(1.0, 0.0));
        assert!(close(f.l2_norm().unwrap(), 16.0, 1e-12));
        let f = f.scaled(Complex64::new(0.0, -3.0));
        assert!(close(f.l2_norm().unwrap(), 48.0, 1e-11));
    }

    #[test]
    fn norm_of_zero_and_nan() {
        let g = GridSpec::square(1.0, 4).unwrap();
        assert_eq!(Field2D::zeros(g).l2_norm().unwrap(), 0.0);
        let mut f = Field2D::zeros(g);
        f.values_mut()[3] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(f.l2_norm(), Err(Error::NonFinite(_))));
    }

    #[test]
    fn from_values_checks_length() {
        let g = GridSpec::square(1.0, 4).unwrap();
        assert!(Field2D::from_values(g, vec![Complex64::default(); 15]).is_err());
        assert!(Field2D::from_values(g, vec![Complex64::default(); 16]).is_ok());
    }

    #[test]
    fn storage_is_x_fastest() {
        let g = GridSpec::new(0.0, 4.0, 0.0, 8.0, 4, 4).unwrap();
        let f = Field2D::from_fn(g, Complex64::new);
        assert_eq!(f.values()[1], Complex64::new(1.0, 0.0));
        assert_eq!(f.values()[4], Complex64::new(0.0, 2.0));
        assert_eq!(f.at(3, 2), Complex64::new(3.0, 4.0));
    }
}
